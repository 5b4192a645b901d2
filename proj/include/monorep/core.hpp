#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

// Core value types for the natural dual system Z = R^n x R^n:
// points z = (x, x*), the duality pairing p and the dual product z.w.

namespace monorep {

using Vec = std::vector<double>;

inline void check_dim(const Vec& a, const Vec& b, const char* where) {
    if (a.size() != b.size())
        throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

inline double dot(const Vec& a, const Vec& b) {
    check_dim(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Vec add(const Vec& a, const Vec& b) {
    check_dim(a, b, "add");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
    check_dim(a, b, "sub");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec scale(double t, const Vec& a) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = t * a[i];
    return r;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const Vec& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

inline Vec zeros(std::size_t n) { return Vec(n, 0.0); }

inline Vec unit(std::size_t n, std::size_t i, double s = 1.0) {
    Vec r(n, 0.0);
    r[i] = s;
    return r;
}

// A point of Z = X x X*.
struct PairedPoint {
    Vec x;
    Vec xstar;

    PairedPoint() = default;
    PairedPoint(Vec x_, Vec xstar_) : x(std::move(x_)), xstar(std::move(xstar_)) {
        check_dim(x, xstar, "PairedPoint");
    }

    std::size_t dim() const { return x.size(); }

    PairedPoint operator-(const PairedPoint& o) const {
        return PairedPoint(sub(x, o.x), sub(xstar, o.xstar));
    }
    PairedPoint operator+(const PairedPoint& o) const {
        return PairedPoint(add(x, o.x), add(xstar, o.xstar));
    }

    bool operator==(const PairedPoint& o) const { return x == o.x && xstar == o.xstar; }
};

inline double dist2(const PairedPoint& a, const PairedPoint& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.x.size(); ++i) {
        double d = a.x[i] - b.x[i];
        s += d * d;
        d = a.xstar[i] - b.xstar[i];
        s += d * d;
    }
    return s;
}

// Duality pairing p(x,x*) = <x,x*>.
inline double pairing_p(const PairedPoint& z) { return dot(z.x, z.xstar); }

// Natural dual product (x,x*).(y,y*) = x*(y) + y*(x).  Satisfies z.z = 2 p(z).
inline double dual_product(const PairedPoint& z, const PairedPoint& w) {
    check_dim(z.x, w.x, "dual_product");
    return dot(z.xstar, w.x) + dot(w.xstar, z.x);
}

// Extended real line R u {+inf}.  A -inf value can only arise as the
// unbounded branch of an infimum; representative functions never produce it.
struct ExtReal {
    enum class Kind { Finite, PosInf, NegInf };
    Kind kind = Kind::Finite;
    double value = 0.0;

    ExtReal() = default;
    ExtReal(double v) : kind(Kind::Finite), value(v) {
        if (!std::isfinite(v)) throw std::invalid_argument("ExtReal: non-finite double");
    }

    static ExtReal pos_inf() {
        ExtReal e;
        e.kind = Kind::PosInf;
        return e;
    }
    static ExtReal neg_inf() {
        ExtReal e;
        e.kind = Kind::NegInf;
        return e;
    }

    bool finite() const { return kind == Kind::Finite; }
    bool is_pos_inf() const { return kind == Kind::PosInf; }
    bool is_neg_inf() const { return kind == Kind::NegInf; }

    double as_double() const {
        switch (kind) {
            case Kind::Finite: return value;
            case Kind::PosInf: return std::numeric_limits<double>::infinity();
            default: return -std::numeric_limits<double>::infinity();
        }
    }

    ExtReal operator+(const ExtReal& o) const {
        if (is_pos_inf() || o.is_pos_inf()) {
            if (is_neg_inf() || o.is_neg_inf())
                throw std::domain_error("ExtReal: inf - inf");
            return pos_inf();
        }
        if (is_neg_inf() || o.is_neg_inf()) return neg_inf();
        return ExtReal(value + o.value);
    }

    bool operator==(const ExtReal& o) const {
        if (kind != o.kind) return false;
        return kind != Kind::Finite || value == o.value;
    }
    bool operator<(const ExtReal& o) const { return as_double() < o.as_double(); }
    bool operator<=(const ExtReal& o) const { return as_double() <= o.as_double(); }
};

inline std::ostream& operator<<(std::ostream& os, const ExtReal& e) {
    if (e.is_pos_inf()) return os << "+inf";
    if (e.is_neg_inf()) return os << "-inf";
    return os << e.value;
}

// |a-b| within atol, treating equal infinities as matching.
inline bool ext_close(const ExtReal& a, const ExtReal& b, double atol) {
    if (!a.finite() || !b.finite()) return a.kind == b.kind;
    return std::abs(a.value - b.value) <= atol;
}

}  // namespace monorep
