#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "core.hpp"

// Small dense linear algebra: matrices, a Jacobi symmetric eigensolver,
// pseudo-inverse application, null spaces, and minimization of a PSD
// quadratic over an affine set.  Everything here is desk scale (n <= ~20).

namespace monorep {

struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a;  // row major

    Mat() = default;
    Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), a(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Mat from_rows(const std::vector<Vec>& rws) {
        if (rws.empty()) return Mat();
        Mat m(rws.size(), rws[0].size());
        for (std::size_t i = 0; i < rws.size(); ++i) {
            if (rws[i].size() != m.cols) throw std::invalid_argument("Mat: ragged rows");
            for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = rws[i][j];
        }
        return m;
    }

    Mat transposed() const {
        Mat t(cols, rows);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Vec apply(const Vec& x) const {
        if (x.size() != cols) throw std::invalid_argument("Mat::apply: dimension mismatch");
        Vec y(rows, 0.0);
        for (std::size_t i = 0; i < rows; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols; ++j) s += (*this)(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

    // transpose(this) * x
    Vec apply_transposed(const Vec& x) const {
        if (x.size() != rows) throw std::invalid_argument("Mat::apply_transposed: mismatch");
        Vec y(cols, 0.0);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) y[j] += (*this)(i, j) * x[i];
        return y;
    }

    Mat mul(const Mat& o) const {
        if (cols != o.rows) throw std::invalid_argument("Mat::mul: dimension mismatch");
        Mat r(rows, o.cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t k = 0; k < cols; ++k) {
                double v = (*this)(i, k);
                if (v == 0.0) continue;
                for (std::size_t j = 0; j < o.cols; ++j) r(i, j) += v * o(k, j);
            }
        return r;
    }

    bool is_symmetric(double tol = 1e-12) const {
        if (rows != cols) return false;
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = i + 1; j < cols; ++j)
                if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
        return true;
    }
};

inline Mat symmetric_part(const Mat& m) {
    Mat s(m.rows, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
    return s;
}

struct EigenSym {
    Vec values;   // ascending
    Mat vectors;  // columns are eigenvectors
};

// Cyclic Jacobi rotations; fine for the matrix sizes used here.
inline EigenSym eigen_symmetric(Mat s) {
    if (s.rows != s.cols) throw std::invalid_argument("eigen_symmetric: not square");
    const std::size_t n = s.rows;
    Mat v = Mat::identity(n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += s(i, j) * s(i, j);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(s(p, q)) < 1e-300) continue;
                double theta = (s(q, q) - s(p, p)) / (2.0 * s(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double skp = s(k, p), skq = s(k, q);
                    s(k, p) = c * skp - sn * skq;
                    s(k, q) = sn * skp + c * skq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double spk = s(p, k), sqk = s(q, k);
                    s(p, k) = c * spk - sn * sqk;
                    s(q, k) = sn * spk + c * sqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
    }
    EigenSym e;
    e.values.resize(n);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return s(i, i) < s(j, j); });
    e.vectors = Mat(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        e.values[j] = s(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) e.vectors(i, j) = v(i, order[j]);
    }
    return e;
}

struct PinvResult {
    bool in_range = false;
    Vec w;  // S^+ v
};

// Apply the Moore-Penrose inverse of a symmetric PSD matrix, with a range
// test: in_range iff ||S w - v|| <= 1e-8 ||v||.
inline PinvResult pseudo_inverse_apply(const Mat& s, const Vec& vin) {
    if (!s.is_symmetric(1e-12)) throw std::invalid_argument("pseudo_inverse_apply: asymmetric");
    EigenSym e = eigen_symmetric(s);
    const std::size_t n = s.rows;
    double emax = 0.0;
    for (double ev : e.values) emax = std::max(emax, std::abs(ev));
    double cutoff = 1e-9 * std::max(emax, 1e-300);
    Vec coeff(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) proj += e.vectors(i, j) * vin[i];
        coeff[j] = std::abs(e.values[j]) > cutoff ? proj / e.values[j] : 0.0;
    }
    PinvResult r;
    r.w.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) r.w[i] += e.vectors(i, j) * coeff[j];
    Vec resid = sub(s.apply(r.w), vin);
    r.in_range = norm2(resid) <= 1e-8 * std::max(norm2(vin), 1e-30);
    return r;
}

// Moore-Penrose inverse of a symmetric matrix as a matrix.
inline Mat pseudo_inverse_matrix(const Mat& s) {
    if (!s.is_symmetric(1e-12)) throw std::invalid_argument("pseudo_inverse_matrix: asymmetric");
    EigenSym e = eigen_symmetric(s);
    const std::size_t n = s.rows;
    double emax = 0.0;
    for (double ev : e.values) emax = std::max(emax, std::abs(ev));
    double cutoff = 1e-9 * std::max(emax, 1e-300);
    Mat p(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(e.values[j]) <= cutoff) continue;
        double inv = 1.0 / e.values[j];
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                p(r, c) += inv * e.vectors(r, j) * e.vectors(c, j);
    }
    return p;
}

// Orthonormal basis of the null space of A (columns of the result).
inline std::vector<Vec> null_space(const Mat& a, double tol = 1e-9) {
    Mat g = a.transposed().mul(a);  // cols x cols, symmetric PSD
    EigenSym e = eigen_symmetric(g);
    double emax = 0.0;
    for (double ev : e.values) emax = std::max(emax, std::abs(ev));
    double cut = tol * std::max(emax, 1.0);
    std::vector<Vec> basis;
    for (std::size_t j = 0; j < g.cols; ++j) {
        if (std::abs(e.values[j]) <= cut) {
            Vec v(g.cols);
            for (std::size_t i = 0; i < g.cols; ++i) v[i] = e.vectors(i, j);
            basis.push_back(v);
        }
    }
    return basis;
}

// Orthonormal basis of span{vs} via Gram-Schmidt.
inline std::vector<Vec> orthonormal_span(const std::vector<Vec>& vs, double tol = 1e-9) {
    std::vector<Vec> basis;
    for (const Vec& v0 : vs) {
        Vec v = v0;
        for (const Vec& b : basis) {
            double c = dot(v, b);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
        }
        double nv = norm2(v);
        if (nv > tol) basis.push_back(scale(1.0 / nv, v));
    }
    return basis;
}

inline std::size_t rank_of_span(const std::vector<Vec>& vs, double tol = 1e-9) {
    return orthonormal_span(vs, tol).size();
}

// Minimum-norm least-squares solution of A x = b; feasible says whether the
// residual vanishes.
struct LstsqResult {
    bool feasible = false;
    Vec x;
};

inline LstsqResult least_squares(const Mat& a, const Vec& b, double tol = 1e-8) {
    Mat g = a.transposed().mul(a);
    Vec atb = a.apply_transposed(b);
    PinvResult p = pseudo_inverse_apply(g, atb);
    LstsqResult r;
    r.x = p.w;
    Vec resid = sub(a.apply(r.x), b);
    double scl = std::max(1.0, norm2(b));
    r.feasible = norm2(resid) <= tol * scl;
    return r;
}

// Minimize (1/2) y'Qy + c'y + c0 over {y : E y = d}, Q symmetric PSD.
// Returns +inf if the affine set is empty, -inf if unbounded below.
inline ExtReal minimize_quadratic_on_affine(const Mat& q, const Vec& c, double c0,
                                            const Mat& e, const Vec& d, Vec* argmin = nullptr) {
    const std::size_t n = q.rows;
    Vec y0;
    std::vector<Vec> basis;
    if (e.rows == 0) {
        y0 = zeros(n);
        for (std::size_t i = 0; i < n; ++i) basis.push_back(unit(n, i));
    } else {
        LstsqResult ls = least_squares(e, d);
        if (!ls.feasible) return ExtReal::pos_inf();
        y0 = ls.x;
        basis = null_space(e);
    }
    // reduced problem in t: (1/2) t'H t + g't + f0 with y = y0 + N t
    const std::size_t k = basis.size();
    Vec qy0 = q.apply(y0);
    double f0 = 0.5 * dot(y0, qy0) + dot(c, y0) + c0;
    if (k == 0) {
        if (argmin) *argmin = y0;
        return ExtReal(f0);
    }
    Mat h(k, k);
    Vec g(k, 0.0);
    std::vector<Vec> qn(k);
    for (std::size_t j = 0; j < k; ++j) qn[j] = q.apply(basis[j]);
    for (std::size_t i = 0; i < k; ++i) {
        g[i] = dot(basis[i], qy0) + dot(c, basis[i]);
        for (std::size_t j = 0; j < k; ++j) h(i, j) = dot(basis[i], qn[j]);
    }
    h = symmetric_part(h);
    PinvResult p = pseudo_inverse_apply(h, scale(-1.0, g));
    if (!p.in_range) return ExtReal::neg_inf();
    Vec t = p.w;
    double val = f0 + 0.5 * dot(t, h.apply(t)) + dot(g, t);
    if (argmin) {
        Vec y = y0;
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t i = 0; i < n; ++i) y[i] += basis[j][i] * t[j];
        *argmin = y;
    }
    return ExtReal(val);
}

}  // namespace monorep
