#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "operators.hpp"

// Brute-force reference implementations used only for cross-validation in
// the tests.  Deliberately independent of the exact paths: plain loops and
// elementary arithmetic, no shared solver code.

namespace monorep {

enum class ExtremumMode { Sup, Inf };

// Exhaustive grid extremum at the probe resolution (grid sup <= true sup).
inline double grid_extremum(const std::function<double(const Vec&)>& f, const BoxProbe& probe,
                            ExtremumMode mode) {
    double best = mode == ExtremumMode::Sup ? -std::numeric_limits<double>::infinity()
                                            : std::numeric_limits<double>::infinity();
    for_each_grid(probe, 0, probe.lo.size(), [&](const Vec& z) {
        double v = f(z);
        best = mode == ExtremumMode::Sup ? std::max(best, v) : std::min(best, v);
    });
    return best;
}

namespace detail_oracle {

inline void compositions(std::size_t total, std::size_t slots, std::vector<std::size_t>& cur,
                         const std::function<void(const std::vector<std::size_t>&)>& fn) {
    if (cur.size() + 1 == slots) {
        cur.push_back(total);
        fn(cur);
        cur.pop_back();
        return;
    }
    for (std::size_t k = 0; k <= total; ++k) {
        cur.push_back(k);
        compositions(total - k, slots, cur, fn);
        cur.pop_back();
    }
}

}  // namespace detail_oracle

// Minimum of sum(lambda_i * value_i) over rational lambda with denominator
// `steps` satisfying |sum lambda_i a_i - z| <= 1/steps^2; +inf when no such
// lambda exists on the simplex grid.  The admissible ball shrinks faster
// than the grid so the value error stays within one grid increment of the
// objective instead of tracking the hull's local slope.
inline double simplex_grid_convexhull_value(const std::vector<PairedPoint>& points,
                                            const std::vector<double>& values,
                                            const PairedPoint& z, std::size_t steps) {
    if (steps < 1 || points.size() != values.size() || points.empty())
        throw std::invalid_argument("simplex_grid_convexhull_value: bad inputs");
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> cur;
    detail_oracle::compositions(steps, points.size(), cur,
                                [&](const std::vector<std::size_t>& counts) {
        double obj = 0.0;
        std::vector<double> comb(2 * z.x.size(), 0.0);
        for (std::size_t i = 0; i < points.size(); ++i) {
            double lam = static_cast<double>(counts[i]) / static_cast<double>(steps);
            obj += lam * values[i];
            for (std::size_t j = 0; j < z.x.size(); ++j) {
                comb[j] += lam * points[i].x[j];
                comb[z.x.size() + j] += lam * points[i].xstar[j];
            }
        }
        double err2 = 0.0;
        for (std::size_t j = 0; j < z.x.size(); ++j) {
            double dx = comb[j] - z.x[j];
            double ds = comb[z.x.size() + j] - z.xstar[j];
            err2 += dx * dx + ds * ds;
        }
        double lim = 1.0 / static_cast<double>(steps * steps);
        if (err2 <= lim * lim && obj < best) best = obj;
    });
    return best;
}

// All-pairs monotonicity, no shortcuts.
inline bool pairwise_monotone_bruteforce(const std::vector<PairedPoint>& points) {
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (i == j) continue;
            double s = 0.0;
            for (std::size_t k = 0; k < points[i].x.size(); ++k)
                s += (points[i].x[k] - points[j].x[k]) * (points[i].xstar[k] - points[j].xstar[k]);
            if (s < -1e-12) return false;
        }
    return true;
}

}  // namespace monorep
