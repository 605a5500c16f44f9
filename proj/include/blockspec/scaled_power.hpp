#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "blockspec/linalg.hpp"

namespace blockspec {

/// A nonnegative magnitude carried as exp(log_scale) * unit so that values
/// like row norms of B^r (which overflow doubles for r ~ log n at large n)
/// can be compared in the log domain.
struct LogMagnitude {
    double log_scale = 0.0;
    double unit = 0.0;  // >= 0

    double log_value() const {
        if (unit <= 0.0) return -std::numeric_limits<double>::infinity();
        return log_scale + std::log(unit);
    }
    double value() const { return std::exp(log_scale) * unit; }
};

/// A matrix power m^r held as exp(log_scale) * base with the max-abs entry of
/// base renormalized into [0.5, 2] after every multiplication step.
struct ScaledPower {
    Matrix base;
    double log_scale = 0.0;
    int exponent = 1;

    int n() const { return static_cast<int>(base.rows()); }
    Matrix represented() const { return std::exp(log_scale) * base; }
};

namespace detail {
inline void renormalize(Matrix& m, double& log_scale) {
    const double a = m.cwiseAbs().maxCoeff();
    if (a > 0.0) {
        m /= a;
        log_scale += std::log(a);
    }
}
}  // namespace detail

inline ScaledPower scaled_power(const Matrix& m, int r) {
    if (r < 1) throw std::invalid_argument("scaled_power: exponent must be >= 1");
    ScaledPower p;
    p.base = m;
    p.exponent = r;
    detail::renormalize(p.base, p.log_scale);
    Matrix unit = p.base;  // m / exp(log_scale of the first step)
    const double unit_log = p.log_scale;
    for (int step = 1; step < r; ++step) {
        p.base = p.base * unit;
        p.log_scale += unit_log;
        detail::renormalize(p.base, p.log_scale);
    }
    return p;
}

/// l2 distance between rows i and j of the represented matrix.
inline LogMagnitude row_distance(const ScaledPower& p, int i, int j) {
    if (i < 0 || i >= p.n() || j < 0 || j >= p.n())
        throw std::invalid_argument("row_distance: index out of range");
    LogMagnitude d;
    d.log_scale = p.log_scale;
    d.unit = (p.base.row(i) - p.base.row(j)).norm();
    return d;
}

/// All pairwise log-domain row distances of the represented matrix,
/// via the Gram identity ||x_i - x_j||^2 = G_ii + G_jj - 2 G_ij.
/// Diagonal entries are -inf.
inline Matrix log_row_distances(const ScaledPower& p) {
    const int n = p.n();
    const Matrix gram = p.base * p.base.transpose();
    Matrix out(n, n);
    const double ninf = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        out(i, i) = ninf;
        for (int j = i + 1; j < n; ++j) {
            const double d2 = std::max(0.0, gram(i, i) + gram(j, j) - 2.0 * gram(i, j));
            const double v = d2 > 0.0 ? p.log_scale + 0.5 * std::log(d2) : ninf;
            out(i, j) = v;
            out(j, i) = v;
        }
    }
    return out;
}

}  // namespace blockspec
