#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace blockspec {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline bool is_symmetric(const Matrix& m, double tol = 0.0) {
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

/// Maximum l2 norm over the rows of m.
inline double max_row_norm(const Matrix& m) {
    return std::sqrt(m.rowwise().squaredNorm().maxCoeff());
}

/// Full symmetric eigendecomposition, eigenvalues sorted descending by
/// algebraic value, eigenvectors orthonormal and aligned with eigenvalues.
struct EigenDecomposition {
    Vector eigenvalues;
    Matrix eigenvectors;  // column i pairs with eigenvalues[i]

    int n() const { return static_cast<int>(eigenvalues.size()); }
};

inline EigenDecomposition sym_eigen(const Matrix& m, double tol = 1e-8) {
    if (m.rows() != m.cols()) throw std::invalid_argument("sym_eigen: matrix not square");
    if (tol <= 0) throw std::invalid_argument("sym_eigen: tol must be positive");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("sym_eigen: solver did not converge on " +
                                 std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                 " matrix");
    }
    const auto n = m.rows();
    EigenDecomposition d;
    d.eigenvalues = Vector(n);
    d.eigenvectors = Matrix(n, n);
    // Eigen returns ascending order; flip to descending algebraic value.
    for (Eigen::Index i = 0; i < n; ++i) {
        d.eigenvalues[i] = solver.eigenvalues()[n - 1 - i];
        d.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const double lam = d.eigenvalues[i];
        const double resid = (m * d.eigenvectors.col(i) - lam * d.eigenvectors.col(i)).norm();
        if (resid > tol * (1.0 + std::abs(lam)) * std::max(1.0, m.cwiseAbs().maxCoeff())) {
            throw std::runtime_error("sym_eigen: residual " + std::to_string(resid) +
                                     " exceeds tolerance for eigenpair " + std::to_string(i));
        }
    }
    return d;
}

/// Projection of u onto the span of the first k eigenvectors.
inline Vector project_topk(const EigenDecomposition& d, int k, const Vector& u) {
    if (k < 1 || k > d.n()) throw std::invalid_argument("project_topk: k out of range");
    const auto vk = d.eigenvectors.leftCols(k);
    return vk * (vk.transpose() * u);
}

/// Largest absolute eigenvalue.
inline double spectral_norm(const Matrix& m, double tol = 1e-10) {
    EigenDecomposition d = sym_eigen(m, std::max(tol, 1e-10));
    return d.eigenvalues.cwiseAbs().maxCoeff();
}

}  // namespace blockspec
