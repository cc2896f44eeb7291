#pragma once

#include <simplex_neumann/geometry.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace test_support {

using simplex_neumann::Simplexd;

inline std::mt19937_64& rng()
{
    static std::mt19937_64 engine(20240611u);
    return engine;
}

inline double uniform(double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Eigen::MatrixXd random_matrix(int rows, int cols, double lo = -1.0, double hi = 1.0)
{
    Eigen::MatrixXd m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = uniform(lo, hi);
    return m;
}

/// Random simplex whose edge matrix is reasonably conditioned.
inline Simplexd random_simplex(int n)
{
    for (;;) {
        const Eigen::MatrixXd v = random_matrix(n, n + 1, -2.0, 2.0);
        const Eigen::MatrixXd a = v.rightCols(n).colwise() - v.col(0);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
        const auto& sv = svd.singularValues();
        if (sv(n - 1) > 0.05 * sv(0)) return Simplexd(v);
    }
}

/// Haar-ish random orthogonal matrix from a QR decomposition.
inline Eigen::MatrixXd random_orthogonal(int n)
{
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_matrix(n, n));
    Eigen::MatrixXd q = qr.householderQ();
    return q;
}

inline double relative_error(double measured, double expected)
{
    return std::abs(measured - expected) / std::abs(expected);
}

} // namespace test_support
