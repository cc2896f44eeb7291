#pragma once

#include <simplex_neumann/errors.hpp>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace simplex_neumann {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

inline constexpr int kMinSimplexDimension = 2;
inline constexpr int kMaxSimplexDimension = 4;

template <typename Scalar>
Scalar factorial(int n)
{
    Scalar result(1);
    for (int k = 2; k <= n; ++k) result *= Scalar(k);
    return result;
}

///
/// A non-degenerate n-simplex in R^n, n in {2, 3, 4}. Vertices are stored as
/// the columns of an n x (n+1) matrix. Vertex 0 is the affine base point and
/// face j is the facet opposite vertex j.
///
template <typename Scalar>
class Simplex {
public:
    using Matrix = MatrixX<Scalar>;
    using Vector = VectorX<Scalar>;

    explicit Simplex(Matrix vertices) : vertices_(std::move(vertices))
    {
        const auto n = vertices_.rows();
        if (n < kMinSimplexDimension || n > kMaxSimplexDimension) {
            throw InvalidArgument("simplex dimension must be 2, 3 or 4, got " + std::to_string(n));
        }
        if (vertices_.cols() != n + 1) {
            throw InvalidArgument("an n-simplex needs n+1 vertices");
        }
        if (!vertices_.allFinite()) {
            throw InvalidArgument("simplex vertices must be finite");
        }
        Scalar scale(0);
        for (Eigen::Index j = 0; j <= n; ++j) scale = std::max(scale, vertices_.col(j).norm());
        const Scalar det = edge_matrix().determinant();
        if (!(std::abs(det) >= Scalar(1e-14) * std::pow(scale, Scalar(n))) || scale == Scalar(0)) {
            throw DegenerateSimplex("simplex is degenerate (|det A| below 1e-14 of the vertex scale)");
        }
    }

    static Simplex from_points(const std::vector<std::vector<Scalar>>& points)
    {
        if (points.empty()) throw InvalidArgument("simplex has no vertices");
        const auto n = static_cast<Eigen::Index>(points.front().size());
        Matrix v(n, static_cast<Eigen::Index>(points.size()));
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (static_cast<Eigen::Index>(points[j].size()) != n) {
                throw InvalidArgument("simplex vertices have inconsistent dimensions");
            }
            for (Eigen::Index i = 0; i < n; ++i) v(i, Eigen::Index(j)) = points[j][std::size_t(i)];
        }
        return Simplex(std::move(v));
    }

    /// Origin plus the standard basis vectors.
    static Simplex standard(int n)
    {
        Matrix v = Matrix::Zero(n, n + 1);
        v.rightCols(n).setIdentity();
        return Simplex(std::move(v));
    }

    int dimension() const { return int(vertices_.rows()); }
    const Matrix& vertices() const { return vertices_; }
    auto vertex(int j) const { return vertices_.col(j); }

    /// Columns p_j - p_0, j = 1..n.
    Matrix edge_matrix() const
    {
        return vertices_.rightCols(vertices_.cols() - 1).colwise() - vertices_.col(0);
    }

    Vector centroid() const { return vertices_.rowwise().mean(); }

    template <typename Other>
    Simplex<Other> cast() const
    {
        return Simplex<Other>(vertices_.template cast<Other>());
    }

private:
    Matrix vertices_;
};

template <typename Scalar>
struct Face {
    int index = 0;
    std::vector<int> vertex_indices;
    VectorX<Scalar> normal;
    Scalar measure{};
};

///
/// Symmetric positive-definite coefficient matrix of the operator
/// -Gamma_ij h d_i h d_j, optionally carrying a factor B with Gamma = B B^T.
///
template <typename Scalar>
class EllipticCoefficients {
public:
    using Matrix = MatrixX<Scalar>;

    explicit EllipticCoefficients(const Matrix& gamma)
    {
        if (gamma.rows() != gamma.cols() || gamma.rows() == 0) {
            throw InvalidCoefficients("coefficient matrix must be square and non-empty");
        }
        if (!gamma.allFinite()) throw InvalidCoefficients("coefficient matrix has non-finite entries");
        const Scalar scale = gamma.cwiseAbs().maxCoeff();
        if (scale == Scalar(0) || (gamma - gamma.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12) * scale) {
            throw InvalidCoefficients("coefficient matrix is not symmetric");
        }
        gamma_ = (gamma + gamma.transpose()) / Scalar(2);
        Eigen::LLT<Matrix> llt(gamma_);
        if (llt.info() != Eigen::Success) {
            throw InvalidCoefficients("coefficient matrix is not positive definite");
        }
    }

    static EllipticCoefficients identity(int n) { return EllipticCoefficients(Matrix::Identity(n, n)); }

    static EllipticCoefficients from_factor(const Matrix& factor)
    {
        EllipticCoefficients c(factor * factor.transpose());
        c.factor_ = factor;
        return c;
    }

    int dimension() const { return int(gamma_.rows()); }
    const Matrix& gamma() const { return gamma_; }
    const std::optional<Matrix>& factor() const { return factor_; }

    /// nu^T Gamma nu, i.e. |B^T nu|^2.
    Scalar quadratic_form(const VectorX<Scalar>& nu) const { return nu.dot(gamma_ * nu); }

private:
    Matrix gamma_;
    std::optional<Matrix> factor_;
};

template <typename Scalar>
struct AffineMaps {
    MatrixX<Scalar> A;     // columns p_j - p_0
    MatrixX<Scalar> B;     // A^{-1}
    MatrixX<Scalar> gamma; // B B^T
};

template <typename Scalar>
Scalar volume(const Simplex<Scalar>& s)
{
    return std::abs(s.edge_matrix().determinant()) / factorial<Scalar>(s.dimension());
}

/// (d)-dimensional measure of the simplex spanned by the columns of `corners`
/// (d+1 points in R^n) from the Gram determinant of its edge vectors.
template <typename Derived>
typename Derived::Scalar simplex_measure(const Eigen::MatrixBase<Derived>& corners)
{
    using Scalar = typename Derived::Scalar;
    const auto d = corners.cols() - 1;
    if (d == 0) return Scalar(1);
    const MatrixX<Scalar> edges = corners.rightCols(d).colwise() - corners.col(0);
    const Scalar gram = (edges.transpose() * edges).determinant();
    return std::sqrt(std::max(gram, Scalar(0))) / factorial<Scalar>(int(d));
}

/// Gradients of the barycentric coordinates as columns (n x (n+1)).
template <typename Scalar>
MatrixX<Scalar> barycentric_gradients(const Simplex<Scalar>& s)
{
    const int n = s.dimension();
    const MatrixX<Scalar> inv = s.edge_matrix().inverse();
    MatrixX<Scalar> grads(n, n + 1);
    grads.rightCols(n) = inv.transpose();
    grads.col(0) = -grads.rightCols(n).rowwise().sum();
    return grads;
}

///
/// The n+1 faces of `s`; face j is opposite vertex j. Normals are the
/// normalized negative gradients of the barycentric coordinates, measures
/// come from the Gram determinant.
///
template <typename Scalar>
std::vector<Face<Scalar>> faces(const Simplex<Scalar>& s)
{
    const int n = s.dimension();
    const MatrixX<Scalar> grads = barycentric_gradients(s);
    std::vector<Face<Scalar>> result;
    result.reserve(std::size_t(n + 1));
    for (int j = 0; j <= n; ++j) {
        Face<Scalar> f;
        f.index = j;
        MatrixX<Scalar> corners(n, n);
        for (int k = 0, c = 0; k <= n; ++k) {
            if (k == j) continue;
            f.vertex_indices.push_back(k);
            corners.col(c++) = s.vertex(k);
        }
        f.normal = -grads.col(j).normalized();
        f.measure = simplex_measure(corners);
        result.push_back(std::move(f));
    }
    return result;
}

template <typename Scalar>
AffineMaps<Scalar> affine_maps(const Simplex<Scalar>& s)
{
    AffineMaps<Scalar> maps;
    maps.A = s.edge_matrix();
    maps.B = maps.A.inverse();
    const MatrixX<Scalar> g = maps.B * maps.B.transpose();
    maps.gamma = (g + g.transpose()) / Scalar(2);
    return maps;
}

/// Neumann data mass 2 Vol_{n-1}(G_j) / (n Vol_n(T)) carried by face j of
/// any L^2-normalized Dirichlet eigenfunction of the Laplacian on `s`.
template <typename Scalar>
Scalar predicted_neumann_mass(const Simplex<Scalar>& s, int j)
{
    const int n = s.dimension();
    if (j < 0 || j > n) {
        throw FaceIndexOutOfRange("face index " + std::to_string(j) + " outside [0, " + std::to_string(n) + "]");
    }
    const auto fs = faces(s);
    return Scalar(2) * fs[std::size_t(j)].measure / (Scalar(n) * volume(s));
}

template <typename Scalar>
std::vector<Scalar> predicted_neumann_masses(const Simplex<Scalar>& s)
{
    std::vector<Scalar> masses;
    for (int j = 0; j <= s.dimension(); ++j) masses.push_back(predicted_neumann_mass(s, j));
    return masses;
}

using Simplexd = Simplex<double>;
using Faced = Face<double>;
using EllipticCoefficientsd = EllipticCoefficients<double>;

} // namespace simplex_neumann
