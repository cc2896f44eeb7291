#pragma once

#include <simplex_neumann/errors.hpp>
#include <simplex_neumann/geometry.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

namespace simplex_neumann {

/// Semiclassical Neumann masses on the three sides of a triangle.
template <typename Scalar>
struct TriangleNeumannData {
    Scalar N_a, N_b, N_c;
};

template <typename Scalar>
struct RecoveredTriangle {
    std::array<Scalar, 3> sides; // descending
    Scalar area;
};

/// Neumann masses on the faces of the standard n-simplex: `coordinate[j-1]` is
/// J_j on {y_j = 0}, `slanted` is J_0.
template <typename Scalar>
struct StandardSimplexNeumannData {
    VectorX<Scalar> coordinate;
    Scalar slanted;

    int dimension() const { return int(coordinate.size()); }
};

template <typename Scalar>
struct CounterexampleFactor {
    MatrixX<Scalar> B;
    MatrixX<Scalar> gamma;
    Scalar a, d;
};

/// Heron's formula in Kahan's ordering (sides sorted descending); throws
/// NoSuchTriangle if the sides violate the strict triangle inequality.
template <typename Scalar>
Scalar heron_area(Scalar a, Scalar b, Scalar c)
{
    std::array<Scalar, 3> s{a, b, c};
    std::sort(s.begin(), s.end(), std::greater<>());
    const auto [x, y, z] = s;
    const Scalar t1 = x + (y + z);
    const Scalar t2 = z - (x - y);
    const Scalar t3 = z + (x - y);
    const Scalar t4 = x + (y - z);
    if (!(z > Scalar(0)) || !(t2 > Scalar(0))) {
        throw NoSuchTriangle("lengths violate the strict triangle inequality");
    }
    const Scalar area = std::sqrt(t1 * t2 * t3 * t4) / Scalar(4);
    if (!(area > Scalar(0)) || !std::isfinite(area)) throw NoSuchTriangle("triangle has zero area");
    return area;
}

///
/// Rebuild a triangle (up to congruence) from its side masses. In 2D the
/// masses are N_x = x / Area, so the triangle with sides (N_a, N_b, N_c) has
/// area H = 1 / Area, and the sides are N_x / H.
///
template <typename Scalar>
RecoveredTriangle<Scalar> recover_triangle(const TriangleNeumannData<Scalar>& data)
{
    for (Scalar v : {data.N_a, data.N_b, data.N_c}) {
        if (!(v > Scalar(0)) || !std::isfinite(v)) throw NoSuchTriangle("Neumann masses must be positive and finite");
    }
    const Scalar H = heron_area(data.N_a, data.N_b, data.N_c);
    RecoveredTriangle<Scalar> t{{data.N_a / H, data.N_b / H, data.N_c / H}, Scalar(1) / H};
    std::sort(t.sides.begin(), t.sides.end(), std::greater<>());
    return t;
}

/// Side masses x / Area of a triangle with the given side lengths.
template <typename Scalar>
TriangleNeumannData<Scalar> triangle_forward(Scalar a, Scalar b, Scalar c)
{
    const Scalar area = heron_area(a, b, c);
    return {a / area, b / area, c / area};
}

///
/// Symmetric eigenvalue check: accepts matrices whose smallest eigenvalue is
/// above -rel_tol * largest, lifting non-positive eigenvalues to
/// rel_tol * largest. Anything else throws InconsistentData.
///
template <typename Scalar>
EllipticCoefficients<Scalar> validate_spd(const MatrixX<Scalar>& gamma, Scalar rel_tol = Scalar(1e-12))
{
    const MatrixX<Scalar> sym = (gamma + gamma.transpose()) / Scalar(2);
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(sym);
    if (es.info() != Eigen::Success) throw InconsistentData("eigenvalue check failed");
    const VectorX<Scalar>& ev = es.eigenvalues();
    const Scalar largest = ev.cwiseAbs().maxCoeff();
    if (!(largest > Scalar(0)) || ev.minCoeff() <= -rel_tol * largest || ev.maxCoeff() <= Scalar(0)) {
        throw InconsistentData("recovered coefficient matrix is not positive definite");
    }
    if (ev.minCoeff() > rel_tol * largest) return EllipticCoefficients<Scalar>(sym);
    const VectorX<Scalar> lifted = ev.cwiseMax(rel_tol * largest);
    const MatrixX<Scalar>& V = es.eigenvectors();
    return EllipticCoefficients<Scalar>(V * lifted.asDiagonal() * V.transpose());
}

///
/// Neumann masses of a normalized eigenfunction of -Gamma_ij h d_i h d_j on
/// the standard n-simplex: J_j = 2 / Gamma_jj on coordinate faces and
/// J_0 = 2 sqrt(n) / (nu_0^T Gamma nu_0) with nu_0 = n^{-1/2} (1, ..., 1).
/// For n > 2 the constant 2 sqrt(n) follows from I_0 = 2 sqrt(n) int |v|^2.
///
template <typename Scalar>
StandardSimplexNeumannData<Scalar> gamma_forward(const EllipticCoefficients<Scalar>& coeffs, int n)
{
    if (coeffs.dimension() != n) throw InvalidArgument("coefficient matrix dimension does not match n");
    if (n < 2 || n > kMaxSimplexDimension) throw InvalidArgument("gamma_forward supports n = 2..4");
    StandardSimplexNeumannData<Scalar> data;
    data.coordinate.resize(n);
    for (int j = 0; j < n; ++j) {
        data.coordinate[j] = Scalar(2) / coeffs.quadratic_form(-VectorX<Scalar>::Unit(n, j));
    }
    const VectorX<Scalar> nu0 = VectorX<Scalar>::Ones(n) / std::sqrt(Scalar(n));
    data.slanted = Scalar(2) * std::sqrt(Scalar(n)) / coeffs.quadratic_form(nu0);
    return data;
}

/// Closed-form inverse of gamma_forward in 2D.
template <typename Scalar>
EllipticCoefficients<Scalar> recover_gamma_2d(const StandardSimplexNeumannData<Scalar>& data)
{
    if (data.dimension() != 2) throw InvalidArgument("closed-form recovery exists in dimension 2 only");
    const Scalar J1 = data.coordinate[0], J2 = data.coordinate[1], J0 = data.slanted;
    for (Scalar v : {J1, J2, J0}) {
        if (!(v > Scalar(0)) || !std::isfinite(v)) throw InconsistentData("Neumann masses must be positive and finite");
    }
    MatrixX<Scalar> gamma(2, 2);
    gamma(0, 0) = Scalar(2) / J1;
    gamma(1, 1) = Scalar(2) / J2;
    gamma(0, 1) = gamma(1, 0) = Scalar(2) * std::sqrt(Scalar(2)) / J0 - Scalar(1) / J1 - Scalar(1) / J2;
    return validate_spd(gamma);
}

///
/// Three-dimensional family B(eps) with |B^T e_i|^2 = 1 and
/// |B^T (1,1,1)|^2 = 3 but B B^T != I for eps > 0. Throws EpsilonTooLarge
/// once 1 - d^2 - eps^2 <= 0 (a would not be real).
///
template <typename Scalar>
CounterexampleFactor<Scalar> counterexample_3d(Scalar eps)
{
    if (!(eps >= Scalar(0))) throw InvalidArgument("epsilon must be non-negative");
    if (!(eps < Scalar(1))) throw EpsilonTooLarge("epsilon must be below 1");
    const Scalar s = std::sqrt(Scalar(1) - eps * eps);
    const Scalar d = (Scalar(-3) * eps * s - eps * eps) / (s + eps);
    const Scalar a2 = Scalar(1) - d * d - eps * eps;
    if (!(a2 > Scalar(0))) {
        throw EpsilonTooLarge("1 - d^2 - eps^2 = " + std::to_string(double(a2)) + " is not positive");
    }
    const Scalar a = std::sqrt(a2);
    MatrixX<Scalar> Bt(3, 3);
    Bt << a, 0, 0,
          d, s, eps,
          eps, eps, s;
    CounterexampleFactor<Scalar> out;
    out.B = Bt.transpose();
    const MatrixX<Scalar> g = out.B * Bt;
    out.gamma = (g + g.transpose()) / Scalar(2);
    out.a = a;
    out.d = d;
    return out;
}

/// Largest epsilon (to `tol`) for which counterexample_3d is defined,
/// found by bisection on the sign of 1 - d^2 - eps^2.
template <typename Scalar>
Scalar counterexample_max_epsilon(Scalar tol = Scalar(1e-14))
{
    Scalar lo(0), hi(1);
    while (hi - lo > tol) {
        const Scalar mid = (lo + hi) / Scalar(2);
        try {
            counterexample_3d(mid);
            lo = mid;
        } catch (const EpsilonTooLarge&) {
            hi = mid;
        }
    }
    return lo;
}

} // namespace simplex_neumann
