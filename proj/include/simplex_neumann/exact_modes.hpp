#pragma once

#include <simplex_neumann/geometry.hpp>
#include <simplex_neumann/quadrature.hpp>

#include <Eigen/Dense>

#include <vector>

namespace simplex_neumann {

///
/// Closed-form Dirichlet eigenfunction on the order simplex ("alcove")
/// {1 >= x_1 >= ... >= x_n >= 0}, n in {2, 3}:
///
///     u(x) = c * sum_{sigma in S_n} sgn(sigma) prod_i sin(k_{sigma(i)} pi x_i)
///
/// with eigenvalue pi^2 sum k_i^2. The constant c is computed by quadrature so
/// that ||u||_{L^2(alcove)} = 1.
///
class AlcoveMode {
public:
    /// Throws IdenticallyZeroMode unless the wavenumbers are strictly
    /// decreasing positive integers. `volume_points` = 0 picks the default
    /// order for the normalization quadrature.
    static AlcoveMode make(std::vector<int> wavenumbers, int volume_points = 0);

    int dimension() const { return int(wavenumbers_.size()); }
    const std::vector<int>& wavenumbers() const { return wavenumbers_; }
    double eigenvalue() const { return eigenvalue_; }
    double semiclassical_h() const { return h_; }
    double normalization() const { return normalization_; }
    const Simplexd& alcove() const { return alcove_; }

    double value(const Eigen::VectorXd& x) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
    /// Sum of the analytic second derivatives.
    double laplacian(const Eigen::VectorXd& x) const;

    /// Gauss-Legendre points per direction resolving |grad u|^2 to roughly
    /// machine precision: at least 4 max(k) + 10.
    int default_quadrature_points() const;

private:
    AlcoveMode(std::vector<int> wavenumbers, Simplexd alcove);

    struct Term {
        double sign;
        std::vector<double> frequencies; // k_{sigma(i)} pi for coordinate i
    };

    std::vector<int> wavenumbers_;
    Simplexd alcove_;
    std::vector<Term> terms_;
    double eigenvalue_ = 0.0;
    double h_ = 0.0;
    double normalization_ = 1.0;
};

/// Vertices (0,..,0), (1,0,..,0), (1,1,0,..), ..., (1,..,1).
Simplexd alcove_simplex(int n);

/// Integral of u^2 over the alcove with the given volume rule.
double mode_l2_norm_squared(const AlcoveMode& mode, const QuadratureRule<double>& volume_rule);

/// Integral of u v over the alcove of two modes of the same dimension.
double mode_inner_product(const AlcoveMode& u, const AlcoveMode& v, const QuadratureRule<double>& volume_rule);

/// h^2 * int_face |nu . grad u|^2 dS by quadrature with a rule of dimension n-1.
double neumann_mass_exact(const AlcoveMode& mode, const Faced& face, const QuadratureRule<double>& face_rule);

/// Neumann masses of every face of the alcove, in face order.
std::vector<double> neumann_masses_exact(const AlcoveMode& mode, const QuadratureRule<double>& face_rule);

/// Per-face coefficients (p + m) . nu_j of the boundary identity
/// sum_j ((p + m) . nu_j) N_j = 2, constant on each face.
std::vector<double> rellich_coefficients(const Simplexd& s, const Eigen::VectorXd& shift);

/// |sum_j ((x + m) . nu_j) N_j - 2| with the quadrature masses of `mode`.
double rellich_identity_check(const AlcoveMode& mode, const Eigen::VectorXd& shift,
                              const QuadratureRule<double>& face_rule);

/// Face masses obtained by solving the boundary identity for n+1 shifts
/// (0, e_1, ..., e_n) as a linear system; depends only on the geometry.
Eigen::VectorXd rellich_solved_masses(const Simplexd& s);

/// Largest relative gap between the masses solved from the boundary identity
/// and the quadrature masses of `mode`.
double rellich_consistency_residual(const AlcoveMode& mode, const QuadratureRule<double>& face_rule);

} // namespace simplex_neumann
