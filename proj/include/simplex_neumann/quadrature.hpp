#pragma once

#include <simplex_neumann/errors.hpp>
#include <simplex_neumann/geometry.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

namespace simplex_neumann {

/// Gauss-Legendre rule on [0, 1].
template <typename Scalar>
struct GaussLegendre {
    VectorX<Scalar> nodes;
    VectorX<Scalar> weights;
};

namespace detail {

/// (P_n(x), P_n'(x)) by the three-term recurrence.
template <typename Scalar>
std::pair<Scalar, Scalar> legendre_with_derivative(int n, Scalar x)
{
    Scalar p0(1), p1 = x;
    for (int k = 2; k <= n; ++k) {
        const Scalar p2 = (Scalar(2 * k - 1) * x * p1 - Scalar(k - 1) * p0) / Scalar(k);
        p0 = p1;
        p1 = p2;
    }
    return {p1, Scalar(n) * (x * p1 - p0) / (x * x - Scalar(1))};
}

} // namespace detail

template <typename Scalar>
GaussLegendre<Scalar> gauss_legendre(int points)
{
    if (points < 1) throw InvalidArgument("Gauss-Legendre rule needs at least one point");
    GaussLegendre<Scalar> rule{VectorX<Scalar>(points), VectorX<Scalar>(points)};
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    for (int i = 0; i < (points + 1) / 2; ++i) {
        Scalar x = std::cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(points) + Scalar(0.5)));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, dp] = detail::legendre_with_derivative(points, x);
            const Scalar step = p / dp;
            x -= step;
            if (std::abs(step) <= Scalar(2) * eps) break;
        }
        const Scalar dp = detail::legendre_with_derivative(points, x).second;
        const Scalar w = Scalar(1) / ((Scalar(1) - x * x) * dp * dp);
        // [-1, 1] -> [0, 1]; w already carries the factor 1/2
        rule.nodes[i] = (Scalar(1) - x) / Scalar(2);
        rule.nodes[points - 1 - i] = (Scalar(1) + x) / Scalar(2);
        rule.weights[i] = w;
        rule.weights[points - 1 - i] = w;
    }
    return rule;
}

///
/// Quadrature on the reference d-simplex (origin plus the unit vectors of
/// R^d; the unit interval for d = 1). Nodes are columns in reference
/// coordinates; weights sum to 1/d!. `order` is the total polynomial degree
/// integrated exactly.
///
template <typename Scalar>
struct QuadratureRule {
    int dimension = 0;
    int order = 0;
    MatrixX<Scalar> nodes;
    VectorX<Scalar> weights;

    Eigen::Index size() const { return weights.size(); }
};

///
/// Collapsed (Duffy) tensor Gauss-Legendre rule with `points` nodes per
/// direction. The map x = t1 (e1 + t2 ((e2 - e1) + t3 (e3 - e2))) has
/// Jacobian t1^{d-1} t2^{d-2}, so the rule is exact to degree 2 points - d.
///
template <typename Scalar>
QuadratureRule<Scalar> collapsed_simplex_rule(int dimension, int points)
{
    if (dimension < 1 || dimension > 3) throw InvalidArgument("collapsed rules support dimensions 1..3");
    const auto gl = gauss_legendre<Scalar>(points);
    QuadratureRule<Scalar> rule;
    rule.dimension = dimension;
    rule.order = 2 * points - dimension;
    Eigen::Index total = 1;
    for (int d = 0; d < dimension; ++d) total *= points;
    rule.nodes.resize(dimension, total);
    rule.weights.resize(total);

    std::vector<int> idx(std::size_t(dimension), 0);
    for (Eigen::Index q = 0; q < total; ++q) {
        Eigen::Index rem = q;
        for (int d = dimension - 1; d >= 0; --d) {
            idx[std::size_t(d)] = int(rem % points);
            rem /= points;
        }
        // Build x from the innermost collapse outwards.
        VectorX<Scalar> x = VectorX<Scalar>::Zero(dimension);
        Scalar w(1);
        Scalar prefix(1);
        for (int d = 0; d < dimension; ++d) {
            const Scalar t = gl.nodes[idx[std::size_t(d)]];
            w *= gl.weights[idx[std::size_t(d)]] * std::pow(t, Scalar(dimension - 1 - d));
            // coordinate d picks up prefix * (1 - t) unless it is the last
            if (d + 1 < dimension) {
                x[d] = prefix * t * (Scalar(1) - gl.nodes[idx[std::size_t(d + 1)]]);
                prefix *= t;
            } else {
                x[d] = prefix * t;
            }
        }
        rule.nodes.col(q) = x;
        rule.weights[q] = w;
    }
    return rule;
}

/// Points and weights of `rule` pushed onto the simplex spanned by the columns
/// of `corners` (d+1 points in R^n).
template <typename Scalar>
struct MappedRule {
    MatrixX<Scalar> points;
    VectorX<Scalar> weights;
};

template <typename Scalar>
MappedRule<Scalar> map_rule(const QuadratureRule<Scalar>& rule, const MatrixX<Scalar>& corners)
{
    if (corners.cols() != rule.dimension + 1) {
        throw QuadratureDimensionMismatch("rule of dimension " + std::to_string(rule.dimension) +
                                          " cannot integrate over a simplex with " +
                                          std::to_string(corners.cols()) + " corners");
    }
    const MatrixX<Scalar> edges = corners.rightCols(rule.dimension).colwise() - corners.col(0);
    const Scalar jac = simplex_measure(corners) * factorial<Scalar>(rule.dimension);
    MappedRule<Scalar> mapped;
    mapped.points = (edges * rule.nodes).colwise() + corners.col(0);
    mapped.weights = rule.weights * jac;
    return mapped;
}

} // namespace simplex_neumann
