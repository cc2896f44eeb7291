#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <simplex_neumann/quadrature.hpp>

#include <cmath>
#include <functional>

using namespace simplex_neumann;

namespace {

double factorial_d(int n) { return factorial<double>(n); }

// Integral of prod x_i^{a_i} over the reference d-simplex: prod a_i! / (sum a_i + d)!.
double monomial_oracle(const std::vector<int>& a)
{
    double num = 1.0;
    int total = 0;
    for (int k : a) {
        num *= factorial_d(k);
        total += k;
    }
    return num / factorial_d(total + int(a.size()));
}

double integrate_monomial(const QuadratureRule<double>& rule, const std::vector<int>& a)
{
    double sum = 0.0;
    for (Eigen::Index q = 0; q < rule.size(); ++q) {
        double v = 1.0;
        for (std::size_t i = 0; i < a.size(); ++i) v *= std::pow(rule.nodes(Eigen::Index(i), q), a[i]);
        sum += rule.weights[q] * v;
    }
    return sum;
}

} // namespace

TEST_CASE("Gauss-Legendre nodes and weights on [0,1]")
{
    const auto g2 = gauss_legendre<double>(2);
    CHECK(g2.nodes[0] == doctest::Approx(0.5 - 0.5 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(g2.nodes[1] == doctest::Approx(0.5 + 0.5 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(g2.weights.sum() == doctest::Approx(1.0).epsilon(1e-15));

    for (int p : {1, 5, 20, 60}) {
        const auto g = gauss_legendre<double>(p);
        CHECK(std::abs(g.weights.sum() - 1.0) < 1e-14);
        CHECK((g.nodes.array() > 0.0).all());
        CHECK((g.nodes.array() < 1.0).all());
        // Exact for x^k, k <= 2p - 1.
        for (int k = 0; k <= 2 * p - 1; ++k) {
            const double q = (g.weights.array() * g.nodes.array().pow(k)).sum();
            CHECK(std::abs(q - 1.0 / (k + 1)) < 1e-13);
        }
    }
    CHECK_THROWS_AS(gauss_legendre<double>(0), InvalidArgument);
}

TEST_CASE("collapsed rules: weight sums and monomial exactness")
{
    for (int d : {1, 2, 3}) {
        for (int points : {2, 4, 7}) {
            const auto rule = collapsed_simplex_rule<double>(d, points);
            CHECK(rule.order == 2 * points - d);
            CHECK(std::abs(rule.weights.sum() - 1.0 / factorial_d(d)) < 1e-14);
            CHECK((rule.weights.array() > 0.0).all());
            // Nodes lie inside the reference simplex.
            for (Eigen::Index q = 0; q < rule.size(); ++q) {
                CHECK((rule.nodes.col(q).array() >= 0.0).all());
                CHECK(rule.nodes.col(q).sum() <= 1.0 + 1e-15);
            }
            // Every monomial of total degree <= order.
            const int deg = rule.order;
            std::vector<int> a(std::size_t(d), 0);
            std::function<void(int, int)> walk = [&](int i, int left) {
                if (i == d) {
                    const double exact = monomial_oracle(a);
                    CHECK(std::abs(integrate_monomial(rule, a) - exact) < 1e-14 + 1e-12 * exact);
                    return;
                }
                for (int k = 0; k <= left; ++k) {
                    a[std::size_t(i)] = k;
                    walk(i + 1, left - k);
                }
            };
            walk(0, deg);
        }
    }
    CHECK_THROWS_AS(collapsed_simplex_rule<double>(4, 3), InvalidArgument);
}

TEST_CASE("collapsed rule is not exact one degree above its order")
{
    const auto rule = collapsed_simplex_rule<double>(2, 3); // order 4
    const std::vector<int> a{5, 0};
    CHECK(std::abs(integrate_monomial(rule, a) - monomial_oracle(a)) > 1e-8);
}

TEST_CASE("mapped rules integrate over physical simplices")
{
    const auto rule = collapsed_simplex_rule<double>(2, 5);
    // Triangle embedded in R^3: area by cross product, centroid by average.
    Eigen::MatrixXd corners(3, 3);
    corners << 0.0, 2.0, 0.5,
               1.0, 0.0, 1.5,
               0.0, 1.0, 3.0;
    const auto m = map_rule(rule, corners);
    const Eigen::Vector3d u = corners.col(1) - corners.col(0), v = corners.col(2) - corners.col(0);
    const double area = 0.5 * u.cross(v).norm();
    CHECK(m.weights.sum() == doctest::Approx(area).epsilon(1e-14));
    const Eigen::Vector3d centroid = corners.rowwise().mean();
    const Eigen::Vector3d first_moment = m.points * m.weights;
    CHECK((first_moment / area - centroid).norm() < 1e-13);

    CHECK_THROWS_AS(map_rule(rule, Eigen::MatrixXd(Eigen::MatrixXd::Zero(3, 4))), QuadratureDimensionMismatch);
}

TEST_CASE("quadrature in long double")
{
    const auto rule = collapsed_simplex_rule<long double>(3, 6);
    CHECK(std::abs(double(rule.weights.sum() - 1.0L / 6.0L)) < 1e-17);
}
