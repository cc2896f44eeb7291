#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <simplex_neumann/inverse.hpp>

#include <numbers>

using namespace simplex_neumann;
using test_support::uniform;

namespace {

const double kSqrt2 = std::numbers::sqrt2;
const double kSqrt3 = std::numbers::sqrt3;

// Random SPD matrix with condition number at most `cond`.
Eigen::MatrixXd random_spd(int n, double cond)
{
    const Eigen::MatrixXd Q = test_support::random_orthogonal(n);
    Eigen::VectorXd ev(n);
    const double lo = std::log(1.0 / std::sqrt(cond)), hi = std::log(std::sqrt(cond));
    for (int i = 0; i < n; ++i) ev[i] = std::exp(uniform(lo, hi));
    const Eigen::MatrixXd g = Q * ev.asDiagonal() * Q.transpose();
    return (g + g.transpose()) / 2.0;
}

// Side masses from explicit vertex coordinates (independent of Heron).
TriangleNeumannData<double> masses_from_vertices(const Eigen::Vector2d& p, const Eigen::Vector2d& q,
                                                 const Eigen::Vector2d& r)
{
    const Eigen::Vector2d u = q - p, v = r - p;
    const double area = 0.5 * std::abs(u.x() * v.y() - u.y() * v.x());
    return {(q - r).norm() / area, (p - r).norm() / area, (p - q).norm() / area};
}

} // namespace

TEST_CASE("Heron's formula")
{
    CHECK(heron_area(3.0, 4.0, 5.0) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(heron_area(1.0, 1.0, 1.0) == doctest::Approx(kSqrt3 / 4).epsilon(1e-15));
    CHECK_THROWS_AS(heron_area(1.0, 1.0, 2.0), NoSuchTriangle);
    CHECK_THROWS_AS(heron_area(1.0, 1.0, 5.0), NoSuchTriangle);
    // Needle: Kahan ordering keeps relative accuracy.
    const double a = 1.0, c = 1e-7;
    const double exact = 0.5 * c * std::sqrt(a * a - c * c / 4.0);
    CHECK(heron_area(a, a, c) == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("triangle recovery examples")
{
    const auto t = recover_triangle(TriangleNeumannData<double>{2.0, 2.0, 2 * kSqrt2});
    CHECK(t.sides[0] == doctest::Approx(kSqrt2).epsilon(1e-15));
    CHECK(t.sides[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.sides[2] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.area == doctest::Approx(0.5).epsilon(1e-15));

    const double e = 4.0 / kSqrt3;
    const auto eq = recover_triangle(TriangleNeumannData<double>{e, e, e});
    for (double s : eq.sides) CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eq.area == doctest::Approx(kSqrt3 / 4).epsilon(1e-14));

    CHECK_THROWS_AS(recover_triangle(TriangleNeumannData<double>{1.0, 1.0, 5.0}), NoSuchTriangle);
    CHECK_THROWS_AS(recover_triangle(TriangleNeumannData<double>{1.0, 1.0, 2.0}), NoSuchTriangle);
    CHECK_THROWS_AS(recover_triangle(TriangleNeumannData<double>{-1.0, 1.0, 1.0}), NoSuchTriangle);
    CHECK_THROWS_AS(recover_triangle(TriangleNeumannData<double>{std::nan(""), 1.0, 1.0}), NoSuchTriangle);
}

TEST_CASE("triangle round trip")
{
    for (int trial = 0; trial < 1000; ++trial) {
        Eigen::Vector2d p, q, r;
        std::array<double, 3> sides{};
        for (;;) {
            p = test_support::random_matrix(2, 1, 0, 1);
            q = test_support::random_matrix(2, 1, 0, 1);
            r = test_support::random_matrix(2, 1, 0, 1);
            sides = {(q - r).norm(), (p - r).norm(), (p - q).norm()};
            const Eigen::Vector2d u = q - p, v = r - p;
            if (std::abs(u.x() * v.y() - u.y() * v.x()) > 1e-3) break;
        }
        std::sort(sides.begin(), sides.end(), std::greater<>());
        const auto t = recover_triangle(masses_from_vertices(p, q, r));
        for (int i = 0; i < 3; ++i) CHECK(std::abs(t.sides[std::size_t(i)] / sides[std::size_t(i)] - 1.0) < 1e-10);
    }
}

TEST_CASE("triangle recovery scales inversely with the data")
{
    const auto d = triangle_forward(3.0, 4.0, 5.0);
    for (double c : {0.5, 2.0, 10.0}) {
        const auto t1 = recover_triangle(d);
        const auto t2 = recover_triangle(TriangleNeumannData<double>{c * d.N_a, c * d.N_b, c * d.N_c});
        for (int i = 0; i < 3; ++i)
            CHECK(t2.sides[std::size_t(i)] == doctest::Approx(t1.sides[std::size_t(i)] / c).epsilon(1e-13));
    }
}

TEST_CASE("gamma forward map")
{
    const auto I2 = gamma_forward(EllipticCoefficientsd::identity(2), 2);
    CHECK(I2.coordinate[0] == 2.0);
    CHECK(I2.coordinate[1] == 2.0);
    CHECK(I2.slanted == doctest::Approx(2 * kSqrt2).epsilon(1e-15));

    const auto I3 = gamma_forward(EllipticCoefficientsd::identity(3), 3);
    for (int j = 0; j < 3; ++j) CHECK(I3.coordinate[j] == 2.0);
    CHECK(I3.slanted == doctest::Approx(2 * kSqrt3).epsilon(1e-15));

    Eigen::Matrix2d g;
    g << 4, 0, 0, 1;
    const auto d = gamma_forward(EllipticCoefficientsd(g), 2);
    CHECK(d.coordinate[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(d.coordinate[1] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(d.slanted == doctest::Approx(4 * kSqrt2 / 5).epsilon(1e-15));

    CHECK_THROWS_AS(gamma_forward(EllipticCoefficientsd::identity(2), 3), InvalidArgument);
}

TEST_CASE("gamma recovery examples")
{
    StandardSimplexNeumannData<double> d{Eigen::Vector2d(2, 2), 2 * kSqrt2};
    CHECK((recover_gamma_2d(d).gamma() - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-12);

    StandardSimplexNeumannData<double> literal{Eigen::Vector2d(2, 2), 2.828427124746190};
    CHECK((recover_gamma_2d(literal).gamma() - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-12);

    // J_0 = 1 gives Gamma_12 = 2 sqrt 2 - 1 > 1 = sqrt(Gamma_11 Gamma_22).
    StandardSimplexNeumannData<double> bad{Eigen::Vector2d(2, 2), 1.0};
    CHECK_THROWS_AS(recover_gamma_2d(bad), InconsistentData);

    // J_0 = 100 gives Gamma_12 = 2 sqrt 2 / 100 - 1, which is still inside (-1, 1).
    StandardSimplexNeumannData<double> close{Eigen::Vector2d(2, 2), 100.0};
    const auto g = recover_gamma_2d(close).gamma();
    CHECK(g(0, 1) == doctest::Approx(2 * kSqrt2 / 100 - 1).epsilon(1e-14));
    CHECK(g.determinant() > 0.0);

    StandardSimplexNeumannData<double> negative{Eigen::Vector2d(-2, 2), 1.0};
    CHECK_THROWS_AS(recover_gamma_2d(negative), InconsistentData);
    StandardSimplexNeumannData<double> wrong_n{Eigen::Vector3d(2, 2, 2), 1.0};
    CHECK_THROWS_AS(recover_gamma_2d(wrong_n), InvalidArgument);
}

TEST_CASE("gamma round trip")
{
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::MatrixXd g = random_spd(2, 1e4);
        const auto back = recover_gamma_2d(gamma_forward(EllipticCoefficientsd(g), 2)).gamma();
        CHECK((back - g).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("validate_spd")
{
    CHECK_THROWS_AS(validate_spd<double>(-Eigen::MatrixXd::Identity(2, 2)), InconsistentData);
    Eigen::Matrix2d singular;
    singular << 1, 1, 1, 1;
    // Smallest eigenvalue is 0, within the relative tolerance: lifted, not rejected.
    const auto lifted = validate_spd<double>(singular);
    CHECK((lifted.gamma() - singular).norm() < 1e-11);
    Eigen::Matrix2d indefinite;
    indefinite << 1, 2, 2, 1;
    CHECK_THROWS_AS(validate_spd<double>(indefinite), InconsistentData);
}

TEST_CASE("orthogonal factors are invisible to the forward map")
{
    for (int n : {2, 3}) {
        const auto ref = gamma_forward(EllipticCoefficientsd::identity(n), n);
        for (int trial = 0; trial < 50; ++trial) {
            const Eigen::MatrixXd Q = test_support::random_orthogonal(n);
            const auto d = gamma_forward(EllipticCoefficientsd::from_factor(Q), n);
            CHECK((d.coordinate - ref.coordinate).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(std::abs(d.slanted - ref.slanted) < 1e-12);
        }
    }
}

TEST_CASE("three-dimensional counterexample")
{
    SUBCASE("eps = 0 is the identity")
    {
        const auto c = counterexample_3d(0.0);
        CHECK(c.B.isIdentity(0.0));
        CHECK(c.gamma.isIdentity(0.0));
        CHECK(c.a == 1.0);
        CHECK(c.d == 0.0);
    }
    SUBCASE("quadratic forms and non-uniqueness")
    {
        const auto ref = gamma_forward(EllipticCoefficientsd::identity(3), 3);
        for (double eps : {0.01, 0.05, 0.1, 0.2}) {
            const auto c = counterexample_3d(eps);
            const Eigen::MatrixXd Bt = c.B.transpose();
            for (int i = 0; i < 3; ++i) CHECK(std::abs(Bt.col(i).squaredNorm() - 1.0) < 1e-12);
            CHECK(std::abs((Bt * Eigen::Vector3d::Ones()).squaredNorm() - 3.0) < 1e-12);
            const EllipticCoefficientsd coeffs(c.gamma);
            const double gap = (c.gamma - Eigen::Matrix3d::Identity()).cwiseAbs().rowwise().sum().maxCoeff();
            CHECK(gap > eps / 2);
            if (eps == 0.1) CHECK(gap > 0.1);
            const auto d = gamma_forward(coeffs, 3);
            CHECK((d.coordinate - ref.coordinate).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(std::abs(d.slanted - ref.slanted) < 1e-12);
        }
    }
    SUBCASE("continuity in eps")
    {
        double prev_gap = 0.0;
        for (int i = 1; i <= 30; ++i) {
            const double eps = 0.01 * i;
            const auto c = counterexample_3d(eps);
            const auto c2 = counterexample_3d(eps + 1e-7);
            CHECK((c2.gamma - c.gamma).cwiseAbs().maxCoeff() < 1e-5);
            const double gap = (c.gamma - Eigen::Matrix3d::Identity()).norm();
            CHECK(gap > prev_gap);
            prev_gap = gap;
        }
    }
    SUBCASE("range of eps")
    {
        const double emax = counterexample_max_epsilon<double>();
        CHECK(emax > 0.2);
        CHECK(emax < 1.0);
        CHECK_NOTHROW(counterexample_3d(emax * (1 - 1e-9)));
        CHECK_THROWS_AS(counterexample_3d(std::min(0.999, emax * 1.01)), EpsilonTooLarge);
        CHECK_THROWS_AS(counterexample_3d(1.0), EpsilonTooLarge);
        CHECK_THROWS_AS(counterexample_3d(-0.1), InvalidArgument);
    }
}
