#include <simplex_neumann/exact_modes.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

namespace simplex_neumann {

namespace {

constexpr double kPi = std::numbers::pi;

int permutation_sign(const std::vector<int>& perm)
{
    int sign = 1;
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) sign = -sign;
    return sign;
}

std::string join(const std::vector<int>& ks)
{
    std::string s;
    for (std::size_t i = 0; i < ks.size(); ++i) s += (i ? "," : "") + std::to_string(ks[i]);
    return s;
}

} // namespace

Simplexd alcove_simplex(int n)
{
    if (n < 2 || n > 3) throw InvalidArgument("alcove modes exist here for n = 2, 3 only");
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n + 1);
    for (int j = 1; j <= n; ++j) v.col(j).head(j).setOnes();
    return Simplexd(v);
}

AlcoveMode::AlcoveMode(std::vector<int> wavenumbers, Simplexd alcove)
    : wavenumbers_(std::move(wavenumbers)), alcove_(std::move(alcove))
{
    const int n = dimension();
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        Term t;
        t.sign = permutation_sign(perm);
        for (int i = 0; i < n; ++i) t.frequencies.push_back(wavenumbers_[std::size_t(perm[std::size_t(i)])] * kPi);
        terms_.push_back(std::move(t));
    } while (std::next_permutation(perm.begin(), perm.end()));

    double sum = 0.0;
    for (int k : wavenumbers_) sum += double(k) * k;
    eigenvalue_ = kPi * kPi * sum;
    h_ = 1.0 / std::sqrt(eigenvalue_);
}

AlcoveMode AlcoveMode::make(std::vector<int> wavenumbers, int volume_points)
{
    const int n = int(wavenumbers.size());
    if (n < 2 || n > 3) throw InvalidArgument("alcove modes need 2 or 3 wavenumbers");
    for (int k : wavenumbers)
        if (k < 1) throw InvalidArgument("wavenumbers must be positive integers");
    std::vector<int> sorted = wavenumbers;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw IdenticallyZeroMode("repeated wavenumber in (" + join(wavenumbers) + ")");
    }
    if (sorted != wavenumbers) {
        throw InvalidArgument("wavenumbers (" + join(wavenumbers) + ") must be listed in decreasing order");
    }
    AlcoveMode mode(std::move(wavenumbers), alcove_simplex(n));
    const int points = volume_points > 0 ? volume_points : mode.default_quadrature_points();
    const double norm2 = mode_l2_norm_squared(mode, collapsed_simplex_rule<double>(n, points));
    if (!(norm2 > 0.0)) throw NumericalBreakdown("alcove mode has vanishing norm under quadrature");
    mode.normalization_ = 1.0 / std::sqrt(norm2);
    return mode;
}

int AlcoveMode::default_quadrature_points() const
{
    const int total = std::accumulate(wavenumbers_.begin(), wavenumbers_.end(), 0);
    return 4 * total + 16;
}

double AlcoveMode::value(const Eigen::VectorXd& x) const
{
    double u = 0.0;
    for (const auto& t : terms_) {
        double p = t.sign;
        for (std::size_t i = 0; i < t.frequencies.size(); ++i) p *= std::sin(t.frequencies[i] * x[Eigen::Index(i)]);
        u += p;
    }
    return normalization_ * u;
}

Eigen::VectorXd AlcoveMode::gradient(const Eigen::VectorXd& x) const
{
    const int n = dimension();
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
    std::vector<double> s(static_cast<std::size_t>(n)), c(static_cast<std::size_t>(n));
    for (const auto& t : terms_) {
        for (int i = 0; i < n; ++i) {
            const double arg = t.frequencies[std::size_t(i)] * x[i];
            s[std::size_t(i)] = std::sin(arg);
            c[std::size_t(i)] = std::cos(arg);
        }
        for (int d = 0; d < n; ++d) {
            double p = t.sign * t.frequencies[std::size_t(d)] * c[std::size_t(d)];
            for (int i = 0; i < n; ++i)
                if (i != d) p *= s[std::size_t(i)];
            g[d] += p;
        }
    }
    return normalization_ * g;
}

double AlcoveMode::laplacian(const Eigen::VectorXd& x) const
{
    double lap = 0.0;
    for (const auto& t : terms_) {
        double prod = t.sign;
        double freq2 = 0.0;
        for (std::size_t i = 0; i < t.frequencies.size(); ++i) {
            prod *= std::sin(t.frequencies[i] * x[Eigen::Index(i)]);
            freq2 += t.frequencies[i] * t.frequencies[i];
        }
        lap -= freq2 * prod;
    }
    return normalization_ * lap;
}

double mode_l2_norm_squared(const AlcoveMode& mode, const QuadratureRule<double>& volume_rule)
{
    return mode_inner_product(mode, mode, volume_rule);
}

double mode_inner_product(const AlcoveMode& u, const AlcoveMode& v, const QuadratureRule<double>& volume_rule)
{
    if (u.dimension() != v.dimension()) throw InvalidArgument("modes live on alcoves of different dimension");
    const auto mapped = map_rule(volume_rule, u.alcove().vertices());
    double sum = 0.0;
    for (Eigen::Index q = 0; q < mapped.weights.size(); ++q) {
        const Eigen::VectorXd x = mapped.points.col(q);
        sum += mapped.weights[q] * u.value(x) * v.value(x);
    }
    return sum;
}

double neumann_mass_exact(const AlcoveMode& mode, const Faced& face, const QuadratureRule<double>& face_rule)
{
    const int n = mode.dimension();
    if (face_rule.dimension != n - 1) {
        throw QuadratureDimensionMismatch("face integrals need a rule of dimension " + std::to_string(n - 1));
    }
    Eigen::MatrixXd corners(n, n);
    for (int c = 0; c < n; ++c) corners.col(c) = mode.alcove().vertex(face.vertex_indices[std::size_t(c)]);
    const auto mapped = map_rule(face_rule, corners);
    double sum = 0.0;
    for (Eigen::Index q = 0; q < mapped.weights.size(); ++q) {
        const double dn = face.normal.dot(mode.gradient(mapped.points.col(q)));
        sum += mapped.weights[q] * dn * dn;
    }
    const double h = mode.semiclassical_h();
    return h * h * sum;
}

std::vector<double> neumann_masses_exact(const AlcoveMode& mode, const QuadratureRule<double>& face_rule)
{
    std::vector<double> masses;
    for (const auto& f : faces(mode.alcove())) masses.push_back(neumann_mass_exact(mode, f, face_rule));
    return masses;
}

std::vector<double> rellich_coefficients(const Simplexd& s, const Eigen::VectorXd& shift)
{
    if (shift.size() != s.dimension()) throw InvalidArgument("shift vector has the wrong dimension");
    std::vector<double> coeffs;
    for (const auto& f : faces(s)) {
        // Any point of the face works: x . nu is constant on its hyperplane.
        const Eigen::VectorXd p = s.vertex(f.vertex_indices.front());
        coeffs.push_back((p + shift).dot(f.normal));
    }
    return coeffs;
}

double rellich_identity_check(const AlcoveMode& mode, const Eigen::VectorXd& shift,
                              const QuadratureRule<double>& face_rule)
{
    const auto coeffs = rellich_coefficients(mode.alcove(), shift);
    const auto masses = neumann_masses_exact(mode, face_rule);
    double sum = 0.0;
    for (std::size_t j = 0; j < masses.size(); ++j) sum += coeffs[j] * masses[j];
    return std::abs(sum - 2.0);
}

Eigen::VectorXd rellich_solved_masses(const Simplexd& s)
{
    const int n = s.dimension();
    Eigen::MatrixXd system(n + 1, n + 1);
    for (int row = 0; row <= n; ++row) {
        Eigen::VectorXd shift = Eigen::VectorXd::Zero(n);
        if (row > 0) shift[row - 1] = 1.0;
        const auto coeffs = rellich_coefficients(s, shift);
        for (int j = 0; j <= n; ++j) system(row, j) = coeffs[std::size_t(j)];
    }
    return system.partialPivLu().solve(Eigen::VectorXd::Constant(n + 1, 2.0));
}

double rellich_consistency_residual(const AlcoveMode& mode, const QuadratureRule<double>& face_rule)
{
    const Eigen::VectorXd solved = rellich_solved_masses(mode.alcove());
    const auto masses = neumann_masses_exact(mode, face_rule);
    double worst = 0.0;
    for (std::size_t j = 0; j < masses.size(); ++j) {
        worst = std::max(worst, std::abs(masses[j] - solved[Eigen::Index(j)]) / solved[Eigen::Index(j)]);
    }
    return worst;
}

} // namespace simplex_neumann
