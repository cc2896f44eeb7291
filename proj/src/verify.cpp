#include <simplex_neumann/verify.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace simplex_neumann {

double NeumannReport::max_residual() const
{
    double worst = 0.0;
    for (const auto& f : faces) worst = std::max(worst, f.residual);
    return worst;
}

const NeumannReport& FemVerification::report(int level, int mode) const
{
    for (const auto& r : reports) {
        if (r.level == level && r.mode == std::to_string(mode)) return r;
    }
    throw InvalidArgument("no report for level " + std::to_string(level) + ", mode " + std::to_string(mode));
}

double observed_order(double coarse_error, double fine_error)
{
    return std::log2(coarse_error / fine_error);
}

int threads_from_environment()
{
    if (const char* env = std::getenv("SIMPLEX_NEUMANN_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return int(v);
    }
    return 0;
}

void parallel_for(int count, int max_threads, const std::function<void(int)>& f)
{
    int workers = max_threads > 0 ? max_threads : int(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

NeumannReport verify_exact(const std::vector<int>& wavenumbers, int quad_points)
{
    const AlcoveMode mode = AlcoveMode::make(wavenumbers, quad_points);
    const int n = mode.dimension();
    const int points = quad_points > 0 ? quad_points : mode.default_quadrature_points();
    const auto rule = collapsed_simplex_rule<double>(n - 1, points);

    NeumannReport report{.simplex = mode.alcove(), .source = "exact-oracle"};
    for (std::size_t i = 0; i < wavenumbers.size(); ++i) {
        report.mode += (i ? "," : "") + std::to_string(wavenumbers[i]);
    }
    report.eigenvalue = mode.eigenvalue();
    for (const auto& f : faces(mode.alcove())) {
        FaceRecord rec;
        rec.face = f.index;
        rec.predicted = predicted_neumann_mass(mode.alcove(), f.index);
        rec.measured = neumann_mass_exact(mode, f, rule);
        rec.raw_mass = rec.measured;
        rec.residual = std::abs(rec.measured - rec.predicted) / rec.predicted;
        report.faces.push_back(rec);
    }
    return report;
}

FemVerification verify_fem(const FemRunConfig& config)
{
    const Simplexd& s = config.simplex;
    const int n = s.dimension();
    const EllipticCoefficientsd coeffs =
        config.gamma ? EllipticCoefficientsd(*config.gamma) : EllipticCoefficientsd::identity(n);
    if (coeffs.dimension() != n) throw InvalidCoefficients("coefficient matrix dimension does not match the simplex");
    if (config.levels.empty()) throw InvalidArgument("no refinement levels requested");
    if (!std::is_sorted(config.levels.begin(), config.levels.end()) ||
        std::adjacent_find(config.levels.begin(), config.levels.end()) != config.levels.end()) {
        throw InvalidArgument("refinement levels must be strictly ascending");
    }
    if (config.num_modes < 1) throw InvalidArgument("at least one mode is required");

    const auto simplex_faces = faces(s);
    std::vector<double> predicted, weights;
    for (int j = 0; j <= n; ++j) {
        predicted.push_back(predicted_neumann_mass(s, j));
        weights.push_back(coeffs.quadratic_form(simplex_faces[std::size_t(j)].normal));
    }

    const int num_levels = int(config.levels.size());
    std::vector<std::vector<NeumannReport>> per_level(static_cast<std::size_t>(num_levels));
    parallel_for(num_levels, config.max_threads, [&](int li) {
        const int level = config.levels[std::size_t(li)];
        const FemSystem sys = assemble(refine(s, level), coeffs);
        const auto pairs = solve_eigenpairs(sys, config.num_modes, config.solver);
        std::vector<NeumannReport> reports;
        for (int m = 0; m < config.num_modes; ++m) {
            const auto& pair = pairs[std::size_t(m)];
            NeumannReport rep{.simplex = s, .source = "fem", .level = level, .mode = std::to_string(m)};
            rep.eigenvalue = pair.eigenvalue;
            rep.cluster_size = int(std::count_if(pairs.begin(), pairs.end(), [&](const FemEigenpair& q) {
                return std::abs(q.eigenvalue - pair.eigenvalue) < 1e-8 * pair.eigenvalue;
            }));
            for (int j = 0; j <= n; ++j) {
                const NeumannFlux flux = neumann_mass_fem(pair, sys, j);
                FaceRecord rec;
                rec.face = j;
                rec.predicted = predicted[std::size_t(j)];
                rec.measured = flux.weighted;
                rec.raw_mass = flux.raw;
                rec.normal_weight = weights[std::size_t(j)];
                rec.residual = std::abs(rec.measured - rec.predicted) / rec.predicted;
                rep.faces.push_back(rec);
            }
            reports.push_back(std::move(rep));
        }
        per_level[std::size_t(li)] = std::move(reports);
    });

    FemVerification out;
    for (int li = 0; li < num_levels; ++li) {
        for (int m = 0; m < config.num_modes; ++m) {
            const NeumannReport& rep = per_level[std::size_t(li)][std::size_t(m)];
            ConvergenceRow row;
            row.level = rep.level;
            row.mode = m;
            row.mesh_size = std::ldexp(1.0, -rep.level);
            row.eigenvalue = rep.eigenvalue;
            const bool has_ref = std::size_t(m) < config.reference_eigenvalues.size();
            if (has_ref) row.eigenvalue_error = std::abs(rep.eigenvalue - config.reference_eigenvalues[std::size_t(m)]);
            const NeumannReport* prev = li > 0 ? &per_level[std::size_t(li - 1)][std::size_t(m)] : nullptr;
            const double ratio_exp = prev ? double(rep.level - prev->level) : 1.0;
            if (prev && has_ref) {
                const double prev_err = std::abs(prev->eigenvalue - config.reference_eigenvalues[std::size_t(m)]);
                row.eigenvalue_order = observed_order(prev_err, *row.eigenvalue_error) / ratio_exp;
            }
            for (int j = 0; j <= n; ++j) {
                row.face_residuals.push_back(rep.faces[std::size_t(j)].residual);
                if (prev) {
                    row.face_orders.push_back(
                        observed_order(prev->faces[std::size_t(j)].residual, rep.faces[std::size_t(j)].residual) / ratio_exp);
                } else {
                    row.face_orders.push_back(std::nullopt);
                }
            }
            out.table.push_back(std::move(row));
            out.reports.push_back(rep);
        }
    }
    if (num_levels >= 2) {
        const auto& fine = per_level[std::size_t(num_levels - 1)];
        const auto& coarse = per_level[std::size_t(num_levels - 2)];
        // First-order extrapolation: bar = |m_fine - (2 m_fine - m_coarse)|.
        for (int m = 0; m < config.num_modes; ++m) {
            std::vector<double> bars;
            for (int j = 0; j <= n; ++j) {
                bars.push_back(std::abs(fine[std::size_t(m)].faces[std::size_t(j)].raw_mass -
                                        coarse[std::size_t(m)].faces[std::size_t(j)].raw_mass));
            }
            out.error_bars.push_back(std::move(bars));
        }
    }
    return out;
}

} // namespace simplex_neumann
