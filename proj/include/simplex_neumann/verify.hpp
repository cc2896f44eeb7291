#pragma once

#include <simplex_neumann/exact_modes.hpp>
#include <simplex_neumann/fem.hpp>
#include <simplex_neumann/geometry.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace simplex_neumann {

struct FaceRecord {
    int face = 0;
    double predicted = 0.0; // 2 Vol_{n-1}(G_j) / (n Vol_n(T))
    double measured = 0.0;  // weighted flux; the plain Neumann mass when Gamma = I
    double residual = 0.0;  // |measured - predicted| / predicted
    double raw_mass = 0.0;  // h^2 int |d_nu u|^2
    double normal_weight = 1.0; // nu^T Gamma nu
};

struct NeumannReport {
    Simplexd simplex;
    std::string source; // "exact-oracle" or "fem"
    int level = -1;     // -1 for the exact oracle
    std::string mode;
    double eigenvalue = 0.0;
    int cluster_size = 1; // eigenvalues within 1e-8 relative of this one, itself included
    std::vector<FaceRecord> faces;
    std::optional<std::string> timestamp;

    double max_residual() const;
};

/// Quadrature masses of the closed-form alcove mode against the prediction.
/// `quad_points` = 0 uses the mode's default order.
NeumannReport verify_exact(const std::vector<int>& wavenumbers, int quad_points = 0);

struct FemRunConfig {
    Simplexd simplex = Simplexd::standard(2);
    std::optional<Eigen::MatrixXd> gamma; // identity when absent
    std::vector<int> levels{3, 4, 5, 6};
    int num_modes = 1;
    /// Exact eigenvalues, per mode, used for eigenvalue error columns.
    std::vector<double> reference_eigenvalues;
    int max_threads = 0; // 0 = hardware concurrency
    EigenSolverOptions solver;
};

struct ConvergenceRow {
    int level = 0;
    int mode = 0;
    double mesh_size = 0.0; // 2^-level
    double eigenvalue = 0.0;
    std::optional<double> eigenvalue_error;
    std::optional<double> eigenvalue_order;
    std::vector<double> face_residuals;
    std::vector<std::optional<double>> face_orders;
};

struct FemVerification {
    std::vector<NeumannReport> reports; // ordered by (level, mode)
    std::vector<ConvergenceRow> table;  // same order
    /// Richardson error bars of the raw masses from the two finest levels,
    /// indexed [mode][face]; empty with fewer than two levels.
    std::vector<std::vector<double>> error_bars;

    const NeumannReport& report(int level, int mode) const;
};

FemVerification verify_fem(const FemRunConfig& config);

/// Runs f(i) for i in [0, count) on up to `max_threads` workers.
void parallel_for(int count, int max_threads, const std::function<void(int)>& f);

/// Worker cap from SIMPLEX_NEUMANN_THREADS (0 or unset = hardware concurrency).
int threads_from_environment();

/// log2(e_coarse / e_fine).
double observed_order(double coarse_error, double fine_error);

} // namespace simplex_neumann
