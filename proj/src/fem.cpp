#include <simplex_neumann/fem.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <numeric>
#include <random>

namespace simplex_neumann {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Barycentric gradients (n x (n+1)) and volume of cell c.
std::pair<Eigen::MatrixXd, double> cell_gradients(const SimplexMesh& mesh, int c)
{
    const int n = mesh.dimension;
    const Eigen::MatrixXd corners = mesh.cell_corners(c);
    const Eigen::MatrixXd edges = corners.rightCols(n).colwise() - corners.col(0);
    Eigen::MatrixXd grads(n, n + 1);
    grads.rightCols(n) = edges.inverse().transpose();
    grads.col(0) = -grads.rightCols(n).rowwise().sum();
    return {grads, std::abs(edges.determinant()) / factorial<double>(n)};
}

void normalize_sign(Eigen::VectorXd& v)
{
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0.0) v = -v;
}

std::vector<FemEigenpair> make_pairs(const Eigen::VectorXd& values, const Eigen::MatrixXd& vectors,
                                     const std::vector<int>& order, int count)
{
    std::vector<FemEigenpair> pairs;
    for (int i = 0; i < count; ++i) {
        const int idx = order[std::size_t(i)];
        FemEigenpair p;
        p.eigenvalue = values[idx];
        p.coefficients = vectors.col(idx);
        normalize_sign(p.coefficients);
        p.semiclassical_h = 1.0 / std::sqrt(p.eigenvalue);
        pairs.push_back(std::move(p));
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const FemEigenpair& a, const FemEigenpair& b) { return a.eigenvalue < b.eigenvalue; });
    return pairs;
}

std::vector<FemEigenpair> solve_dense(const FemSystem& sys, int count)
{
    const Eigen::MatrixXd K(sys.stiffness);
    const Eigen::MatrixXd M(sys.mass);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success) throw NumericalBreakdown("dense generalized eigensolver failed");
    std::vector<int> order(static_cast<std::size_t>(count));
    std::iota(order.begin(), order.end(), 0);
    return make_pairs(es.eigenvalues(), es.eigenvectors(), order, count);
}

// Block shift-invert subspace iteration with Rayleigh-Ritz on (K, M).
std::vector<FemEigenpair> solve_subspace(const FemSystem& sys, int count, const EigenSolverOptions& opt)
{
    const SparseMatrix& K = sys.stiffness;
    const SparseMatrix& M = sys.mass;
    const int n = sys.num_dofs();
    const int block = std::min(n, std::max(2 * count, count + 8));

    const SparseMatrix shifted = K - opt.shift * M;
    Eigen::SimplicialLDLT<SparseMatrix> factor(shifted);
    if (factor.info() != Eigen::Success) throw NumericalBreakdown("factorization of K - shift M failed");

    std::mt19937 rng(12345u);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::MatrixXd X(n, block);
    for (Eigen::Index j = 0; j < X.cols(); ++j)
        for (Eigen::Index i = 0; i < X.rows(); ++i) X(i, j) = dist(rng);

    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        const Eigen::MatrixXd Y = factor.solve(M * X);
        if (factor.info() != Eigen::Success) throw NumericalBreakdown("shift-invert solve failed");
        Eigen::MatrixXd Kr = Y.transpose() * (K * Y);
        Eigen::MatrixXd Mr = Y.transpose() * (M * Y);
        Kr = 0.5 * (Kr + Kr.transpose()).eval();
        Mr = 0.5 * (Mr + Mr.transpose()).eval();
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ritz(Kr, Mr);
        if (ritz.info() != Eigen::Success) throw NumericalBreakdown("Rayleigh-Ritz step failed");
        X = Y * ritz.eigenvectors();
        const Eigen::VectorXd& theta = ritz.eigenvalues();

        std::vector<int> order(static_cast<std::size_t>(block));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return std::abs(theta[a] - opt.shift) < std::abs(theta[b] - opt.shift);
        });

        bool converged = true;
        for (int i = 0; i < count && converged; ++i) {
            const int idx = order[std::size_t(i)];
            const Eigen::VectorXd mx = M * X.col(idx);
            const double res = (K * X.col(idx) - theta[idx] * mx).norm() / mx.norm();
            converged = res <= opt.tolerance * std::abs(theta[idx]);
        }
        if (converged) return make_pairs(theta, X, order, count);
    }
    throw NumericalBreakdown("subspace iteration did not converge in " + std::to_string(opt.max_iterations) +
                             " iterations");
}

} // namespace

FemSystem assemble(SimplexMesh mesh, const EllipticCoefficientsd& coefficients)
{
    const int n = mesh.dimension;
    if (coefficients.dimension() != n) {
        throw InvalidCoefficients("coefficient matrix is " + std::to_string(coefficients.dimension()) +
                                  "x" + std::to_string(coefficients.dimension()) + " but the mesh is " +
                                  std::to_string(n) + "-dimensional");
    }
    const Eigen::MatrixXd& gamma = coefficients.gamma();
    const int nv = mesh.num_vertices();

    std::vector<char> boundary(std::size_t(nv), 0);
    for (int v = 0; v < nv; ++v) boundary[std::size_t(v)] = (mesh.barycentric.col(v).array() == 0.0).any();

    FemSystem sys{.mesh = std::move(mesh), .coefficients = coefficients};
    sys.dof_of_vertex.assign(std::size_t(nv), -1);
    for (int v = 0; v < nv; ++v) {
        if (!boundary[std::size_t(v)]) {
            sys.dof_of_vertex[std::size_t(v)] = int(sys.interior_vertices.size());
            sys.interior_vertices.push_back(v);
        }
    }

    const Eigen::MatrixXd local_mass_pattern =
        (Eigen::MatrixXd::Ones(n + 1, n + 1) + Eigen::MatrixXd::Identity(n + 1, n + 1)) / double((n + 1) * (n + 2));

    std::vector<Triplet> k_full, m_full, k_red, m_red;
    const auto entries = std::size_t(sys.mesh.num_cells()) * std::size_t((n + 1) * (n + 1));
    k_full.reserve(entries);
    m_full.reserve(entries);
    for (int c = 0; c < sys.mesh.num_cells(); ++c) {
        const auto [grads, vol] = cell_gradients(sys.mesh, c);
        Eigen::MatrixXd kl = vol * grads.transpose() * gamma * grads;
        kl = 0.5 * (kl + kl.transpose()).eval();
        const Eigen::MatrixXd ml = vol * local_mass_pattern;
        for (int a = 0; a <= n; ++a) {
            const int va = sys.mesh.cells(a, c);
            const int da = sys.dof_of_vertex[std::size_t(va)];
            for (int b = 0; b <= n; ++b) {
                const int vb = sys.mesh.cells(b, c);
                const int db = sys.dof_of_vertex[std::size_t(vb)];
                k_full.emplace_back(va, vb, kl(a, b));
                m_full.emplace_back(va, vb, ml(a, b));
                if (da >= 0 && db >= 0) {
                    k_red.emplace_back(da, db, kl(a, b));
                    m_red.emplace_back(da, db, ml(a, b));
                }
            }
        }
    }
    const int nd = sys.num_dofs();
    sys.stiffness_full.resize(nv, nv);
    sys.mass_full.resize(nv, nv);
    sys.stiffness.resize(nd, nd);
    sys.mass.resize(nd, nd);
    sys.stiffness_full.setFromTriplets(k_full.begin(), k_full.end());
    sys.mass_full.setFromTriplets(m_full.begin(), m_full.end());
    sys.stiffness.setFromTriplets(k_red.begin(), k_red.end());
    sys.mass.setFromTriplets(m_red.begin(), m_red.end());
    return sys;
}

std::vector<FemEigenpair> solve_eigenpairs(const FemSystem& system, int count, const EigenSolverOptions& options)
{
    if (count < 1 || count > system.num_dofs()) {
        throw InvalidArgument("requested " + std::to_string(count) + " eigenpairs from a system with " +
                              std::to_string(system.num_dofs()) + " interior dofs");
    }
    if (system.num_dofs() <= options.dense_threshold) return solve_dense(system, count);
    return solve_subspace(system, count, options);
}

double eigen_residual(const FemSystem& system, const FemEigenpair& pair)
{
    const Eigen::VectorXd mx = system.mass * pair.coefficients;
    return (system.stiffness * pair.coefficients - pair.eigenvalue * mx).norm() / mx.norm();
}

NeumannFlux neumann_mass_fem(const FemEigenpair& pair, const FemSystem& system, int face)
{
    const SimplexMesh& mesh = system.mesh;
    const int n = mesh.dimension;
    if (face < 0 || face > n) {
        throw FaceIndexOutOfRange("face index " + std::to_string(face) + " outside [0, " + std::to_string(n) + "]");
    }
    if (pair.coefficients.size() != system.num_dofs()) {
        throw InvalidArgument("eigenvector does not belong to this system");
    }
    Eigen::VectorXd u = Eigen::VectorXd::Zero(mesh.num_vertices());
    for (int d = 0; d < system.num_dofs(); ++d) u[system.interior_vertices[std::size_t(d)]] = pair.coefficients[d];

    const Eigen::VectorXd nu = faces(mesh.parent)[std::size_t(face)].normal;
    const Eigen::VectorXd gamma_nu = system.coefficients.gamma() * nu;
    NeumannFlux flux;
    for (const auto& f : mesh.boundary_facets) {
        if (f.parent_face != face) continue;
        const Eigen::MatrixXd grads = cell_gradients(mesh, f.cell).first;
        Eigen::VectorXd local(n + 1);
        for (int r = 0; r <= n; ++r) local[r] = u[mesh.cells(r, f.cell)];
        const Eigen::VectorXd g = grads * local;
        const double area = simplex_measure(mesh.facet_corners(f));
        const double dn = nu.dot(g);
        flux.raw += dn * dn * area;
        flux.weighted += dn * gamma_nu.dot(g) * area;
    }
    const double h2 = 1.0 / pair.eigenvalue;
    flux.raw *= h2;
    flux.weighted *= h2;
    return flux;
}

} // namespace simplex_neumann
