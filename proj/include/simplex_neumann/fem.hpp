#pragma once

#include <simplex_neumann/geometry.hpp>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

namespace simplex_neumann {

struct BoundaryFacet {
    int cell = 0;
    int local_face = 0;  // local vertex the facet is opposite to
    int parent_face = 0; // face of the parent simplex containing the facet
};

///
/// Uniform refinement of a single simplex. Vertices are stored both in
/// physical coordinates and as barycentric coordinates with respect to the
/// parent; the latter are dyadic rationals and therefore exact in double
/// precision, which makes boundary classification exact.
///
struct SimplexMesh {
    int dimension = 0;
    int level = 0;
    Eigen::MatrixXd vertices;    // n x nv
    Eigen::MatrixXd barycentric; // (n+1) x nv
    Eigen::MatrixXi cells;       // (n+1) x nc, positively oriented
    std::vector<BoundaryFacet> boundary_facets;
    Simplexd parent;

    int num_vertices() const { return int(vertices.cols()); }
    int num_cells() const { return int(cells.cols()); }
    Eigen::MatrixXd cell_corners(int c) const;
    double cell_volume(int c) const;
    /// Signed det of the cell's edge matrix.
    double cell_determinant(int c) const;
    Eigen::MatrixXd facet_corners(const BoundaryFacet& f) const;
};

struct RefineLimits {
    int max_level_2d = 9;
    int max_level_3d = 6;
};

/// Red refinement (4 children) in 2D, Bey-ordered octasection (8 children) in
/// 3D. The octahedron diagonal is the shortest one of the parent and is kept
/// by the child ordering at every later level.
SimplexMesh refine(const Simplexd& s, int level, const RefineLimits& limits = {});

/// Same connectivity as `reference`, vertices pushed onto `target` through the
/// barycentric coordinates (the affine image of the mesh).
SimplexMesh map_mesh(const SimplexMesh& reference, const Simplexd& target);

///
/// P1 discretization of -div(Gamma grad u) = lambda u with homogeneous
/// Dirichlet conditions. `stiffness` and `mass` act on interior vertices only;
/// the `_full` matrices include every vertex.
///
struct FemSystem {
    SimplexMesh mesh;
    EllipticCoefficientsd coefficients;
    Eigen::SparseMatrix<double> stiffness;
    Eigen::SparseMatrix<double> mass;
    Eigen::SparseMatrix<double> stiffness_full;
    Eigen::SparseMatrix<double> mass_full;
    std::vector<int> interior_vertices; // dof -> vertex
    std::vector<int> dof_of_vertex;     // vertex -> dof, -1 on the boundary

    int num_dofs() const { return int(interior_vertices.size()); }
};

FemSystem assemble(SimplexMesh mesh, const EllipticCoefficientsd& coefficients);

struct FemEigenpair {
    double eigenvalue = 0.0;
    Eigen::VectorXd coefficients; // interior dofs, M-normalized
    double semiclassical_h = 0.0;
};

struct EigenSolverOptions {
    int dense_threshold = 3000; // interior dofs at or below use the dense solver
    double shift = 0.0;
    double tolerance = 1e-11; // relative residual target for the iterative solver
    int max_iterations = 1000;
};

/// The `count` smallest eigenpairs in ascending order, M-orthonormal. Each
/// eigenvector is signed so its largest-magnitude entry is positive.
std::vector<FemEigenpair> solve_eigenpairs(const FemSystem& system, int count, const EigenSolverOptions& options = {});

/// ||K x - lambda M x|| / ||M x||.
double eigen_residual(const FemSystem& system, const FemEigenpair& pair);

struct NeumannFlux {
    double raw = 0.0;      // h^2 int |nu . grad u_h|^2
    double weighted = 0.0; // h^2 int (nu . grad u_h)(nu^T Gamma grad u_h)
};

/// Boundary flux of a discrete eigenfunction on parent face `face`, from the
/// per-cell constant gradients of the boundary cells.
NeumannFlux neumann_mass_fem(const FemEigenpair& pair, const FemSystem& system, int face);

} // namespace simplex_neumann
