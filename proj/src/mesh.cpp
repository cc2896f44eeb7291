#include <simplex_neumann/fem.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <unordered_map>

namespace simplex_neumann {

namespace {

class MidpointTable {
public:
    MidpointTable(Eigen::MatrixXd& bary, int& count) : bary_(bary), count_(count) {}

    int operator()(int a, int b)
    {
        if (a > b) std::swap(a, b);
        const auto key = (std::uint64_t(std::uint32_t(a)) << 32) | std::uint32_t(b);
        const auto [it, inserted] = table_.try_emplace(key, count_);
        if (inserted) {
            bary_.col(count_) = 0.5 * (bary_.col(a) + bary_.col(b));
            ++count_;
        }
        return it->second;
    }

private:
    Eigen::MatrixXd& bary_;
    int& count_;
    std::unordered_map<std::uint64_t, int> table_;
};

// Vertex order at level 0 so that Bey's diagonal x02-x13 is the shortest of
// the three octahedron diagonals.
std::array<int, 4> octasection_order(const Simplexd& s)
{
    const std::array<std::array<int, 4>, 3> candidates{{{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 1, 3, 2}}};
    double best = std::numeric_limits<double>::infinity();
    std::array<int, 4> order = candidates[0];
    for (const auto& c : candidates) {
        const Eigen::VectorXd d = 0.5 * (s.vertex(c[0]) + s.vertex(c[2])) - 0.5 * (s.vertex(c[1]) + s.vertex(c[3]));
        const double len = d.norm();
        if (len < best * (1.0 - 1e-12)) {
            best = len;
            order = c;
        }
    }
    return order;
}

void refine_once(int n, Eigen::MatrixXd& bary, Eigen::MatrixXi& cells)
{
    const int nv = int(bary.cols());
    const int nc = int(cells.cols());
    // Euler: edges <= 3 nc (2D) or 6 nc (3D) upper bound.
    const int max_new = nc * (n == 2 ? 3 : 6);
    bary.conservativeResize(Eigen::NoChange, nv + max_new);
    int count = nv;
    MidpointTable mid(bary, count);

    const int children = n == 2 ? 4 : 8;
    Eigen::MatrixXi out(n + 1, nc * children);
    int k = 0;
    auto emit = [&](std::initializer_list<int> ids) {
        int r = 0;
        for (int id : ids) out(r++, k) = id;
        ++k;
    };
    for (int c = 0; c < nc; ++c) {
        if (n == 2) {
            const int x0 = cells(0, c), x1 = cells(1, c), x2 = cells(2, c);
            const int x01 = mid(x0, x1), x02 = mid(x0, x2), x12 = mid(x1, x2);
            emit({x0, x01, x02});
            emit({x01, x1, x12});
            emit({x02, x12, x2});
            emit({x01, x12, x02});
        } else {
            const int x0 = cells(0, c), x1 = cells(1, c), x2 = cells(2, c), x3 = cells(3, c);
            const int x01 = mid(x0, x1), x02 = mid(x0, x2), x03 = mid(x0, x3);
            const int x12 = mid(x1, x2), x13 = mid(x1, x3), x23 = mid(x2, x3);
            emit({x0, x01, x02, x03});
            emit({x01, x1, x12, x13});
            emit({x02, x12, x2, x23});
            emit({x03, x13, x23, x3});
            emit({x01, x02, x03, x13});
            emit({x01, x02, x12, x13});
            emit({x02, x03, x13, x23});
            emit({x02, x12, x13, x23});
        }
    }
    bary.conservativeResize(Eigen::NoChange, count);
    cells = std::move(out);
}

void finalize(SimplexMesh& mesh)
{
    const int n = mesh.dimension;
    mesh.vertices = mesh.parent.vertices() * mesh.barycentric;
    for (int c = 0; c < mesh.num_cells(); ++c) {
        if (mesh.cell_determinant(c) < 0.0) std::swap(mesh.cells(n - 1, c), mesh.cells(n, c));
    }
    mesh.boundary_facets.clear();
    for (int c = 0; c < mesh.num_cells(); ++c) {
        for (int local = 0; local <= n; ++local) {
            for (int j = 0; j <= n; ++j) {
                bool on_face = true;
                for (int r = 0; r <= n && on_face; ++r) {
                    if (r != local && mesh.barycentric(j, mesh.cells(r, c)) != 0.0) on_face = false;
                }
                if (on_face) {
                    mesh.boundary_facets.push_back({c, local, j});
                    break;
                }
            }
        }
    }
}

} // namespace

Eigen::MatrixXd SimplexMesh::cell_corners(int c) const
{
    Eigen::MatrixXd corners(dimension, dimension + 1);
    for (int r = 0; r <= dimension; ++r) corners.col(r) = vertices.col(cells(r, c));
    return corners;
}

double SimplexMesh::cell_determinant(int c) const
{
    const Eigen::MatrixXd corners = cell_corners(c);
    return (corners.rightCols(dimension).colwise() - corners.col(0)).determinant();
}

double SimplexMesh::cell_volume(int c) const
{
    return std::abs(cell_determinant(c)) / factorial<double>(dimension);
}

Eigen::MatrixXd SimplexMesh::facet_corners(const BoundaryFacet& f) const
{
    Eigen::MatrixXd corners(dimension, dimension);
    for (int r = 0, col = 0; r <= dimension; ++r) {
        if (r != f.local_face) corners.col(col++) = vertices.col(cells(r, f.cell));
    }
    return corners;
}

SimplexMesh refine(const Simplexd& s, int level, const RefineLimits& limits)
{
    const int n = s.dimension();
    if (n != 2 && n != 3) throw InvalidArgument("finite elements support dimensions 2 and 3 only");
    if (level < 0) throw InvalidArgument("refinement level must be non-negative");
    const int cap = n == 2 ? limits.max_level_2d : limits.max_level_3d;
    if (level > cap) {
        throw ResourceLimit("refinement level " + std::to_string(level) + " exceeds the cap of " +
                            std::to_string(cap) + " in " + std::to_string(n) + "D");
    }

    SimplexMesh mesh{.dimension = n, .level = level, .parent = s};
    mesh.barycentric = Eigen::MatrixXd::Identity(n + 1, n + 1);
    mesh.cells.resize(n + 1, 1);
    if (n == 3) {
        const auto order = octasection_order(s);
        for (int r = 0; r < 4; ++r) mesh.cells(r, 0) = order[std::size_t(r)];
    } else {
        for (int r = 0; r <= n; ++r) mesh.cells(r, 0) = r;
    }
    for (int l = 0; l < level; ++l) refine_once(n, mesh.barycentric, mesh.cells);
    finalize(mesh);
    return mesh;
}

SimplexMesh map_mesh(const SimplexMesh& reference, const Simplexd& target)
{
    if (target.dimension() != reference.dimension) throw InvalidArgument("target simplex dimension mismatch");
    SimplexMesh mesh = reference;
    mesh.parent = target;
    finalize(mesh);
    return mesh;
}

} // namespace simplex_neumann
