#include <simplex_neumann/io.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace simplex_neumann::io {

namespace {

std::vector<double> number_array(const json& j, const char* what)
{
    if (!j.is_array()) throw InvalidArgument(std::string(what) + " must be a JSON array");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw InvalidArgument(std::string(what) + " must contain only numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

json optional_number(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

std::string csv_quote(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

} // namespace

std::string format_number(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Simplexd simplex_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("vertices")) throw InvalidArgument("simplex JSON needs a \"vertices\" array");
    const json& verts = j.at("vertices");
    if (!verts.is_array() || verts.empty()) throw InvalidArgument("\"vertices\" must be a non-empty array");
    std::vector<std::vector<double>> points;
    for (const auto& v : verts) points.push_back(number_array(v, "vertex"));
    if (j.contains("dimension")) {
        if (!j.at("dimension").is_number_integer()) throw InvalidArgument("\"dimension\" must be an integer");
        if (j.at("dimension").get<int>() != int(points.front().size())) {
            throw InvalidArgument("\"dimension\" does not match the vertex coordinates");
        }
    }
    return Simplexd::from_points(points);
}

json simplex_to_json(const Simplexd& s)
{
    json verts = json::array();
    for (int j = 0; j <= s.dimension(); ++j) {
        json p = json::array();
        for (int i = 0; i < s.dimension(); ++i) p.push_back(s.vertices()(i, j));
        verts.push_back(p);
    }
    return {{"dimension", s.dimension()}, {"vertices", verts}};
}

Eigen::MatrixXd matrix_from_json(const json& j)
{
    if (!j.is_array() || j.empty()) throw InvalidArgument("matrix must be a non-empty JSON array");
    if (j.front().is_array()) {
        const auto rows = Eigen::Index(j.size());
        Eigen::MatrixXd m(rows, rows);
        for (Eigen::Index r = 0; r < rows; ++r) {
            const auto row = number_array(j.at(std::size_t(r)), "matrix row");
            if (Eigen::Index(row.size()) != rows) throw InvalidArgument("matrix must be square");
            for (Eigen::Index c = 0; c < rows; ++c) m(r, c) = row[std::size_t(c)];
        }
        return m;
    }
    const auto flat = number_array(j, "matrix");
    const auto n = Eigen::Index(std::llround(std::sqrt(double(flat.size()))));
    if (n * n != Eigen::Index(flat.size())) throw InvalidArgument("flat matrix length is not a perfect square");
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) m(r, c) = flat[std::size_t(r * n + c)];
    return m;
}

json matrix_to_json(const Eigen::MatrixXd& m)
{
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

MeasuredData measured_data_from_json(const json& j)
{
    if (!j.is_object()) throw InvalidArgument("measured data must be a JSON object");
    const bool has_n = j.contains("N"), has_j = j.contains("J");
    if (has_n == has_j) throw InvalidArgument("measured data needs exactly one of \"N\" or \"J\"");
    if (has_n) {
        const auto v = number_array(j.at("N"), "\"N\"");
        if (v.size() != 3) throw InvalidArgument("\"N\" must hold three side masses");
        return TriangleNeumannData<double>{v[0], v[1], v[2]};
    }
    const auto v = number_array(j.at("J"), "\"J\"");
    if (v.size() < 3) throw InvalidArgument("\"J\" must hold J_1..J_n followed by J_0");
    StandardSimplexNeumannData<double> d;
    d.coordinate = Eigen::Map<const Eigen::VectorXd>(v.data(), Eigen::Index(v.size() - 1));
    d.slanted = v.back();
    return d;
}

json report_to_json(const NeumannReport& r)
{
    json faces = json::array();
    for (const auto& f : r.faces) {
        faces.push_back({{"face", f.face},
                         {"predicted", f.predicted},
                         {"measured", f.measured},
                         {"residual", f.residual},
                         {"raw_mass", f.raw_mass},
                         {"normal_weight", f.normal_weight}});
    }
    json out = {{"source", r.source},
                {"n", r.simplex.dimension()},
                {"level", r.level >= 0 ? json(r.level) : json(nullptr)},
                {"mode", r.mode},
                {"eigenvalue", r.eigenvalue},
                {"cluster_size", r.cluster_size},
                {"simplex", simplex_to_json(r.simplex)},
                {"faces", faces},
                {"max_residual", r.max_residual()}};
    if (r.timestamp) out["timestamp"] = *r.timestamp;
    return out;
}

json verification_to_json(const FemVerification& v)
{
    json reports = json::array();
    for (const auto& r : v.reports) reports.push_back(report_to_json(r));
    json table = json::array();
    for (const auto& row : v.table) {
        json orders = json::array();
        for (const auto& o : row.face_orders) orders.push_back(optional_number(o));
        table.push_back({{"level", row.level},
                         {"mode", row.mode},
                         {"mesh_size", row.mesh_size},
                         {"eigenvalue", row.eigenvalue},
                         {"eigenvalue_error", optional_number(row.eigenvalue_error)},
                         {"eigenvalue_order", optional_number(row.eigenvalue_order)},
                         {"face_residuals", row.face_residuals},
                         {"face_orders", orders}});
    }
    return {{"reports", reports}, {"convergence", table}, {"error_bars", v.error_bars}};
}

json mesh_to_json(const SimplexMesh& mesh)
{
    json verts = json::array();
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        json p = json::array();
        for (int i = 0; i < mesh.dimension; ++i) p.push_back(mesh.vertices(i, v));
        verts.push_back(p);
    }
    json cells = json::array();
    for (int c = 0; c < mesh.num_cells(); ++c) {
        json cell = json::array();
        for (int r = 0; r <= mesh.dimension; ++r) cell.push_back(mesh.cells(r, c));
        cells.push_back(cell);
    }
    return {{"vertices", verts}, {"cells", cells}};
}

std::string reports_to_csv(const std::vector<NeumannReport>& reports)
{
    std::ostringstream os;
    os << "source,n,level,mode,face,predicted,measured,residual\n";
    for (const auto& r : reports) {
        for (const auto& f : r.faces) {
            os << r.source << ',' << r.simplex.dimension() << ',' << (r.level >= 0 ? std::to_string(r.level) : "")
               << ',' << csv_quote(r.mode) << ',' << f.face << ',' << format_number(f.predicted) << ','
               << format_number(f.measured) << ',' << format_number(f.residual) << '\n';
        }
    }
    return os.str();
}

} // namespace simplex_neumann::io
