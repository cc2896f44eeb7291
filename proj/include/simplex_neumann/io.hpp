#pragma once

#include <simplex_neumann/fem.hpp>
#include <simplex_neumann/geometry.hpp>
#include <simplex_neumann/inverse.hpp>
#include <simplex_neumann/verify.hpp>

#include <json.hpp>

#include <string>
#include <variant>

namespace simplex_neumann::io {

using nlohmann::json;

/// {"dimension": n, "vertices": [[x...], ...]}
Simplexd simplex_from_json(const json& j);
json simplex_to_json(const Simplexd& s);

/// n x n matrix given either as nested rows or as a flat row-major array.
Eigen::MatrixXd matrix_from_json(const json& j);
json matrix_to_json(const Eigen::MatrixXd& m);

/// {"N": [N_a, N_b, N_c]} or {"J": [J_1, ..., J_n, J_0]}.
using MeasuredData = std::variant<TriangleNeumannData<double>, StandardSimplexNeumannData<double>>;
MeasuredData measured_data_from_json(const json& j);

json report_to_json(const NeumannReport& r);
json verification_to_json(const FemVerification& v);
json mesh_to_json(const SimplexMesh& mesh);

/// `source,n,level,mode,face,predicted,measured,residual`, one row per face.
std::string reports_to_csv(const std::vector<NeumannReport>& reports);

/// %.17g
std::string format_number(double x);

} // namespace simplex_neumann::io
