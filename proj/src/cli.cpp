#include <simplex_neumann/cli.hpp>
#include <simplex_neumann/exact_modes.hpp>
#include <simplex_neumann/inverse.hpp>
#include <simplex_neumann/io.hpp>
#include <simplex_neumann/verify.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

namespace simplex_neumann::cli {

namespace {

using io::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string out_path;
    std::string format = "json";
    bool timestamp = false;

    // geometry selection
    std::string simplex_path;
    int standard = 0;
    int alcove = 0;
    bool random_simplex = false;
    int dimension = 2;
    std::uint64_t seed = 0;

    std::vector<int> wavenumbers;
    int quad_points = 0;

    std::string gamma_path;
    std::vector<int> levels;
    int num_modes = 1;
    std::vector<double> reference_eigenvalues;
    std::string mesh_out;

    std::string data;
    std::string input_path;

    double epsilon = 0.0;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json(const std::string& text, const std::string& what)
{
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw UsageError("invalid JSON in " + what + ": " + e.what());
    }
}

std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

/// Vertices uniform in [0,1]^n, redrawn until the simplex is reasonably shaped.
Simplexd random_simplex(int n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
        Eigen::MatrixXd v(n, n + 1);
        for (Eigen::Index j = 0; j < v.cols(); ++j)
            for (Eigen::Index i = 0; i < v.rows(); ++i) v(i, j) = unit(rng);
        try {
            Simplexd s(v);
            if (volume(s) > 0.02 / factorial<double>(n)) return s;
        } catch (const DegenerateSimplex&) {
        }
    }
}

Simplexd select_simplex(const Options& o, int default_standard)
{
    const int chosen = int(!o.simplex_path.empty()) + int(o.standard > 0) + int(o.alcove > 0) + int(o.random_simplex);
    if (chosen > 1) throw UsageError("choose only one of --simplex, --standard, --alcove, --random-simplex");
    if (!o.simplex_path.empty()) return io::simplex_from_json(parse_json(read_file(o.simplex_path), o.simplex_path));
    if (o.standard > 0) return Simplexd::standard(o.standard);
    if (o.alcove > 0) return alcove_simplex(o.alcove);
    if (o.random_simplex) return random_simplex(o.dimension, o.seed);
    if (default_standard > 0) return Simplexd::standard(default_standard);
    throw UsageError("a simplex is required (--simplex, --standard, --alcove or --random-simplex)");
}

json measured_input(const Options& o)
{
    if (o.data.empty() == o.input_path.empty()) throw UsageError("give exactly one of --data or --input");
    return o.data.empty() ? parse_json(read_file(o.input_path), o.input_path) : parse_json(o.data, "--data");
}

void emit(const Options& o, const std::string& text, std::ostream& out)
{
    if (o.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(o.out_path);
    if (!file) throw UsageError("cannot write '" + o.out_path + "'");
    file << text;
}

std::string render(const Options& o, const json& j, const std::vector<NeumannReport>* reports)
{
    if (o.format == "csv") {
        if (!reports) throw UsageError("CSV output is only available for verification reports");
        return io::reports_to_csv(*reports);
    }
    return j.dump(2) + "\n";
}

std::string cmd_predict(const Options& o)
{
    const Simplexd s = select_simplex(o, 0);
    json fs = json::array();
    for (const auto& f : faces(s)) {
        fs.push_back({{"face", f.index},
                      {"vertices", f.vertex_indices},
                      {"measure", f.measure},
                      {"normal", std::vector<double>(f.normal.data(), f.normal.data() + f.normal.size())},
                      {"predicted", predicted_neumann_mass(s, f.index)}});
    }
    const auto maps = affine_maps(s);
    const json j = {{"simplex", io::simplex_to_json(s)},
                    {"volume", volume(s)},
                    {"gamma", io::matrix_to_json(maps.gamma)},
                    {"faces", fs}};
    return render(o, j, nullptr);
}

std::string cmd_verify_exact(const Options& o)
{
    NeumannReport r = verify_exact(o.wavenumbers, o.quad_points);
    if (o.timestamp) r.timestamp = utc_timestamp();
    const std::vector<NeumannReport> reports{r};
    return render(o, io::report_to_json(r), &reports);
}

std::string cmd_verify_fem(const Options& o)
{
    FemRunConfig cfg;
    cfg.simplex = select_simplex(o, o.dimension);
    if (!o.gamma_path.empty()) cfg.gamma = io::matrix_from_json(parse_json(read_file(o.gamma_path), o.gamma_path));
    if (!o.levels.empty()) cfg.levels = o.levels;
    cfg.num_modes = o.num_modes;
    cfg.reference_eigenvalues = o.reference_eigenvalues;
    cfg.max_threads = threads_from_environment();
    FemVerification v = verify_fem(cfg);
    if (o.timestamp) {
        const std::string stamp = utc_timestamp();
        for (auto& r : v.reports) r.timestamp = stamp;
    }
    if (!o.mesh_out.empty()) {
        std::ofstream mesh_file(o.mesh_out);
        if (!mesh_file) throw UsageError("cannot write '" + o.mesh_out + "'");
        mesh_file << io::mesh_to_json(refine(cfg.simplex, cfg.levels.back())).dump() << "\n";
    }
    return render(o, io::verification_to_json(v), &v.reports);
}

std::string cmd_recover_triangle(const Options& o)
{
    const auto data = io::measured_data_from_json(measured_input(o));
    const auto* tri = std::get_if<TriangleNeumannData<double>>(&data);
    if (!tri) throw UsageError("recover-triangle expects {\"N\": [N_a, N_b, N_c]}");
    const auto t = recover_triangle(*tri);
    // Forward map in input order: side_x = N_x / H.
    const double H = 1.0 / t.area;
    const std::array<double, 3> input{tri->N_a, tri->N_b, tri->N_c};
    const auto fwd = triangle_forward(input[0] / H, input[1] / H, input[2] / H);
    const std::array<double, 3> again{fwd.N_a, fwd.N_b, fwd.N_c};
    double residual = 0.0;
    for (std::size_t i = 0; i < 3; ++i) residual = std::max(residual, std::abs(again[i] - input[i]) / input[i]);
    const json j = {{"sides", t.sides}, {"area", t.area}, {"forward_residual", residual}};
    return render(o, j, nullptr);
}

std::string cmd_recover_gamma(const Options& o)
{
    const auto data = io::measured_data_from_json(measured_input(o));
    const auto* d = std::get_if<StandardSimplexNeumannData<double>>(&data);
    if (!d) throw UsageError("recover-gamma expects {\"J\": [J_1, J_2, J_0]}");
    const auto coeffs = recover_gamma_2d(*d);
    const auto fwd = gamma_forward(coeffs, 2);
    double residual = std::abs(fwd.slanted - d->slanted) / d->slanted;
    for (int i = 0; i < 2; ++i) {
        residual = std::max(residual, std::abs(fwd.coordinate[i] - d->coordinate[i]) / d->coordinate[i]);
    }
    const json j = {{"gamma", io::matrix_to_json(coeffs.gamma())}, {"forward_residual", residual}};
    return render(o, j, nullptr);
}

std::string cmd_counterexample(const Options& o)
{
    const auto cx = counterexample_3d(o.epsilon);
    const Eigen::MatrixXd Bt = cx.B.transpose();
    std::vector<double> forms;
    for (int i = 0; i < 3; ++i) forms.push_back(Bt.col(i).squaredNorm());
    forms.push_back((Bt * Eigen::Vector3d::Ones()).squaredNorm());
    const double dist = (cx.gamma - Eigen::Matrix3d::Identity()).cwiseAbs().rowwise().sum().maxCoeff();
    const auto masses = gamma_forward(EllipticCoefficientsd(cx.gamma), 3);
    const auto reference = gamma_forward(EllipticCoefficientsd::identity(3), 3);
    auto to_list = [](const StandardSimplexNeumannData<double>& m) {
        std::vector<double> v(m.coordinate.data(), m.coordinate.data() + m.coordinate.size());
        v.push_back(m.slanted);
        return v;
    };
    const json j = {{"epsilon", o.epsilon},
                    {"a", cx.a},
                    {"d", cx.d},
                    {"B", io::matrix_to_json(cx.B)},
                    {"gamma", io::matrix_to_json(cx.gamma)},
                    {"quadratic_forms", forms},
                    {"gamma_minus_identity_inf_norm", dist},
                    {"neumann_masses", to_list(masses)},
                    {"identity_neumann_masses", to_list(reference)}};
    return render(o, j, nullptr);
}

void print_error(std::ostream& err, const std::string& kind, const std::string& message)
{
    err << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Neumann data of Dirichlet eigenfunctions on simplices"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    auto add_output = [&](CLI::App* sub, bool reports) {
        sub->add_option("--out", o.out_path, "Output file (default stdout)");
        if (reports) {
            sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
            sub->add_flag("--timestamp", o.timestamp, "Stamp reports with the current UTC time");
        }
    };
    auto add_simplex = [&](CLI::App* sub) {
        sub->add_option("--simplex", o.simplex_path, "Simplex JSON file");
        sub->add_option("--standard", o.standard, "Standard n-simplex")->check(CLI::Range(2, 4));
        sub->add_option("--alcove", o.alcove, "Alcove (order simplex) of dimension n")->check(CLI::Range(2, 3));
    };

    auto* predict = app.add_subcommand("predict", "Predicted Neumann mass per face");
    add_simplex(predict);
    add_output(predict, false);

    auto* vexact = app.add_subcommand("verify-exact", "Closed-form alcove modes against the prediction");
    vexact->add_option("--wavenumbers", o.wavenumbers, "k1,k2[,k3], strictly decreasing")
        ->required()
        ->delimiter(',');
    vexact->add_option("--quad-points", o.quad_points, "Gauss points per direction (0 = automatic)")
        ->check(CLI::NonNegativeNumber);
    add_output(vexact, true);

    auto* vfem = app.add_subcommand("verify-fem", "P1 finite elements against the prediction");
    add_simplex(vfem);
    vfem->add_flag("--random-simplex", o.random_simplex, "Random simplex with vertices in [0,1]^n");
    vfem->add_option("--dimension", o.dimension, "Dimension for --random-simplex or the default simplex")
        ->check(CLI::Range(2, 3));
    vfem->add_option("--seed", o.seed, "Seed for --random-simplex");
    vfem->add_option("--gamma", o.gamma_path, "Coefficient matrix JSON (n x n, row-major)");
    vfem->add_option("--level", o.levels, "Refinement level(s), ascending")->delimiter(',');
    vfem->add_option("--num-modes", o.num_modes, "Number of eigenpairs")->check(CLI::PositiveNumber);
    vfem->add_option("--reference-eigenvalue", o.reference_eigenvalues, "Exact eigenvalues per mode")
        ->delimiter(',');
    vfem->add_option("--mesh-out", o.mesh_out, "Dump the finest mesh as JSON");
    add_output(vfem, true);

    auto* rtri = app.add_subcommand("recover-triangle", "Triangle from its three Neumann masses");
    rtri->add_option("--data", o.data, "Inline JSON {\"N\": [...]}");
    rtri->add_option("--input", o.input_path, "JSON file {\"N\": [...]}");
    add_output(rtri, false);

    auto* rgamma = app.add_subcommand("recover-gamma", "Coefficient matrix on the standard triangle");
    rgamma->add_option("--data", o.data, "Inline JSON {\"J\": [J1, J2, J0]}");
    rgamma->add_option("--input", o.input_path, "JSON file {\"J\": [...]}");
    add_output(rgamma, false);

    auto* cex = app.add_subcommand("counterexample", "3D coefficient family with identical Neumann masses");
    cex->add_option("--epsilon", o.epsilon, "Perturbation size")->required();
    add_output(cex, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        print_error(err, "UsageError", e.what());
        return kUsageError;
    }

    try {
        std::string text;
        if (*predict) text = cmd_predict(o);
        else if (*vexact) text = cmd_verify_exact(o);
        else if (*vfem) text = cmd_verify_fem(o);
        else if (*rtri) text = cmd_recover_triangle(o);
        else if (*rgamma) text = cmd_recover_gamma(o);
        else text = cmd_counterexample(o);
        emit(o, text, out);
        return kSuccess;
    } catch (const UsageError& e) {
        print_error(err, "UsageError", e.what());
        return kUsageError;
    } catch (const InvalidArgument& e) {
        print_error(err, e.kind(), e.what());
        return kUsageError;
    } catch (const Error& e) {
        print_error(err, e.kind(), e.what());
        return kDomainError;
    } catch (const std::exception& e) {
        print_error(err, "InternalError", e.what());
        return kUsageError;
    }
}

} // namespace simplex_neumann::cli
