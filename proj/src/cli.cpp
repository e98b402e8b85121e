#include "dirac/cli.hpp"

#include "dirac/io.hpp"
#include "dirac/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace dirac {

using nlohmann::ordered_json;

const std::vector<std::string>& verify_check_names() {
    static const std::vector<std::string> names{"parseval", "expansion", "zero_sum", "hadamard"};
    return names;
}

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = ".";
    bool no_timestamp = false;
    long N = -1;
    long M = -1;
    std::string mode;
    std::string input;
    std::string check = "all";
};

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

Config load_config(const CommonArgs& a) {
    Config cfg;
    if (!a.config_path.empty()) cfg = Config::parse(read_text(a.config_path));
    for (const auto& s : a.overrides) cfg.set(s);
    if (a.N >= 0) cfg.set("N", std::to_string(a.N));
    if (a.M >= 0) cfg.set("M", std::to_string(a.M));
    if (!a.mode.empty()) cfg.set("glm.mode", a.mode);
    if (!a.input.empty()) cfg.set("input", a.input);
    if (cfg.empty()) throw UsageError("configuration is empty; pass --config FILE or --set key=value");
    return cfg;
}

Grid make_grid(const Config& cfg) {
    const std::size_t M = cfg.get_size("M", 400);
    if (M < 3) throw ConfigError("M must be at least 3");
    return Grid(M);
}

ReconstructionOptions reconstruction_options(const Config& cfg) {
    ReconstructionOptions o;
    try {
        o.mode = parse_fmode(cfg.get_string("glm.mode", "direct_sum"));
        o.tail = parse_tail(cfg.get_string("glm.tail", "asymptotic"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    o.glm.threads = static_cast<unsigned>(cfg.get_size("glm.threads", 0));
    return o;
}

ordered_json config_json(const Config& cfg) {
    ordered_json j = ordered_json::object();
    for (const auto& [k, v] : cfg.values()) j[k] = v;
    return j;
}

ordered_json report_header(const std::string& command, const Config& cfg, const CommonArgs& a) {
    ordered_json j;
    j["command"] = command;
    if (!a.no_timestamp) j["timestamp"] = utc_timestamp();
    j["config"] = config_json(cfg);
    return j;
}

std::string out_path(const CommonArgs& a, const std::string& name) {
    std::filesystem::path dir(a.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + a.out_dir + "': " + ec.message());
    return (dir / name).string();
}

ordered_json check_entry(const std::string& name, double value, double tolerance, bool pass) {
    return {{"name", name}, {"value", value}, {"tolerance", tolerance}, {"pass", pass}};
}

// --- direct ----------------------------------------------------------------

int cmd_direct(const CommonArgs& a, std::ostream& out) {
    const Config cfg = load_config(a);
    const Grid grid = make_grid(cfg);
    const DiracProblem problem(make_potential(cfg, grid), make_boundary(cfg));
    const std::size_t N = cfg.get_size("N", 20);

    const SpectralData spectral = compute_spectral_data(problem, N);
    const std::string path = out_path(a, "spectral.json");
    write_text(path, dump_json(spectral_to_json(spectral, problem.boundary)));

    const auto rep = asymptotics_report(spectral);
    out << std::setprecision(6);
    out << "     k      eps(-k)      eps(+k)      tau(-k)      tau(+k)   sum eps^2   sum tau^2\n";
    for (const auto& r : rep.rows) {
        out << std::setw(6) << r.n << ' ' << std::setw(12) << r.epsilon_neg << ' ' << std::setw(12) << r.epsilon_pos
            << ' ' << std::setw(12) << r.tau_neg << ' ' << std::setw(12) << r.tau_pos << ' ' << std::setw(11)
            << r.epsilon_sq_sum << ' ' << std::setw(11) << r.tau_sq_sum << '\n';
    }
    if (spectral.surplus) {
        out << "surplus eigenvalue " << std::setprecision(12) << spectral.surplus->lambda << " alpha "
            << spectral.surplus->alpha << '\n';
    }
    out << "plateau S(N)/S(N/2): eps " << rep.epsilon_plateau << " tau " << rep.tau_plateau << '\n';
    out << "wrote " << path << '\n';
    return kExitOk;
}

// --- inverse ---------------------------------------------------------------

int cmd_inverse(const CommonArgs& a, std::ostream& out) {
    const Config cfg = load_config(a);
    if (!cfg.has("input")) throw ConfigError("inverse needs the spectral data file (--input or input=)");
    const SpectralFile file = read_spectral(cfg.get_string("input", ""));
    const Grid grid = make_grid(cfg);
    const auto options = reconstruction_options(cfg);
    const int precision = static_cast<int>(cfg.get_size("csv.precision", 17));

    const ReconstructionResult rec = reconstruct(file.spectral, grid, options);

    write_text(out_path(a, "potential.csv"), potential_csv(rec.potential, precision));

    ordered_json b;
    b["h1"] = rec.boundary_fit.params.h1;
    b["h2"] = rec.boundary_fit.params.h2;
    b["condition"] = rec.boundary_fit.condition;
    auto rows = ordered_json::array();
    for (std::size_t k = 0; k < rec.boundary_fit.lambdas.size(); ++k) {
        rows.push_back({{"lambda", rec.boundary_fit.lambdas[k]}, {"residual", rec.boundary_fit.residuals[k]}});
    }
    b["residuals"] = std::move(rows);
    write_text(out_path(a, "boundary.json"), dump_json(b));

    ordered_json d = report_header("inverse", cfg, a);
    d["glm_mode"] = to_string(options.mode);
    d["tail"] = to_string(options.tail);
    d["glm_residual"] = rec.glm_residual;
    d["max_condition"] = rec.max_condition;
    d["row_condition"] = rec.condition;
    const Matrix2& k0 = rec.origin_kernel;
    d["origin_kernel"] = {k0.a11, k0.a12, k0.a21, k0.a22};
    d["extrapolation_note"] = rec.extrapolation_note;
    write_text(out_path(a, "diagnostics.json"), dump_json(d));

    if (cfg.get_string("output.kernels", "false") == "true") {
        const KernelField& K = rec.kernel;
        for (int r = 1; r <= 2; ++r) {
            for (int c = 1; c <= 2; ++c) {
                write_text(out_path(a, "K" + std::to_string(r) + std::to_string(c) + ".csv"),
                           kernel_csv(K, r, c, precision));
            }
        }
    }

    out << std::setprecision(10) << "h1 = " << rec.boundary_fit.params.h1 << ", h2 = " << rec.boundary_fit.params.h2
        << "\nGLM residual " << rec.glm_residual << ", max row condition " << rec.max_condition << '\n';
    return kExitOk;
}

// --- roundtrip -------------------------------------------------------------

int cmd_roundtrip(const CommonArgs& a, std::ostream& out) {
    const Config cfg = load_config(a);
    const Grid grid = make_grid(cfg);
    const PotentialMatrix potential = make_potential(cfg, grid);
    const BoundaryParams boundary = make_boundary(cfg);
    const std::size_t N = cfg.get_size("N", 40);

    RoundtripOptions options;
    options.reconstruction = reconstruction_options(cfg);
    options.alpha0_factor = cfg.get_double("roundtrip.alpha0_factor", 1.0);
    if (!(options.alpha0_factor > 0.0)) throw ConfigError("roundtrip.alpha0_factor must be positive");

    const double tol_rel = cfg.get_double("tol.rel_l2", 0.05);
    const double tol_h = cfg.get_double("tol.boundary", 0.05);
    const double tol_res = cfg.get_double("tol.glm_residual", 1e-10);
    const double tol_cond = cfg.get_double("tol.condition", 1e3);
    const double tol_bres = cfg.get_double("tol.boundary_residual", 0.05);

    const RoundtripReport r = roundtrip(potential, boundary, N, options);
    write_text(out_path(a, "potential.csv"),
               potential_csv(r.potential, static_cast<int>(cfg.get_size("csv.precision", 17))));
    write_text(out_path(a, "spectral.json"), dump_json(spectral_to_json(r.spectral, boundary)));

    ordered_json rep = report_header("roundtrip", cfg, a);
    rep["metrics"] = {{"rel_l2", r.rel_l2},
                      {"rel_l2_p", r.rel_l2_p},
                      {"rel_l2_q", r.rel_l2_q},
                      {"h1", r.recovered.h1},
                      {"h2", r.recovered.h2},
                      {"h1_error", r.h1_error},
                      {"h2_error", r.h2_error},
                      {"max_boundary_residual", r.max_boundary_residual},
                      {"max_relative_boundary_residual", r.max_relative_boundary_residual},
                      {"max_condition", r.max_condition},
                      {"glm_residual", r.glm_residual}};
    auto checks = ordered_json::array();
    checks.push_back(check_entry("rel_l2", r.rel_l2, tol_rel, r.rel_l2 <= tol_rel));
    checks.push_back(check_entry("h1_error", r.h1_error, tol_h, r.h1_error <= tol_h));
    checks.push_back(check_entry("h2_error", r.h2_error, tol_h, r.h2_error <= tol_h));
    checks.push_back(check_entry("glm_residual", r.glm_residual, tol_res, r.glm_residual <= tol_res));
    checks.push_back(check_entry("max_condition", r.max_condition, tol_cond, r.max_condition <= tol_cond));
    checks.push_back(check_entry("relative_boundary_residual", r.max_relative_boundary_residual, tol_bres,
                                 r.max_relative_boundary_residual <= tol_bres));
    bool pass = true;
    for (const auto& c : checks) pass = pass && c["pass"].get<bool>();
    rep["checks"] = std::move(checks);
    rep["pass"] = pass;
    write_text(out_path(a, "report.json"), dump_json(rep));

    out << std::setprecision(6) << "rel L2 " << r.rel_l2 << ", h1 " << r.recovered.h1 << ", h2 " << r.recovered.h2
        << ", relative boundary residual " << r.max_relative_boundary_residual << '\n';
    for (const auto& c : rep["checks"]) {
        out << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>() << ' '
            << c["value"].get<double>() << " (tol " << c["tolerance"].get<double>() << ")\n";
    }
    return pass ? kExitOk : kExitTolerance;
}

// --- verify ----------------------------------------------------------------

GridVector smooth_test_function(const Grid& grid) {
    return GridVector::from_functions(
        grid, [](double x) { return x * (kPi - x); }, [](double x) { return 1.0 + std::cos(x); });
}

ordered_json verify_parseval(const DiracProblem& problem, const SpectralData& spectral, bool& pass) {
    const auto f = smooth_test_function(problem.grid());
    const std::size_t N = spectral.truncation;
    const std::size_t half = N / 2;
    auto rows = ordered_json::array();
    const auto rh = parseval_check(problem, spectral.truncated(half), f);
    const auto rf = parseval_check(problem, spectral, f);
    rows.push_back({{"N", half}, {"norm_squared", rh.norm_squared}, {"series", rh.series}, {"defect", rh.defect}});
    rows.push_back({{"N", N}, {"norm_squared", rf.norm_squared}, {"series", rf.series}, {"defect", rf.defect}});
    const bool ok = rf.defect <= 0.5 * rh.defect || rf.defect <= 1e-12;
    pass = pass && ok;
    return {{"test_function", "f = (x (pi - x), 1 + cos x)"}, {"pairing", "l2"}, {"rows", rows}, {"pass", ok}};
}

ordered_json verify_expansion(const DiracProblem& problem, const SpectralData& spectral, double tol, bool& pass) {
    if (spectral.truncation < 3) throw ConfigError("expansion check needs N >= 3");
    const double lambda3 = spectral.at(3).lambda;
    const VectorSolution f = integrate_phi(problem, lambda3);
    const auto r = expansion_check(problem, spectral, f, Pairing::h_space);
    const bool ok = r.max_error <= tol;
    pass = pass && ok;
    return {{"test_function", "phi(., lambda_3)"},
            {"pairing", "h_space"},
            {"max_error", r.max_error},
            {"max_error_y1", r.max_error_y1},
            {"max_error_y2", r.max_error_y2},
            {"tolerance", tol},
            {"pass", ok}};
}

ordered_json verify_zero_sum(const DiracProblem& problem, const SpectralData& spectral, bool& pass) {
    const std::size_t N = spectral.truncation;
    ZeroSumOptions o;
    o.ladder.clear();
    for (std::size_t n : {N / 4, N / 2, N}) {
        if (n >= 1 && (o.ladder.empty() || o.ladder.back() != n)) o.ladder.push_back(n);
    }
    const auto rows = zero_sum_check(problem, spectral, o);
    ZeroSumOptions whole = o;
    whole.x_limit_fraction = 1.0;
    const auto whole_rows = zero_sum_check(problem, spectral, whole);
    auto out = ordered_json::array();
    for (std::size_t k = 0; k < rows.size(); ++k) {
        out.push_back({{"N", rows[k].N}, {"max_abs", rows[k].max_abs}, {"max_abs_to_pi", whole_rows[k].max_abs}});
    }
    const double ratio = rows.size() >= 2 ? rows.front().max_abs / rows.back().max_abs : 1.0;
    const bool ok = rows.size() >= 2 && ratio >= 2.0;
    pass = pass && ok;
    return {{"x_limit", o.x_limit_fraction * kPi}, {"rows", out}, {"decrease_ratio", ratio}, {"pass", ok}};
}

ordered_json verify_hadamard(const DiracProblem& problem, const SpectralData& spectral, double tol, bool& pass) {
    std::vector<double> points;
    for (int k = 0; k <= 5; ++k) points.push_back(k + 0.5);
    const auto rows = hadamard_comparison(problem, spectral, points);
    auto out = ordered_json::array();
    double worst = 0.0;
    for (const auto& r : rows) {
        out.push_back({{"lambda", r.lambda}, {"product", r.product}, {"shooting", r.shooting},
                       {"relative_error", r.relative_error}});
        worst = std::max(worst, r.relative_error);
    }
    const bool ok = worst <= tol;
    pass = pass && ok;
    return {{"rows", out}, {"max_relative_error", worst}, {"tolerance", tol}, {"pass", ok}};
}

int cmd_verify(const CommonArgs& a, std::ostream& out) {
    const auto& names = verify_check_names();
    std::vector<std::string> selected;
    if (a.check == "all") {
        selected = names;
    } else if (std::find(names.begin(), names.end(), a.check) != names.end()) {
        selected = {a.check};
    } else {
        std::string list;
        for (const auto& n : names) list += n + ", ";
        throw UsageError("unknown check '" + a.check + "'; valid checks: " + list + "all");
    }

    const Config cfg = load_config(a);
    const Grid grid = make_grid(cfg);
    const DiracProblem problem(make_potential(cfg, grid), make_boundary(cfg));
    const std::size_t N = cfg.get_size("N", 20);
    if (N < 1) throw ConfigError("verify needs N >= 1");
    const SpectralData spectral = compute_spectral_data(problem, N);

    ordered_json rep = report_header("verify", cfg, a);
    ordered_json sections = ordered_json::object();
    bool pass = true;
    for (const auto& name : selected) {
        if (name == "parseval") sections[name] = verify_parseval(problem, spectral, pass);
        if (name == "expansion") sections[name] = verify_expansion(problem, spectral, cfg.get_double("tol.expansion", 1e-3), pass);
        if (name == "zero_sum") sections[name] = verify_zero_sum(problem, spectral, pass);
        if (name == "hadamard") sections[name] = verify_hadamard(problem, spectral, cfg.get_double("tol.hadamard", 1e-2), pass);
    }
    for (const auto& [name, s] : sections.items()) {
        out << (s["pass"].get<bool>() ? "PASS " : "FAIL ") << name << '\n';
    }
    rep["sections"] = std::move(sections);
    rep["pass"] = pass;
    write_text(out_path(a, "report.json"), dump_json(rep));
    return pass ? kExitOk : kExitTolerance;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Direct and inverse spectral solver for Dirac systems on [0, pi]"};
    app.require_subcommand(1);
    CommonArgs a;

    auto add_common = [&a](CLI::App* sub) {
        sub->add_option("--config", a.config_path, "key=value configuration file");
        sub->add_option("--set", a.overrides, "override a configuration key (key=value)");
        sub->add_option("--out", a.out_dir, "output directory");
        sub->add_flag("--no-timestamp", a.no_timestamp, "omit the timestamp from reports");
        sub->add_option("-N", a.N, "spectral truncation");
        sub->add_option("-M", a.M, "grid intervals");
        sub->add_option("--mode", a.mode, "F assembly: direct_sum or a_form");
    };
    auto* direct = app.add_subcommand("direct", "compute spectral data");
    auto* inverse = app.add_subcommand("inverse", "reconstruct potential and boundary from spectral data");
    auto* round = app.add_subcommand("roundtrip", "direct then inverse, compared with the generator");
    auto* verify = app.add_subcommand("verify", "spectral identities on a direct problem");
    for (auto* sub : {direct, inverse, round, verify}) add_common(sub);
    inverse->add_option("--input", a.input, "spectral data JSON");
    verify->add_option("--check", a.check, "parseval, expansion, zero_sum, hadamard or all");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return kExitUsage;
    }

    try {
        if (direct->parsed()) return cmd_direct(a, out);
        if (inverse->parsed()) return cmd_inverse(a, out);
        if (round->parsed()) return cmd_roundtrip(a, out);
        return cmd_verify(a, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const SolverError& e) {
        err << "solver failure in " << e.stage() << ": " << e.what() << '\n';
        return kExitSolver;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitSolver;
    }
}

}  // namespace dirac
