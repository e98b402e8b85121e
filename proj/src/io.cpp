#include "dirac/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace dirac {

using nlohmann::json;
using nlohmann::ordered_json;

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "' for reading");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw ConfigError("write to '" + path + "' failed");
}

ordered_json spectral_to_json(const SpectralData& spectral, const std::optional<BoundaryParams>& hint) {
    ordered_json j;
    j["truncation"] = spectral.truncation;
    if (hint) {
        j["boundary_hint"] = {{"h1", hint->h1}, {"h2", hint->h2}};
    } else {
        j["boundary_hint"] = nullptr;
    }
    auto data = ordered_json::array();
    for (const auto& d : spectral.data) data.push_back({{"n", d.n}, {"lambda", d.lambda}, {"alpha", d.alpha}});
    j["data"] = std::move(data);
    if (spectral.surplus) {
        j["surplus"] = {{"lambda", spectral.surplus->lambda}, {"alpha", spectral.surplus->alpha}};
    } else {
        j["surplus"] = nullptr;
    }
    return j;
}

namespace {

double number_field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_number()) {
        throw ConfigError(where + ": missing or non-numeric field '" + key + "'");
    }
    return j.at(key).get<double>();
}

}  // namespace

SpectralFile spectral_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("spectral data: top level must be an object");
    if (!j.contains("truncation") || !j.at("truncation").is_number_integer() || j.at("truncation").get<long>() < 0) {
        throw ConfigError("spectral data: 'truncation' must be a non-negative integer");
    }
    if (!j.contains("data") || !j.at("data").is_array()) throw ConfigError("spectral data: 'data' must be an array");

    SpectralFile out;
    out.spectral.truncation = j.at("truncation").get<std::size_t>();
    for (const auto& rec : j.at("data")) {
        if (!rec.is_object() || !rec.contains("n") || !rec.at("n").is_number_integer()) {
            throw ConfigError("spectral data: every record needs an integer 'n'");
        }
        const int n = rec.at("n").get<int>();
        const std::string where = "spectral data record n=" + std::to_string(n);
        out.spectral.data.push_back({n, number_field(rec, "lambda", where), number_field(rec, "alpha", where)});
    }
    std::sort(out.spectral.data.begin(), out.spectral.data.end(),
              [](const SpectralDatum& a, const SpectralDatum& b) { return a.n < b.n; });

    if (j.contains("surplus") && !j.at("surplus").is_null()) {
        const auto& s = j.at("surplus");
        out.spectral.surplus = Eigenpair{number_field(s, "lambda", "surplus"), number_field(s, "alpha", "surplus")};
    }
    if (j.contains("boundary_hint") && !j.at("boundary_hint").is_null()) {
        const auto& b = j.at("boundary_hint");
        try {
            out.boundary_hint = BoundaryParams(number_field(b, "h1", "boundary_hint"), number_field(b, "h2", "boundary_hint"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("boundary_hint: ") + e.what());
        }
    }
    try {
        out.spectral.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return out;
}

SpectralFile read_spectral(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
    }
    return spectral_from_json(j);
}

std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string potential_csv(const PotentialMatrix& potential, int precision) {
    std::ostringstream os;
    os << std::setprecision(precision);
    os << "x,p,q\n";
    const Grid& g = potential.grid();
    for (std::size_t j = 0; j < g.size(); ++j) os << g.node(j) << ',' << potential.p()[j] << ',' << potential.q()[j] << '\n';
    return os.str();
}

PotentialMatrix potential_from_csv(const std::string& text, const Grid& grid) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("potential CSV: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x,p,q") throw ConfigError("potential CSV: header must be 'x,p,q', got '" + line + "'");

    std::vector<double> xs, ps, qs;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::istringstream row(line);
        double v[3];
        char sep = 0;
        if (!(row >> v[0] >> sep) || sep != ',' || !(row >> v[1] >> sep) || sep != ',' || !(row >> v[2])) {
            throw ConfigError("potential CSV: malformed row " + std::to_string(lineno));
        }
        if (!std::isfinite(v[0]) || !std::isfinite(v[1]) || !std::isfinite(v[2])) {
            throw ConfigError("potential CSV: non-finite value in row " + std::to_string(lineno));
        }
        if (!xs.empty() && !(v[0] > xs.back())) throw ConfigError("potential CSV: x must be strictly increasing");
        xs.push_back(v[0]);
        ps.push_back(v[1]);
        qs.push_back(v[2]);
    }
    if (xs.size() < 2) throw ConfigError("potential CSV: need at least two rows");
    const double tol = 1e-9;
    if (xs.front() > tol || xs.back() < kPi - tol) throw ConfigError("potential CSV: x must cover [0, pi]");

    std::vector<double> p(grid.size()), q(grid.size());
    std::size_t k = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double x = std::clamp(grid.node(j), xs.front(), xs.back());
        while (k + 2 < xs.size() && xs[k + 1] < x) ++k;
        const double t = std::clamp((x - xs[k]) / (xs[k + 1] - xs[k]), 0.0, 1.0);
        p[j] = (1.0 - t) * ps[k] + t * ps[k + 1];
        q[j] = (1.0 - t) * qs[k] + t * qs[k + 1];
    }
    return {grid, std::move(p), std::move(q)};
}

std::string kernel_csv(const KernelField& K, int r, int c, int precision) {
    if (r < 1 || r > 2 || c < 1 || c > 2) throw std::invalid_argument("kernel_csv: entry indices must be 1 or 2");
    std::ostringstream os;
    os << std::setprecision(precision);
    const std::size_t n = K.grid().size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double v = 0.0;
            if (j <= i) {
                const Matrix2& m = K.at(i, j);
                v = r == 1 ? (c == 1 ? m.a11 : m.a12) : (c == 1 ? m.a21 : m.a22);
            }
            os << v << (j + 1 < n ? ',' : '\n');
        }
    }
    return os.str();
}

const std::vector<std::string>& Config::known_keys() {
    static const std::vector<std::string> keys{
        "potential.preset", "potential.p0",   "potential.path", "h1",
        "h2",               "N",              "M",              "glm.mode",
        "glm.tail",         "glm.threads",    "input",          "csv.precision",
        "output.kernels",   "roundtrip.alpha0_factor",          "tol.rel_l2",
        "tol.boundary",     "tol.glm_residual", "tol.condition", "tol.boundary_residual",
        "tol.expansion",    "tol.hadamard",
    };
    return keys;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::parse(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        try {
            cfg.set(t);
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

void Config::set(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + assignment + "'");
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::set(const std::string& key, const std::string& value) {
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError("unknown config key '" + key + "'");
    if (value.empty()) throw ConfigError("empty value for '" + key + "'");
    values_[key] = value;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(it->second, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != it->second.size() || !std::isfinite(v)) {
        throw ConfigError("'" + key + "' must be a finite number, got '" + it->second + "'");
    }
    return v;
}

std::size_t Config::get_size(const std::string& key, std::size_t fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& s = it->second;
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isdigit(ch); })) {
        throw ConfigError("'" + key + "' must be a non-negative integer, got '" + s + "'");
    }
    try {
        return static_cast<std::size_t>(std::stoull(s));
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' is out of range");
    }
}

PotentialMatrix make_potential(const Config& config, const Grid& grid) {
    const std::string preset = config.get_string("potential.preset", "zero");
    if (preset == "zero") return PotentialMatrix::zero(grid);
    if (preset == "constant") {
        const double p0 = config.get_double("potential.p0", 0.0);
        return PotentialMatrix::from_functions(grid, [p0](double) { return p0; }, [](double) { return 0.0; });
    }
    if (preset == "trig") {
        return PotentialMatrix::from_functions(grid, [](double x) { return 0.3 * std::cos(x); },
                                               [](double x) { return 0.2 * std::sin(2.0 * x); });
    }
    if (preset == "file") {
        if (!config.has("potential.path")) throw ConfigError("preset 'file' requires potential.path");
        return potential_from_csv(read_text(config.get_string("potential.path", "")), grid);
    }
    throw ConfigError("unknown potential.preset '" + preset + "' (expected zero, constant, trig or file)");
}

BoundaryParams make_boundary(const Config& config) {
    try {
        return BoundaryParams(config.get_double("h1", 0.0), config.get_double("h2", 1.0));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace dirac
