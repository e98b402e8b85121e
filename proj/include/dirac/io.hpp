#pragma once

#include "dirac/core.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>

namespace dirac {

/// Malformed configuration or input files (exit code 1 in the CLI).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

// Spectral data JSON:
//   {"truncation": N, "boundary_hint": {"h1", "h2"} | null,
//    "data": [{"n", "lambda", "alpha"}...], "surplus": {"lambda", "alpha"} | null}
struct SpectralFile {
    SpectralData spectral;
    std::optional<BoundaryParams> boundary_hint;
};

nlohmann::ordered_json spectral_to_json(const SpectralData& spectral,
                                        const std::optional<BoundaryParams>& hint = std::nullopt);
/// Throws ConfigError for missing fields, a non-contiguous index set or alpha <= 0.
SpectralFile spectral_from_json(const nlohmann::json& j);
SpectralFile read_spectral(const std::string& path);

/// Doubles printed with 17 significant digits.
std::string dump_json(const nlohmann::ordered_json& j);

/// Header "x,p,q", one row per grid node.
std::string potential_csv(const PotentialMatrix& potential, int precision = 17);
/// Reads an "x,p,q" table (x increasing, covering [0, pi]) and interpolates it linearly onto `grid`.
PotentialMatrix potential_from_csv(const std::string& text, const Grid& grid);

/// One kernel entry (1..2, 1..2) as an (M+1) x (M+1) matrix; zero above the diagonal.
std::string kernel_csv(const KernelField& K, int r, int c, int precision = 17);

/// Flat key=value configuration. Blank lines and lines starting with '#' are ignored.
class Config {
public:
    static Config parse(const std::string& text);
    static const std::vector<std::string>& known_keys();

    /// `assignment` is "key=value".
    void set(const std::string& assignment);
    void set(const std::string& key, const std::string& value);

    bool empty() const noexcept { return values_.empty(); }
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::size_t get_size(const std::string& key, std::size_t fallback) const;

    const std::map<std::string, std::string>& values() const noexcept { return values_; }

private:
    std::map<std::string, std::string> values_;
};

/// potential.preset: zero | constant (p = p0, q = 0) | trig (p = 0.3 cos x, q = 0.2 sin 2x) | file.
PotentialMatrix make_potential(const Config& config, const Grid& grid);

/// h1 (default 0) and h2 (default 1).
BoundaryParams make_boundary(const Config& config);

}  // namespace dirac
