#pragma once
/// @file cli.hpp
/// Scenario and extension-problem configs, verification campaigns and their
/// reports, and the vector-field plot export behind the symplab command line.

#include "symplab/geometry.hpp"
#include "symplab/maps.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace symplab::cli {

using Json = nlohmann::ordered_json;

/// Invalid config; the message starts with "source:line:col:".
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Line and column (1-based) of JSON values addressed by JSON pointers, recovered
/// from the raw text because the parser keeps no positions.
class JsonLocator {
public:
    explicit JsonLocator(std::string_view text);
    /// Position of the value at `pointer`; the closest existing ancestor when absent.
    [[nodiscard]] std::pair<int, int> position(const std::string& pointer) const;
    [[nodiscard]] std::pair<int, int> position_of_offset(std::size_t offset) const;

private:
    std::string text_;
    std::vector<std::pair<std::string, std::size_t>> offsets_;
};

/// Parses text, turning syntax errors into ConfigError with a position.
Json parse_json(std::string_view text, const std::string& source);

struct Tolerances {
    double hamiltonian_integral = 1e-8;
    double flux = 1e-6;
    double maps = 1e-6;
    double calabi = 1e-8;
    double oracle = 1e-7;
    double gamma_flux = 1e-9;
    double cup = 1e-9;
    double jacobian = 1e-6;
    double area = 1e-4;
    double strip = 1e-12;
    double qm = 1e-9;  ///< slack on quasimorphism bounds
};

struct Resolution {
    int grid = 64;            ///< maps_equal samples per axis
    int commuting_grid = 16;  ///< maps_equal samples per axis for the commuting library
    int panels = 20;          ///< Gauss-Legendre panels per unit length
    int jacobian_samples = 500;
    int area_squares = 20;  ///< squares per word
    double area_side = 5e-4;
    int plot_grid = 24;
    int strip_grid = 64;
};

struct TheoremInput {
    CohomologyClass v_bar;
    CohomologyClass w_bar;
    long k = 0;
    long k0 = 0;
};

struct QmSettings {
    std::vector<std::string> words{"ab", "aab", "abAB"};
    long pairs = 10000;
    int exhaustive_length = 6;
    int sample_length = 12;
};

struct Scenario {
    std::string source;
    SurfaceModel model{2, Number(1)};
    /// One per chart; from the theorem input when no quadruples are given.
    std::vector<Quadruple> quads;
    long m_lo = 1;
    long m_hi = 8;
    Tolerances tol;
    Resolution res;
    std::uint64_t seed = 1;
    std::optional<TheoremInput> theorem;
    QmSettings qm;
    /// Canonical echo of the effective settings (exact numbers as strings).
    Json echo;
};

/// Parses and validates a scenario; `seed` and `tolerance_scale` override the file.
Scenario load_scenario(std::string_view text, const std::string& source, std::optional<std::uint64_t> seed = {},
                       double tolerance_scale = 1.0);

struct ExtendConfig {
    std::string source;
    std::string kind = "free_times_real";  ///< free_times_real, free_times_integer, virtual_split, heisenberg
    std::string word = "ab";               ///< w in s1(n) = (w^n, n) for free_times_real
    int index = 3;                         ///< k for virtual_split
    std::vector<int> heisenberg_lattice{1, 1};
    std::vector<std::pair<double, std::string>> terms{{1.0, "aab"}};
    bool homogeneous = true;
    std::string method = "gauss";
    int nodes = 8;
    long mc_samples = 4096;
    long restriction_samples = 100;
    long defect_pairs = 10000;
    long shifts = 50;
    long invariance_samples = 2000;
    long chains = 20;
    int length = 12;
    double slack = 1e-9;
    std::uint64_t seed = 1;
    Json echo;
};

ExtendConfig load_extend_config(std::string_view text, const std::string& source,
                                std::optional<std::uint64_t> seed = {}, double tolerance_scale = 1.0);

/// Built-in defaults, identical to configs/default.json and configs/extend_free_times_real.json.
std::string_view default_scenario_text();
std::string_view default_extend_text();

struct Check {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    Json detail;
};

struct Report {
    std::string command;
    Json config;
    std::vector<Check> checks;
    Json data = Json::object();

    /// Records a check; it passes iff residual <= tolerance (NaN fails).
    Check& add(std::string name, double residual, double tolerance, Json detail = Json::object());
    [[nodiscard]] bool pass() const;
    [[nodiscard]] Json to_json() const;
    /// name,residual,tolerance,pass rows.
    [[nodiscard]] std::string to_csv() const;
};

Report verify_lemmas(const Scenario& s);
Report main_theorem_demo(const Scenario& s);
Report qm_report(const Scenario& s);
Report extend_demo(const ExtendConfig& c);
/// Writes <field>.csv and <field>.svg into out_dir for every plotted field.
Report plot_fields(const Scenario& s, const std::string& out_dir);

/// Sampled field on a grid of cell centres of the unit square, row-major from the bottom.
struct FieldSamples {
    std::string name;
    int grid = 0;
    std::vector<Vec2> points;
    std::vector<Vec2> values;
};
FieldSamples sample_field(const std::string& name, const std::function<Vec2(Vec2)>& field, int grid);
std::string field_csv(const FieldSamples& f);
/// Self-contained quiver plot; arrows scaled by the largest sampled magnitude.
std::string field_svg(const FieldSamples& f, double eps);

enum class Format { json, csv };

struct Options {
    std::optional<std::string> config;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    double tolerance_scale = 1.0;
    Format format = Format::json;
};

/// Runs one command, printing the report to `out` and diagnostics to `err`.
/// Returns 0 if every check passes, 1 if one fails, 2 on config or I/O errors.
int run(const std::string& command, const Options& opt, std::ostream& out, std::ostream& err);

}  // namespace symplab::cli
