#pragma once

#include "ermo/operator.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ermo {

enum class SpectralMode { Generic, Invariant, Manual };

struct ScenarioConfig {
    std::string type = "A1~1";
    int level = 1;
    SpectralMode mode = SpectralMode::Invariant;
    // One entry per root class; empty means 0.3 + 0.07 c for class c.
    std::vector<cplx> mu;
    // One row per root class; empty means (1, 0, 0, 0).
    std::vector<std::array<cplx, 4>> zeta;
    // Manual mode only.
    std::optional<CVec> xi;
    std::optional<cplx> kappa;
    // Multiplies kappa after it is fixed; 1.1 gives the negative control of the closure fit.
    double kappa_factor = 1.0;
    cplx tau{0.1, 0.9};
    int sample_points = 20;
    double sample_imag = 0.3;
    std::uint64_t seed = 1;
    SeriesConfig series = SeriesConfig::from_env();
    std::map<std::string, double> tolerances;
    // Boundary couplings for the explicit A_{2l}^(2) operator; when set, theta_closure also fits it.
    std::optional<A2lParams> a2l;
    bool timing = true;
    // Test fixture: -1 applies the translation before the finite part when operators act.
    double translation_sign = 1.0;

    double tolerance(const std::string& check) const;
    nlohmann::json to_json() const;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class CheckStatus { Pass, Fail, Skipped };
std::string to_string(CheckStatus s);

struct CheckReport {
    std::string name;
    CheckStatus status = CheckStatus::Skipped;
    double residual = 0.0;
    double scale = 0.0;
    int samples = 0;
    double seconds = 0.0;
    nlohmann::json diagnostics = nlohmann::json::object();
};

const std::vector<std::string>& known_checks();
std::vector<std::string> default_checks();

// Builds the operator context for a scenario (validates couplings and mode).
std::shared_ptr<const OperatorContext> make_context(const ScenarioConfig& cfg);

CheckReport run_check(const ScenarioConfig& cfg, const std::string& name);
std::vector<CheckReport> run_suite(const ScenarioConfig& cfg, const std::vector<std::string>& checks);
CheckReport run_theta_closure(const ScenarioConfig& cfg);

nlohmann::json report_json(const ScenarioConfig& cfg, const std::vector<CheckReport>& reports);
std::string report_text(const ScenarioConfig& cfg, const std::vector<CheckReport>& reports);
// Returns an empty string when the report matches the documented schema, else the first problem.
std::string validate_report(const nlohmann::json& j);

// Config file: one key = value per line, '#' starts a comment.
ScenarioConfig parse_config(const std::string& text, ScenarioConfig base = {});
cplx parse_complex(const std::string& s);

// Independent oracle: wp(z) - wp(w) for the lattice Z + T Z from a csc^2 sum.
cplx wp_lattice_difference(cplx z, cplx w, cplx T, int terms = 60);

}  // namespace ermo
