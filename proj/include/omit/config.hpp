#pragma once

#include <optional>
#include <string>
#include <vector>

#include "omit/oracle.hpp"
#include "omit/params.hpp"
#include "omit/steady_state.hpp"

namespace omit {

struct SpectrumGrid {
    std::optional<double> delta_p_min; // rad/s; absent = -4% of omega_m,1
    std::optional<double> delta_p_max;
    int points = 2001;
    std::vector<double> pump_powers; // optional per-curve pump list (W)
    std::vector<double> gaps;        // optional per-curve gap list (m)
};

struct SwitchGrid {
    double d_min = 1e-9;
    double d_max = 10e-9;
    int points = 181;
};

struct OracleRun {
    OracleConfig::Variant variant = OracleConfig::Variant::FullNonlinear;
    int nu_samples = 5;
    double rtol = 1e-9;
    double settle_time = 0.0;
    int demod_periods = 200;
    std::optional<double> mech_decay_override;
    bool dump_trajectory = false;
};

struct OutputOptions {
    int jobs = 0; // 0 = hardware concurrency
    bool svg = false;
    std::string dir = ".";
    std::string tag;
};

struct RunConfig {
    SystemParams params;
    ForceTreatment force_treatment = ForceTreatment::Exact;
    CoupledTreatment coupled_treatment = CoupledTreatment::Quadratic;
    SpectrumGrid spectrum;
    SwitchGrid switch_grid;
    OracleRun oracle;
    OutputOptions output;
};

// Scalar with an optional unit suffix: "2e-9", "2 nm", "1 mW", "80 kHz_x2pi",
// "145 ng". Angular-rate suffixes carry the 2*pi explicitly to keep Hz and
// rad/s from silently mixing.
double parse_quantity(const std::string& text);

// Strict schema: unknown keys are rejected, every value may be a number (SI)
// or a suffixed string. Serialization emits plain SI numbers, so
// parse(serialize(parse(x))) == parse(x).
RunConfig parse_config(const std::string& json_text);
std::string serialize_config(const RunConfig& config);
RunConfig load_config_file(const std::string& path);

// Dotted-path override for CLI --set, e.g. "params.gap=2nm".
void apply_override(RunConfig& config, const std::string& assignment);

} // namespace omit
