#pragma once

#include <optional>
#include <string>
#include <vector>

#include "omit/casimir.hpp"

namespace omit {

enum class SphereMode { FixedSphere, MoveableSphere };

// Full experimental configuration, SI units throughout. Angular rates are
// rad/s; cavity_decay is the amplitude decay rate gamma (half linewidth).
struct SystemParams {
    double wavelength = 1064e-9;    // pump/probe carrier wavelength (m)
    double cavity_length = 25e-3;   // L (m)
    double sphere_radius = 150e-9;  // R (m)
    double gap = 2e-9;              // nominal mirror-sphere separation d (m)
    double mirror_mass = 1.45e-10;  // m1 (kg)
    std::optional<double> sphere_mass;       // m2 (kg), moveable-sphere mode
    double cavity_decay = 0.0;      // gamma (rad/s)
    double mech_decay_1 = 0.0;      // Gamma_m,1 (rad/s)
    std::optional<double> mech_decay_2;      // Gamma_m,2 (rad/s)
    double mech_freq_1 = 0.0;       // omega_m,1 (rad/s)
    std::optional<double> mech_freq_2;       // omega_m,2 (rad/s)
    double pump_detuning = 0.0;     // Delta_L = omega_c - omega_L (rad/s)
    double pump_power = 0.0;        // P_L (W)
    double probe_power = 0.0;       // P_in (W)
    double coupling_ratio = 0.5;    // eta_c, external fraction of gamma, (0,1]
    CasimirModel casimir;
    SphereMode mode = SphereMode::FixedSphere;
};

// Quantities derived from SystemParams. Pure function of the inputs.
struct DerivedParams {
    double omega_c = 0.0;   // 2 pi c / lambda (rad/s)
    double g = 0.0;         // omega_c / L (rad/(s m))
    double omega_l = 0.0;   // pump frequency omega_c - Delta_L (rad/s)
    double omega_p = 0.0;   // probe frequency at nu = omega_m,1 (rad/s)
    double eps_pump = 0.0;  // pump field amplitude eps_L (1/s)
    double eps_probe = 0.0; // probe field amplitude eps_p (1/s)
};

struct Diagnostic {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    std::string code;    // e.g. "PFA_VALIDITY"
    std::string field;   // offending parameter, empty for cross-field checks
    std::string message;
};

struct ValidationReport {
    std::vector<Diagnostic> items;

    bool ok() const;
    bool has(const std::string& code) const;
    std::string summary() const;
};

// Hard invariants as errors, soft regime checks as warnings. Never throws.
ValidationReport validate(const SystemParams& params);

// Throws ConfigError when validate() reports errors.
DerivedParams derive(const SystemParams& params);

// Detuning map: Delta_p = omega_p - omega_c = nu - Delta_L.
inline double nu_from_delta_p(const SystemParams& params, double delta_p) {
    return delta_p + params.pump_detuning;
}
inline double delta_p_from_nu(const SystemParams& params, double nu) {
    return nu - params.pump_detuning;
}

} // namespace omit
