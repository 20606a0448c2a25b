#pragma once

#include "omit/constants.hpp"

namespace omit {

struct SystemParams;

// Leading PFA correction coefficient, 2/3 - 10/pi^2.
inline constexpr double default_pfa_beta =
    2.0 / 3.0 - 10.0 / (constants::pi * constants::pi);

enum class CasimirVariant {
    Off,               // no vacuum force at all
    IdealPfa,          // perfect-reflector sphere-plate PFA, U(s) = V_sp/s^2
    PfaWithCorrection, // PFA force times [1 + (s/2R)(2*beta - 1)]
    PowerLaw,          // U(s) = -A / s^(n-1), user-supplied amplitude
};

struct CasimirModel {
    CasimirVariant variant = CasimirVariant::IdealPfa;
    double beta = default_pfa_beta; // PfaWithCorrection only
    double amplitude = 0.0;         // PowerLaw: A > 0, units J m^(n-1)
    int exponent = 5;               // PowerLaw: force ~ s^-n, n >= 2

    static CasimirModel off() { return {CasimirVariant::Off}; }
    static CasimirModel ideal_pfa() { return {CasimirVariant::IdealPfa}; }
    static CasimirModel pfa_with_correction(double b = default_pfa_beta) {
        CasimirModel m;
        m.variant = CasimirVariant::PfaWithCorrection;
        m.beta = b;
        return m;
    }
    static CasimirModel power_law(double amplitude, int exponent) {
        CasimirModel m;
        m.variant = CasimirVariant::PowerLaw;
        m.amplitude = amplitude;
        m.exponent = exponent;
        return m;
    }

    bool active() const { return variant != CasimirVariant::Off; }
};

namespace casimir {

// Sphere-plate potential amplitude -pi^3 hbar c R / 720, in J m^2. Negative.
double potential_amplitude(const SystemParams& params);

// Interaction energy U(s) at gap s. Zero at infinity, negative (attractive).
double potential(const CasimirModel& model, const SystemParams& params, double s);

// Attractive force magnitude dU/ds, in N. Positive for an active model.
double force(const CasimirModel& model, const SystemParams& params, double s);

// Curvature U''(s), in N/m. Negative for an active model: the vacuum force
// softens the suspension.
double stiffness(const CasimirModel& model, const SystemParams& params, double s);

// Mirror frequency shifted by the potential curvature at gap (d - x_s):
// Omega_m = sqrt(omega_m^2 + U''(d - x_s)/m). Throws AdhesionRegime when the
// shifted square goes non-positive.
double effective_frequency(const CasimirModel& model, const SystemParams& params,
                           double x_s);

// Inter-mode coupling J with hbar*J = -U''(separation), in 1/(s m^2).
double coupling_J(const CasimirModel& model, const SystemParams& params,
                  double separation);

// Gap below which the linearized mirror stiffness m*omega_m^2 + U''(d) turns
// non-positive. Throws ModelHasNoAdhesion when the model is Off.
double critical_separation(const CasimirModel& model, const SystemParams& params);

} // namespace casimir
} // namespace omit
