#pragma once

#include <complex>
#include <optional>
#include <string>

#include "omit/params.hpp"
#include "omit/steady_state.hpp"

namespace omit {

// Time-domain validation path: integrate the equations of motion and
// demodulate the beat-frequency sidebands. Everything here is deliberately
// independent of the closed-form response expressions.
struct OracleConfig {
    enum class Variant { Linearized, FullNonlinear };

    Variant variant = Variant::FullNonlinear;
    double rtol = 1e-9;
    double settle_time = 0.0; // seconds; 0 picks one from the decay rates
    int demod_periods = 200;  // beat periods in the demodulation window
    std::optional<double> mech_decay_override; // replaces every Gamma_m
    bool dump_trajectory = false;
    std::string dump_path;
};

struct OracleResult {
    std::complex<double> a_dc;
    double x1_dc = 0.0;
    double x2_dc = 0.0;
    std::complex<double> da_plus;
    std::complex<double> da_minus;
    std::complex<double> X1;
    std::complex<double> X2;
    double eta = 0.0;
    double drift = 0.0;   // relative half-window drift of the extraction
    double leakage = 0.0; // second-harmonic fraction on the field channel
};

// Linearized fluctuation dynamics about a solved steady state, starting from
// zero fluctuation. Throws NonStationary when the window still drifts above
// 1e-6 of the extracted amplitude.
OracleResult integrate_linearized(const SystemParams& params, const CasimirModel& model,
                                  const SteadyState1& steady, double nu,
                                  const OracleConfig& config);

OracleResult integrate_linearized(const SystemParams& params, const CasimirModel& model,
                                  const SteadyState2& steady, double nu,
                                  const OracleConfig& config);

// Full nonlinear equations of motion from a dark initial state. The DC
// component reproduces the steady-state solver; the +/- nu sidebands
// reproduce the linear response when the probe is weak. The moveable-sphere
// system is integrated in its literal inter-mode-coupling form.
OracleResult integrate_full(const SystemParams& params, const CasimirModel& model,
                            double nu, const OracleConfig& config);

} // namespace omit
