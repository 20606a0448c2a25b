#pragma once

#include <complex>

#include "omit/params.hpp"

namespace omit {

// How the vacuum-force term enters the mirror balance equation.
enum class ForceTreatment {
    Exact,     // full F(d - x) nonlinearity
    Quadratic, // expansion about x = 0: F(d) - U''(d) x
};

// How the coupled mirror-sphere system treats the vacuum force.
enum class CoupledTreatment {
    // Second-order expansion: static pull and self-softening on the mirror,
    // fluctuation frequencies of both oscillators shifted by the potential
    // curvature at the solved gap. Default.
    Quadratic,
    // Inter-mode coupling only; the oscillator frequencies are taken as
    // already containing the curvature shift and static displacements are
    // purely radiation-pressure driven.
    Literal,
};

struct SteadyState1 {
    std::complex<double> a_s;
    double x_s = 0.0;
    double n_s = 0.0;       // |a_s|^2
    double k_eff = 0.0;     // m w^2 + U''(d - x_s), N/m
    double omega_eff = 0.0; // effective mirror frequency at the solved gap
    double residual = 0.0;  // normalized defect of the balance equations
};

struct SteadyState2 {
    std::complex<double> a_s;
    double x1_s = 0.0;
    double x2_s = 0.0;
    double n_s = 0.0;
    double residual = 0.0;
    CoupledTreatment treatment = CoupledTreatment::Quadratic;
    // Resolved fluctuation parameters consumed by the linear response.
    double omega1_eff = 0.0;
    double omega2_eff = 0.0;
    double coupling_J = 0.0; // 1/(s m^2)
    double k_min = 0.0;      // smallest eigenvalue of the coupled stiffness matrix
};

enum class Stability { Stable, Adhesive, Unstable };

// Self-consistent (a_s, x_s) on the branch continuously connected to the
// trivial zero-power, large-gap solution. Throws AdhesionRegime, MirrorContact
// or NoConvergence.
SteadyState1 solve_single(const SystemParams& params, const CasimirModel& model,
                          ForceTreatment treatment = ForceTreatment::Exact);

// Newton polish from a known nearby root; used by continuation-ordered sweeps.
SteadyState1 solve_single_seeded(const SystemParams& params, const CasimirModel& model,
                                 ForceTreatment treatment, double x_guess);

// Self-consistent (a_s, x1_s, x2_s) for the moveable-sphere configuration.
SteadyState2 solve_double(const SystemParams& params, const CasimirModel& model,
                          CoupledTreatment treatment = CoupledTreatment::Quadratic);

Stability classify_stability(const SteadyState1& state, const SystemParams& params,
                             const CasimirModel& model);
Stability classify_stability(const SteadyState2& state, const SystemParams& params,
                             const CasimirModel& model);

} // namespace omit
