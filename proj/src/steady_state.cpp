#include "omit/steady_state.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "omit/casimir.hpp"
#include "omit/errors.hpp"

namespace omit {

namespace {

constexpr double kStabilityTol = 1e-6; // relative to the bare stiffness
constexpr int kMaxNewtonIters = 200;

// Mirror balance residual f(x) = k_m x - F_cas(x) - hbar g n_s(x) and its
// derivative, with the cavity back-action substituted analytically.
struct MirrorBalance {
    const SystemParams& params;
    const CasimirModel& model;
    ForceTreatment treatment;
    double g = 0.0;
    double eps_sq = 0.0; // eps_L^2 scaled by the homotopy power factor

    double photon_number(double x) const {
        if (eps_sq == 0.0) return 0.0;
        const double det = params.pump_detuning - g * x;
        const double gam = params.cavity_decay;
        return eps_sq / (gam * gam + det * det);
    }

    double casimir_force(double x) const {
        if (!model.active()) return 0.0;
        if (treatment == ForceTreatment::Exact) {
            return casimir::force(model, params, params.gap - x);
        }
        return casimir::force(model, params, params.gap) -
               casimir::stiffness(model, params, params.gap) * x;
    }

    double f(double x) const {
        const double k_m =
            params.mirror_mass * params.mech_freq_1 * params.mech_freq_1;
        return k_m * x - casimir_force(x) -
               constants::hbar * g * photon_number(x);
    }

    double df(double x) const {
        const double k_m =
            params.mirror_mass * params.mech_freq_1 * params.mech_freq_1;
        double k_cas = 0.0;
        if (model.active()) {
            const double s =
                treatment == ForceTreatment::Exact ? params.gap - x : params.gap;
            k_cas = casimir::stiffness(model, params, s);
        }
        double rp_slope = 0.0;
        if (eps_sq != 0.0) {
            const double det = params.pump_detuning - g * x;
            const double gam = params.cavity_decay;
            const double denom = gam * gam + det * det;
            rp_slope = constants::hbar * g * 2.0 * g * eps_sq * det / (denom * denom);
        }
        return k_m + k_cas - rp_slope;
    }
};

// Damped Newton with the step capped so the mirror never crosses the sphere.
// Convergence criterion |dx| <= 1e-12 max(d, |x|).
double newton_root(const MirrorBalance& balance, double x0) {
    const double d = balance.params.gap;
    double x = x0;
    for (int it = 0; it < kMaxNewtonIters; ++it) {
        const double f = balance.f(x);
        double df = balance.df(x);
        if (!(std::abs(df) > 0.0)) {
            df = balance.params.mirror_mass * balance.params.mech_freq_1 *
                 balance.params.mech_freq_1;
        }
        double dx = -f / df;
        double damping = 1.0;
        while (x + damping * dx >= d && damping > 1e-12) damping *= 0.5;
        if (x + damping * dx >= d) {
            throw Error(ErrorKind::MirrorContact,
                        "mirror displacement reached the sphere surface");
        }
        const double step = damping * dx;
        x += step;
        if (std::abs(step) <= 1e-12 * std::max(d, std::abs(x))) {
            return x;
        }
    }
    throw Error(ErrorKind::NoConvergence, "mirror balance Newton exhausted " +
                                              std::to_string(kMaxNewtonIters) +
                                              " iterations");
}

// Track the root from (zero power, large gap) to the target configuration,
// selecting the physically prepared branch.
double continuation_root(MirrorBalance balance, double eps_sq_target) {
    const double d_target = balance.params.gap;
    double x = 0.0;

    balance.eps_sq = 0.0;
    if (balance.model.active() && balance.treatment == ForceTreatment::Exact) {
        SystemParams local = balance.params;
        const double d_start = std::max(50e-9, 8.0 * d_target);
        const int steps =
            std::max(1, static_cast<int>(std::ceil(12.0 * std::log(d_start / d_target))));
        for (int i = 1; i <= steps; ++i) {
            local.gap = d_start * std::pow(d_target / d_start, double(i) / steps);
            MirrorBalance stage{local, balance.model, balance.treatment,
                                balance.g, 0.0};
            x = newton_root(stage, x);
        }
    } else {
        x = newton_root(balance, x);
    }

    if (eps_sq_target > 0.0) {
        for (double frac : {0.125, 0.25, 0.5, 1.0}) {
            balance.eps_sq = frac * eps_sq_target;
            x = newton_root(balance, x);
        }
    }
    return x;
}

double normalized_defect(const MirrorBalance& balance, double x) {
    const double k_m =
        balance.params.mirror_mass * balance.params.mech_freq_1 *
        balance.params.mech_freq_1;
    const double scale = std::abs(k_m * x) + std::abs(balance.casimir_force(x)) +
                         constants::hbar * balance.g * balance.photon_number(x) +
                         k_m * balance.params.gap * 1e-30;
    return std::abs(balance.f(x)) / scale;
}

std::complex<double> cavity_field(const SystemParams& params, double g,
                                  double eps_pump, double x) {
    if (eps_pump == 0.0) return {0.0, 0.0};
    const std::complex<double> denom(params.cavity_decay,
                                     params.pump_detuning - g * x);
    return eps_pump / denom;
}

void require_above_adhesion(const SystemParams& params, const CasimirModel& model) {
    if (!model.active()) return;
    const double d_crit = casimir::critical_separation(model, params);
    if (params.gap <= d_crit) {
        throw Error(ErrorKind::AdhesionRegime,
                    "linearized stiffness m*w^2 + U''(d) is non-positive: gap " +
                        std::to_string(params.gap) +
                        " m is at or below the adhesion threshold " +
                        std::to_string(d_crit) + " m");
    }
}

} // namespace

SteadyState1 solve_single(const SystemParams& params, const CasimirModel& model,
                          ForceTreatment treatment) {
    require_above_adhesion(params, model);
    const DerivedParams derived = derive(params);
    MirrorBalance balance{params, model, treatment, derived.g, 0.0};

    const double eps_sq = derived.eps_pump * derived.eps_pump;
    const double x = continuation_root(balance, eps_sq);
    balance.eps_sq = eps_sq;

    SteadyState1 state;
    state.x_s = x;
    state.a_s = cavity_field(params, derived.g, derived.eps_pump, x);
    state.n_s = std::norm(state.a_s);
    state.k_eff = params.mirror_mass * params.mech_freq_1 * params.mech_freq_1 +
                  (model.active()
                       ? casimir::stiffness(model, params, params.gap - x)
                       : 0.0);
    state.residual = normalized_defect(balance, x);
    if (!(state.k_eff > 0.0)) {
        throw Error(ErrorKind::AdhesionRegime,
                    "effective stiffness non-positive at the solved point");
    }
    state.omega_eff = casimir::effective_frequency(model, params, x);
    return state;
}

SteadyState1 solve_single_seeded(const SystemParams& params, const CasimirModel& model,
                                 ForceTreatment treatment, double x_guess) {
    require_above_adhesion(params, model);
    const DerivedParams derived = derive(params);
    MirrorBalance balance{params, model, treatment, derived.g,
                          derived.eps_pump * derived.eps_pump};
    const double x = newton_root(balance, x_guess);

    SteadyState1 state;
    state.x_s = x;
    state.a_s = cavity_field(params, derived.g, derived.eps_pump, x);
    state.n_s = std::norm(state.a_s);
    state.k_eff = params.mirror_mass * params.mech_freq_1 * params.mech_freq_1 +
                  (model.active()
                       ? casimir::stiffness(model, params, params.gap - x)
                       : 0.0);
    state.residual = normalized_defect(balance, x);
    if (!(state.k_eff > 0.0)) {
        throw Error(ErrorKind::AdhesionRegime,
                    "effective stiffness non-positive at the solved point");
    }
    state.omega_eff = casimir::effective_frequency(model, params, x);
    return state;
}

SteadyState2 solve_double(const SystemParams& params, const CasimirModel& model,
                          CoupledTreatment treatment) {
    if (params.mode != SphereMode::MoveableSphere) {
        throw Error(ErrorKind::ConfigError,
                    "solve_double requires moveable-sphere mode");
    }
    const DerivedParams derived = derive(params);
    const double m1 = params.mirror_mass;
    const double m2 = *params.sphere_mass;
    const double w1 = params.mech_freq_1;
    const double w2 = *params.mech_freq_2;
    const double k1_bare = m1 * w1 * w1;
    const double k2_bare = m2 * w2 * w2;
    const double d = params.gap;

    const double hJ_static =
        model.active() ? constants::hbar * casimir::coupling_J(model, params, d) : 0.0;

    // The sphere row stays x2 = -hbar J x1 / (m2 w2^2) in both treatments;
    // eliminating x2 reduces the statics to the scalar mirror balance with a
    // reduced stiffness.
    const double k_feedback = hJ_static * hJ_static / k2_bare;
    const double k_cas_static =
        treatment == CoupledTreatment::Quadratic && model.active()
            ? casimir::stiffness(model, params, d)
            : 0.0;
    const double k_reduced = k1_bare + k_cas_static - k_feedback;
    if (!(k_reduced > 0.0)) {
        throw Error(ErrorKind::AdhesionRegime,
                    "reduced coupled stiffness non-positive at gap " +
                        std::to_string(d) + " m");
    }
    const double f_static =
        treatment == CoupledTreatment::Quadratic && model.active()
            ? casimir::force(model, params, d)
            : 0.0;

    // Scalar fixed point in x1 with a power ramp; the Casimir terms are already
    // linear in this treatment, so no gap continuation is needed.
    const double eps_sq = derived.eps_pump * derived.eps_pump;
    const double gam = params.cavity_decay;
    double x1 = 0.0;
    for (double frac : {0.125, 0.25, 0.5, 1.0}) {
        for (int it = 0; it < kMaxNewtonIters; ++it) {
            const double det = params.pump_detuning - derived.g * x1;
            const double ns = frac * eps_sq / (gam * gam + det * det);
            const double x1_next =
                (constants::hbar * derived.g * ns + f_static) / k_reduced;
            const double step = x1_next - x1;
            x1 = x1_next;
            if (std::abs(step) <= 1e-13 * std::max(d, std::abs(x1))) break;
            if (it == kMaxNewtonIters - 1) {
                throw Error(ErrorKind::NoConvergence,
                            "coupled steady state did not converge");
            }
        }
    }
    const double x2 = -hJ_static * x1 / k2_bare;

    SteadyState2 state;
    state.treatment = treatment;
    state.x1_s = x1;
    state.x2_s = x2;
    state.a_s = cavity_field(params, derived.g, derived.eps_pump, x1);
    state.n_s = std::norm(state.a_s);

    // Fluctuation parameters. Quadratic: curvature at the solved gap shifts
    // both oscillators; Literal: inputs are taken as already shifted.
    double k_cas_dyn = 0.0;
    double J_dyn = 0.0;
    if (model.active()) {
        if (treatment == CoupledTreatment::Quadratic) {
            const double s_eff = d - x1 + x2;
            if (!(s_eff > 0.0)) {
                throw Error(ErrorKind::MirrorContact,
                            "solved state closes the mirror-sphere gap");
            }
            k_cas_dyn = casimir::stiffness(model, params, s_eff);
            J_dyn = casimir::coupling_J(model, params, s_eff);
        } else {
            J_dyn = casimir::coupling_J(model, params, d);
        }
    }
    const double w1e_sq = w1 * w1 + k_cas_dyn / m1;
    const double w2e_sq = w2 * w2 + k_cas_dyn / m2;
    if (!(w1e_sq > 0.0) || !(w2e_sq > 0.0)) {
        throw Error(ErrorKind::AdhesionRegime,
                    "curvature shift drives an oscillator frequency imaginary");
    }
    state.omega1_eff = std::sqrt(w1e_sq);
    state.omega2_eff = std::sqrt(w2e_sq);
    state.coupling_J = J_dyn;

    Eigen::Matrix2d stiffness_matrix;
    stiffness_matrix << m1 * w1e_sq, constants::hbar * J_dyn,
        constants::hbar * J_dyn, m2 * w2e_sq;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eigen(stiffness_matrix);
    state.k_min = eigen.eigenvalues().minCoeff();
    if (!(state.k_min > 0.0)) {
        throw Error(ErrorKind::UnstableCoupledMode,
                    "coupled stiffness matrix is not positive definite");
    }

    // Normalized defect of the three governing relations.
    {
        const double det = params.pump_detuning - derived.g * x1;
        const double r_cavity =
            derived.eps_pump > 0.0
                ? std::abs(state.a_s * std::complex<double>(gam, det) -
                           derived.eps_pump) /
                      derived.eps_pump
                : 0.0;
        const double rhs1 =
            constants::hbar * derived.g * state.n_s + f_static - hJ_static * x2;
        const double scale1 = std::abs((k1_bare + k_cas_static) * x1) +
                              std::abs(rhs1) + k1_bare * d * 1e-30;
        const double r1 = std::abs((k1_bare + k_cas_static) * x1 - rhs1) / scale1;
        const double scale2 =
            std::abs(k2_bare * x2) + std::abs(hJ_static * x1) + k2_bare * d * 1e-30;
        const double r2 = std::abs(k2_bare * x2 + hJ_static * x1) / scale2;
        state.residual = std::max({r_cavity, r1, r2});
    }
    return state;
}

Stability classify_stability(const SteadyState1& state, const SystemParams& params,
                             const CasimirModel& model) {
    const double k_bare =
        params.mirror_mass * params.mech_freq_1 * params.mech_freq_1;
    if (state.k_eff > kStabilityTol * k_bare) return Stability::Stable;
    return model.active() ? Stability::Adhesive : Stability::Unstable;
}

Stability classify_stability(const SteadyState2& state, const SystemParams& params,
                             const CasimirModel& model) {
    const double k_scale = std::max(
        params.mirror_mass * params.mech_freq_1 * params.mech_freq_1,
        *params.sphere_mass * *params.mech_freq_2 * *params.mech_freq_2);
    if (state.k_min > kStabilityTol * k_scale) return Stability::Stable;
    return model.active() ? Stability::Adhesive : Stability::Unstable;
}

} // namespace omit
