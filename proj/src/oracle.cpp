#include "omit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "omit/casimir.hpp"
#include "omit/demod.hpp"
#include "omit/errors.hpp"
#include "omit/ode.hpp"

namespace omit {

namespace {

using C = std::complex<double>;
constexpr C kI{0.0, 1.0};

double settle_floor(const SystemParams& params, double gamma_mech) {
    // Contract floor plus enough e-folds of the slowest pole for ~1e-7
    // transients; the displacement envelope decays at Gamma_m/2.
    const double floor = 5.0 / std::min(gamma_mech, params.cavity_decay);
    const double mech = 36.0 / gamma_mech;
    const double field = 18.0 / params.cavity_decay;
    return std::max({floor, mech, field});
}

double resolve_settle(const SystemParams& params, double gamma_mech,
                      const OracleConfig& config) {
    const double floor = 5.0 / std::min(gamma_mech, params.cavity_decay);
    if (config.settle_time > 0.0) return std::max(config.settle_time, floor);
    return settle_floor(params, gamma_mech);
}

void check_config(const OracleConfig& config) {
    if (config.demod_periods < 50) {
        throw Error(ErrorKind::ConfigError,
                    "oracle demod_periods must be at least 50");
    }
    if (!(config.rtol > 0.0)) {
        throw Error(ErrorKind::ConfigError, "oracle rtol must be positive");
    }
}

struct TrajectoryDump {
    std::ofstream out;

    explicit TrajectoryDump(const OracleConfig& config, bool two_oscillators) {
        if (!config.dump_trajectory) return;
        out.open(config.dump_path.empty() ? "oracle_trajectory.csv"
                                          : config.dump_path);
        out << (two_oscillators ? "t,re_a,im_a,x1,x2\n" : "t,re_a,im_a,x1\n");
    }

    template <int N>
    void write(double t, const StateVec<N>& y, bool two_oscillators) {
        if (!out.is_open()) return;
        out << t << ',' << y[0] << ',' << y[1] << ',' << y[2];
        if (two_oscillators) out << ',' << y[4];
        out << '\n';
    }
};

// Shared demodulation: advance the integrator to each quadrature node.
template <class Integrator, class Pick>
SidebandProjection project_channel(Integrator& integ, double t0, double nu,
                                   int periods, Pick&& pick) {
    return project_sidebands(
        [&](double t) {
            integ.advance_to(t);
            return pick(integ.state());
        },
        t0, nu, periods);
}

struct Extraction {
    SidebandProjection field;
    SidebandProjection x1;
    SidebandProjection x2; // zeroed for single-oscillator runs
    bool has_x2 = false;
};

double extraction_drift(const Extraction& ex) {
    // Normalize every channel against its own largest amplitude; a silent
    // channel must not mask drift on an active one.
    double drift = projection_drift(ex.field);
    drift = std::max(drift, projection_drift(ex.x1));
    if (ex.has_x2) drift = std::max(drift, projection_drift(ex.x2));
    return drift;
}

double field_leakage(const SidebandProjection& field) {
    const double first =
        std::max({std::abs(field.plus), std::abs(field.minus), 1e-300});
    return std::hypot(std::abs(field.plus2), std::abs(field.minus2)) / first;
}

// Stationarity cannot be resolved below the integration accuracy; the 1e-6
// floor applies at the default tolerance and below.
void check_stationary(const OracleResult& result, const OracleConfig& config) {
    const double threshold = std::max(1e-6, 1e3 * config.rtol);
    if (result.drift > threshold) {
        throw Error(ErrorKind::NonStationary,
                    "extraction window drift " + std::to_string(result.drift) +
                        " exceeds " + std::to_string(threshold));
    }
}

OracleResult finish(const SystemParams& params, const Extraction& ex,
                    double eps_probe) {
    OracleResult result;
    result.a_dc = ex.field.dc;
    result.x1_dc = ex.x1.dc.real();
    result.da_plus = ex.field.plus;
    result.da_minus = ex.field.minus;
    result.X1 = ex.x1.plus;
    result.drift = extraction_drift(ex);
    result.leakage = field_leakage(ex.field);
    if (ex.has_x2) {
        result.x2_dc = ex.x2.dc.real();
        result.X2 = ex.x2.plus;
    }
    if (eps_probe > 0.0) {
        const C t = 1.0 - 2.0 * params.coupling_ratio * params.cavity_decay *
                              result.da_plus / eps_probe;
        result.eta = std::norm(t);
    }
    return result;
}

} // namespace

OracleResult integrate_linearized(const SystemParams& params, const CasimirModel& model,
                                  const SteadyState1& steady, double nu,
                                  const OracleConfig& config) {
    (void)model;
    check_config(config);
    const DerivedParams derived = derive(params);
    const double gamma_m = config.mech_decay_override.value_or(params.mech_decay_1);
    const double omega_eff = steady.omega_eff;
    const double det = params.pump_detuning - derived.g * steady.x_s;
    const double force_scale = constants::hbar * derived.g / params.mirror_mass;
    const C a_s = steady.a_s;
    const double eps_p = derived.eps_probe;
    const double gam = params.cavity_decay;

    // State: [Re da, Im da, dx, dv].
    auto rhs = [&](double t, const StateVec<4>& y) {
        const C da(y[0], y[1]);
        const C da_dot = (-kI * det - gam) * da + kI * derived.g * a_s * y[2] +
                         eps_p * std::exp(-kI * (nu * t));
        StateVec<4> dy;
        dy[0] = da_dot.real();
        dy[1] = da_dot.imag();
        dy[2] = y[3];
        dy[3] = -omega_eff * omega_eff * y[2] - gamma_m * y[3] +
                force_scale * 2.0 * (std::conj(a_s) * da).real();
        return dy;
    };

    const double a_scale = eps_p / gam + 1e-12;
    const double x_scale =
        std::max(force_scale * 2.0 * std::abs(a_s) * a_scale /
                     (omega_eff * gamma_m),
                 1e-24);
    StateVec<4> weights;
    weights << a_scale, a_scale, x_scale, omega_eff * x_scale;

    OdeOptions opts;
    opts.rtol = config.rtol;
    Dopri5<4, decltype(rhs)> integ(rhs, 0.0, StateVec<4>::Zero(), weights, opts);

    TrajectoryDump dump(config, false);
    if (dump.out.is_open()) {
        integ.on_step = [&](double t, const StateVec<4>& y) {
            dump.write<4>(t, y, false);
        };
    }

    const double settle = resolve_settle(params, gamma_m, config);
    integ.advance_to(settle);

    // Consecutive period-aligned windows per channel; the system is
    // stationary after the settle phase.
    Extraction ex;
    ex.field = project_channel(integ, settle, nu, config.demod_periods,
                               [](const StateVec<4>& y) { return C(y[0], y[1]); });
    const double t1 = integ.time();
    ex.x1 = project_channel(integ, t1, nu, config.demod_periods,
                            [](const StateVec<4>& y) { return C(y[2], 0.0); });

    OracleResult result = finish(params, ex, eps_p);
    check_stationary(result, config);
    return result;
}

OracleResult integrate_linearized(const SystemParams& params, const CasimirModel& model,
                                  const SteadyState2& steady, double nu,
                                  const OracleConfig& config) {
    (void)model;
    check_config(config);
    const DerivedParams derived = derive(params);
    const double gamma1 = config.mech_decay_override.value_or(params.mech_decay_1);
    const double gamma2 = config.mech_decay_override.value_or(*params.mech_decay_2);
    const double m1 = params.mirror_mass;
    const double m2 = *params.sphere_mass;
    const double w1e = steady.omega1_eff;
    const double w2e = steady.omega2_eff;
    const double hJ = constants::hbar * steady.coupling_J;
    const double det = params.pump_detuning - derived.g * steady.x1_s;
    const C a_s = steady.a_s;
    const double eps_p = derived.eps_probe;
    const double gam = params.cavity_decay;
    const double force_scale = constants::hbar * derived.g / m1;

    // State: [Re da, Im da, dx1, dv1, dx2, dv2].
    auto rhs = [&](double t, const StateVec<6>& y) {
        const C da(y[0], y[1]);
        const C da_dot = (-kI * det - gam) * da + kI * derived.g * a_s * y[2] +
                         eps_p * std::exp(-kI * (nu * t));
        StateVec<6> dy;
        dy[0] = da_dot.real();
        dy[1] = da_dot.imag();
        dy[2] = y[3];
        dy[3] = -w1e * w1e * y[2] - gamma1 * y[3] +
                force_scale * 2.0 * (std::conj(a_s) * da).real() -
                hJ / m1 * y[4];
        dy[4] = y[5];
        dy[5] = -w2e * w2e * y[4] - gamma2 * y[5] - hJ / m2 * y[2];
        return dy;
    };

    const double a_scale = eps_p / gam + 1e-12;
    const double x_scale = std::max(
        force_scale * 2.0 * std::abs(a_s) * a_scale / (w1e * gamma1), 1e-24);
    StateVec<6> weights;
    weights << a_scale, a_scale, x_scale, w1e * x_scale, x_scale, w2e * x_scale;

    OdeOptions opts;
    opts.rtol = config.rtol;
    Dopri5<6, decltype(rhs)> integ(rhs, 0.0, StateVec<6>::Zero(), weights, opts);

    TrajectoryDump dump(config, true);
    if (dump.out.is_open()) {
        integ.on_step = [&](double t, const StateVec<6>& y) {
            dump.write<6>(t, y, true);
        };
    }

    const double settle = resolve_settle(params, std::min(gamma1, gamma2), config);
    integ.advance_to(settle);

    Extraction ex;
    ex.has_x2 = true;
    ex.field = project_channel(integ, settle, nu, config.demod_periods,
                               [](const StateVec<6>& y) { return C(y[0], y[1]); });
    const double t1 = integ.time();
    ex.x1 = project_channel(integ, t1, nu, config.demod_periods,
                            [](const StateVec<6>& y) { return C(y[2], 0.0); });
    const double t2 = integ.time();
    ex.x2 = project_channel(integ, t2, nu, config.demod_periods,
                            [](const StateVec<6>& y) { return C(y[4], 0.0); });

    OracleResult result = finish(params, ex, eps_p);
    check_stationary(result, config);
    return result;
}

OracleResult integrate_full(const SystemParams& params, const CasimirModel& model,
                            double nu, const OracleConfig& config) {
    check_config(config);
    if (model.active() && params.mode == SphereMode::FixedSphere) {
        const double d_crit = casimir::critical_separation(model, params);
        if (params.gap <= d_crit) {
            throw Error(ErrorKind::AdhesionRegime,
                        "gap is at or below the adhesion threshold " +
                            std::to_string(d_crit) + " m");
        }
    }
    const DerivedParams derived = derive(params);
    const double gam = params.cavity_decay;
    const double eps_l = derived.eps_pump;
    const double eps_p = derived.eps_probe;
    const double d = params.gap;

    if (params.mode == SphereMode::FixedSphere) {
        const double gamma_m =
            config.mech_decay_override.value_or(params.mech_decay_1);
        const double m = params.mirror_mass;
        const double w = params.mech_freq_1;

        auto rhs = [&](double t, const StateVec<4>& y) {
            const C a(y[0], y[1]);
            const C a_dot = (-kI * (params.pump_detuning - derived.g * y[2]) - gam) * a +
                            eps_l + eps_p * std::exp(-kI * (nu * t));
            const double gap_now = d - y[2];
            if (model.active() && gap_now <= 0.0) {
                throw Error(ErrorKind::MirrorContact,
                            "mirror crossed the sphere surface");
            }
            const double f_cas =
                model.active() ? casimir::force(model, params, gap_now) : 0.0;
            StateVec<4> dy;
            dy[0] = a_dot.real();
            dy[1] = a_dot.imag();
            dy[2] = y[3];
            dy[3] = -w * w * y[2] - gamma_m * y[3] +
                    (f_cas + constants::hbar * derived.g * std::norm(a)) / m;
            return dy;
        };

        const double a_scale = (eps_l + eps_p) / gam + 1e-12;
        const double x_scale = std::max(
            (constants::hbar * derived.g * a_scale * a_scale +
             (model.active() ? casimir::force(model, params, d) : 0.0)) /
                (m * w * w),
            1e-24);
        StateVec<4> weights;
        weights << a_scale, a_scale, x_scale, w * x_scale;

        OdeOptions opts;
        opts.rtol = config.rtol;
        Dopri5<4, decltype(rhs)> integ(rhs, 0.0, StateVec<4>::Zero(), weights, opts);

        TrajectoryDump dump(config, false);
        integ.on_step = [&](double t, const StateVec<4>& y) {
            if (y[2] >= d) {
                throw Error(ErrorKind::MirrorContact,
                            "mirror reached the sphere during integration");
            }
            dump.write<4>(t, y, false);
        };

        const double settle = resolve_settle(params, gamma_m, config);
        integ.advance_to(settle);

        Extraction ex;
        ex.field = project_channel(integ, settle, nu, config.demod_periods,
                                   [](const StateVec<4>& y) {
                                       return C(y[0], y[1]);
                                   });
        const double t1 = integ.time();
        ex.x1 = project_channel(integ, t1, nu, config.demod_periods,
                                [](const StateVec<4>& y) {
                                    return C(y[2], 0.0);
                                });
        return finish(params, ex, eps_p);
    }

    // Moveable sphere: literal three-mode equations (inter-mode coupling only;
    // oscillator frequencies carry any curvature shift on input).
    const double gamma1 = config.mech_decay_override.value_or(params.mech_decay_1);
    const double gamma2 = config.mech_decay_override.value_or(*params.mech_decay_2);
    const double m1 = params.mirror_mass;
    const double m2 = *params.sphere_mass;
    const double w1 = params.mech_freq_1;
    const double w2 = *params.mech_freq_2;
    const double hJ = model.active()
                          ? constants::hbar * casimir::coupling_J(model, params, d)
                          : 0.0;

    auto rhs = [&](double t, const StateVec<6>& y) {
        const C a(y[0], y[1]);
        const C a_dot = (-kI * (params.pump_detuning - derived.g * y[2]) - gam) * a +
                        eps_l + eps_p * std::exp(-kI * (nu * t));
        StateVec<6> dy;
        dy[0] = a_dot.real();
        dy[1] = a_dot.imag();
        dy[2] = y[3];
        dy[3] = -w1 * w1 * y[2] - gamma1 * y[3] +
                (constants::hbar * derived.g * std::norm(a) - hJ * y[4]) / m1;
        dy[4] = y[5];
        dy[5] = -w2 * w2 * y[4] - gamma2 * y[5] - hJ * y[2] / m2;
        return dy;
    };

    const double a_scale = (eps_l + eps_p) / gam + 1e-12;
    const double x_scale =
        std::max(constants::hbar * derived.g * a_scale * a_scale / (m1 * w1 * w1),
                 1e-24);
    StateVec<6> weights;
    weights << a_scale, a_scale, x_scale, w1 * x_scale, x_scale, w2 * x_scale;

    OdeOptions opts;
    opts.rtol = config.rtol;
    Dopri5<6, decltype(rhs)> integ(rhs, 0.0, StateVec<6>::Zero(), weights, opts);

    TrajectoryDump dump(config, true);
    if (dump.out.is_open()) {
        integ.on_step = [&](double t, const StateVec<6>& y) {
            dump.write<6>(t, y, true);
        };
    }

    const double settle = resolve_settle(params, std::min(gamma1, gamma2), config);
    integ.advance_to(settle);

    Extraction ex;
    ex.has_x2 = true;
    ex.field = project_channel(integ, settle, nu, config.demod_periods,
                               [](const StateVec<6>& y) { return C(y[0], y[1]); });
    const double t1 = integ.time();
    ex.x1 = project_channel(integ, t1, nu, config.demod_periods,
                            [](const StateVec<6>& y) { return C(y[2], 0.0); });
    const double t2 = integ.time();
    ex.x2 = project_channel(integ, t2, nu, config.demod_periods,
                            [](const StateVec<6>& y) { return C(y[4], 0.0); });
    return finish(params, ex, eps_p);
}

} // namespace omit
