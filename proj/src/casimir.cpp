#include "omit/casimir.hpp"

#include <cmath>

#include "omit/errors.hpp"
#include "omit/params.hpp"

namespace omit::casimir {

namespace {

void require_positive_gap(double s) {
    if (!(s > 0.0)) {
        throw Error(ErrorKind::NonPositiveSeparation,
                    "separation must be positive, got " + std::to_string(s) + " m");
    }
}

double cube(double x) { return x * x * x; }

} // namespace

double potential_amplitude(const SystemParams& params) {
    const double pi3 = constants::pi * constants::pi * constants::pi;
    return -pi3 * constants::hbar * constants::c0 * params.sphere_radius / 720.0;
}

double potential(const CasimirModel& model, const SystemParams& params, double s) {
    require_positive_gap(s);
    switch (model.variant) {
        case CasimirVariant::Off:
            return 0.0;
        case CasimirVariant::IdealPfa:
            return potential_amplitude(params) / (s * s);
        case CasimirVariant::PfaWithCorrection: {
            // Antiderivative of the corrected force, zero at infinity.
            const double v = potential_amplitude(params);
            return v / (s * s) +
                   v * (2.0 * model.beta - 1.0) / (params.sphere_radius * s);
        }
        case CasimirVariant::PowerLaw:
            return -model.amplitude / std::pow(s, model.exponent - 1);
    }
    return 0.0;
}

double force(const CasimirModel& model, const SystemParams& params, double s) {
    require_positive_gap(s);
    switch (model.variant) {
        case CasimirVariant::Off:
            return 0.0;
        case CasimirVariant::IdealPfa:
            return -2.0 * potential_amplitude(params) / cube(s);
        case CasimirVariant::PfaWithCorrection: {
            const double ideal = -2.0 * potential_amplitude(params) / cube(s);
            const double bracket =
                1.0 + s / (2.0 * params.sphere_radius) * (2.0 * model.beta - 1.0);
            return ideal * bracket;
        }
        case CasimirVariant::PowerLaw:
            return (model.exponent - 1) * model.amplitude / std::pow(s, model.exponent);
    }
    return 0.0;
}

double stiffness(const CasimirModel& model, const SystemParams& params, double s) {
    // Single rounded product shared with coupling_J keeps hbar*J == -U''
    // exact in floating point, not just in the algebra.
    return -constants::hbar * coupling_J(model, params, s);
}

double effective_frequency(const CasimirModel& model, const SystemParams& params,
                           double x_s) {
    const double gap = params.gap - x_s;
    require_positive_gap(gap);
    const double omega = params.mech_freq_1;
    const double shifted_sq =
        omega * omega + stiffness(model, params, gap) / params.mirror_mass;
    if (!(shifted_sq > 0.0)) {
        throw Error(ErrorKind::AdhesionRegime,
                    "vacuum softening cancels the restoring stiffness at gap " +
                        std::to_string(gap) + " m");
    }
    return std::sqrt(shifted_sq);
}

double coupling_J(const CasimirModel& model, const SystemParams& params,
                  double separation) {
    // -U''(s)/hbar, evaluated per variant. Positive for an active model.
    const double s = separation;
    require_positive_gap(s);
    const double pi3 = constants::pi * constants::pi * constants::pi;
    switch (model.variant) {
        case CasimirVariant::Off:
            return 0.0;
        case CasimirVariant::IdealPfa:
            return pi3 * constants::c0 * params.sphere_radius / (120.0 * s * s * s * s);
        case CasimirVariant::PfaWithCorrection: {
            const double ideal =
                pi3 * constants::c0 * params.sphere_radius / (120.0 * s * s * s * s);
            // -U'' = 6|V|/s^4 + 2|V|(2b-1)/(R s^3); second term enters with
            // the opposite sign of the ideal part since 2b-1 < 0.
            const double correction = pi3 * constants::c0 *
                                      (2.0 * model.beta - 1.0) / (360.0 * cube(s));
            return ideal + correction;
        }
        case CasimirVariant::PowerLaw: {
            const double n = model.exponent;
            return n * (n - 1.0) * model.amplitude /
                   (constants::hbar * std::pow(s, model.exponent + 1));
        }
    }
    return 0.0;
}

double critical_separation(const CasimirModel& model, const SystemParams& params) {
    const double k_m = params.mirror_mass * params.mech_freq_1 * params.mech_freq_1;
    switch (model.variant) {
        case CasimirVariant::Off:
            throw Error(ErrorKind::ModelHasNoAdhesion,
                        "no adhesion threshold: vacuum force model is off");
        case CasimirVariant::IdealPfa:
            return std::pow(-6.0 * potential_amplitude(params) / k_m, 0.25);
        case CasimirVariant::PowerLaw: {
            const double n = model.exponent;
            return std::pow(n * (n - 1.0) * model.amplitude / k_m, 1.0 / (n + 1.0));
        }
        case CasimirVariant::PfaWithCorrection: {
            // Newton on k_m + U''(d) = 0, seeded by the ideal closed form.
            double d = std::pow(-6.0 * potential_amplitude(params) / k_m, 0.25);
            for (int i = 0; i < 80; ++i) {
                const double f = k_m + stiffness(model, params, d);
                const double h = d * 1e-6;
                const double fp = (stiffness(model, params, d + h) -
                                   stiffness(model, params, d - h)) /
                                  (2.0 * h);
                const double step = f / fp;
                d -= step;
                if (!(d > 0.0)) {
                    throw Error(ErrorKind::NoConvergence,
                                "critical separation iteration left the domain");
                }
                if (std::abs(step) <= 1e-14 * d) return d;
            }
            throw Error(ErrorKind::NoConvergence,
                        "critical separation did not converge");
        }
    }
    throw Error(ErrorKind::ModelHasNoAdhesion, "unknown model variant");
}

} // namespace omit::casimir
