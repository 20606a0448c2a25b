#include "omit/linear_response.hpp"

#include <cmath>

#include "omit/casimir.hpp"
#include "omit/errors.hpp"

namespace omit {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_denominator(const Complex& denom, double scale) {
    if (std::abs(denom) <= 1e-300 * scale) {
        throw Error(ErrorKind::DegenerateDenominator,
                    "response denominator underflows its term scale");
    }
}

} // namespace

double eta(const SystemParams& params, Complex da_plus, double eps_probe) {
    const Complex t =
        1.0 - 2.0 * params.coupling_ratio * params.cavity_decay * da_plus / eps_probe;
    return std::norm(t);
}

ResponsePoint respond_single(const SystemParams& params, const CasimirModel& model,
                             const SteadyState1& steady, double nu) {
    (void)model; // curvature already folded into steady.omega_eff
    const DerivedParams derived = derive(params);
    const double gam = params.cavity_decay;
    const double m = params.mirror_mass;
    const double det = params.pump_detuning - derived.g * steady.x_s;
    const double hg2 = constants::hbar * derived.g * derived.g;

    ResponsePoint point;
    point.nu = nu;
    point.delta_p = delta_p_from_nu(params, nu);
    point.G_plus = Complex(gam, -(det + nu));
    point.G_minus = Complex(gam, det - nu);

    const Complex chi(steady.omega_eff * steady.omega_eff - nu * nu,
                      -nu * params.mech_decay_1);
    const Complex num_field = chi * point.G_plus * m + kI * hg2 * steady.n_s;
    const Complex denom = chi * point.G_plus * point.G_minus * m -
                          kI * hg2 * (point.G_plus - point.G_minus) * steady.n_s;
    const double scale =
        std::abs(chi * point.G_plus * point.G_minus * m) +
        std::abs(hg2 * (point.G_plus - point.G_minus) * steady.n_s) +
        m * std::pow(params.mech_freq_1, 3);
    check_denominator(denom, scale);

    // Amplitudes per unit probe drive; the stored values carry eps_probe.
    const Complex da_plus_unit = num_field / denom;
    const Complex X_unit =
        constants::hbar * derived.g * std::conj(steady.a_s) * point.G_plus / denom;
    const Complex da_minus_unit =
        kI * hg2 * steady.a_s * steady.a_s / std::conj(denom);

    point.da_plus = da_plus_unit * derived.eps_probe;
    point.da_minus = da_minus_unit * derived.eps_probe;
    point.X = X_unit * derived.eps_probe;
    point.eta = std::norm(1.0 - 2.0 * params.coupling_ratio * gam * da_plus_unit);
    return point;
}

ResponsePoint2 respond_double(const SystemParams& params, const CasimirModel& model,
                              const SteadyState2& steady, double nu) {
    (void)model;
    const DerivedParams derived = derive(params);
    const double gam = params.cavity_decay;
    const double m1 = params.mirror_mass;
    const double m2 = *params.sphere_mass;
    const double det = params.pump_detuning - derived.g * steady.x1_s;
    const double hg2 = constants::hbar * derived.g * derived.g;
    const double hJ = constants::hbar * steady.coupling_J;

    ResponsePoint2 point;
    point.nu = nu;
    point.delta_p = delta_p_from_nu(params, nu);
    point.G1 = Complex(gam, det - nu);
    point.G2 = Complex(gam, -(det + nu));
    point.chi1 = Complex(steady.omega1_eff * steady.omega1_eff - nu * nu,
                         -nu * params.mech_decay_1);
    point.chi2 = Complex(steady.omega2_eff * steady.omega2_eff - nu * nu,
                         -nu * *params.mech_decay_2);

    const Complex mech = point.chi1 * point.chi2 * m1 * m2;
    const Complex denom = mech * point.G1 * point.G2 -
                          kI * hg2 * point.chi2 * m2 * steady.n_s *
                              (point.G2 - point.G1) -
                          hJ * hJ * point.G1 * point.G2;
    const double scale = std::abs(mech * point.G1 * point.G2) +
                         std::abs(hg2 * point.chi2 * m2 * steady.n_s *
                                  (point.G2 - point.G1)) +
                         std::abs(hJ * hJ * point.G1 * point.G2) +
                         m1 * m2 * std::pow(params.mech_freq_1, 5);
    check_denominator(denom, scale);

    const Complex da_plus_unit = (mech * point.G2 +
                                  kI * hg2 * point.chi2 * m2 * steady.n_s -
                                  hJ * hJ * point.G2) /
                                 denom;
    const Complex X1_unit = constants::hbar * derived.g * point.chi2 * m2 *
                            std::conj(steady.a_s) * point.G2 / denom;
    const Complex X2_unit = -constants::hbar * hJ * derived.g *
                            std::conj(steady.a_s) * point.G2 / denom;
    const Complex da_minus_unit = kI * hg2 * std::conj(point.chi2) * m2 *
                                  steady.a_s * steady.a_s / std::conj(denom);

    point.da_plus = da_plus_unit * derived.eps_probe;
    point.da_minus = da_minus_unit * derived.eps_probe;
    point.X1 = X1_unit * derived.eps_probe;
    point.X2 = X2_unit * derived.eps_probe;
    point.eta = std::norm(1.0 - 2.0 * params.coupling_ratio * gam * da_plus_unit);
    return point;
}

} // namespace omit
