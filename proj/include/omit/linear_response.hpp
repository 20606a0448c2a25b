#pragma once

#include <complex>

#include "omit/params.hpp"
#include "omit/steady_state.hpp"

namespace omit {

using Complex = std::complex<double>;

// Sideband amplitudes at one probe-pump beat frequency nu. Amplitudes carry
// the configured probe drive eps_p; eta is drive-independent.
struct ResponsePoint {
    double nu = 0.0;
    double delta_p = 0.0;
    Complex da_plus;  // coefficient of e^{-i nu t} in the field fluctuation
    Complex da_minus; // coefficient of e^{+i nu t}
    Complex X;        // coefficient of e^{-i nu t} in the mirror motion (m)
    Complex G_plus;   // gamma - i Delta_L + i g x_s - i nu
    Complex G_minus;  // gamma + i Delta_L - i g x_s - i nu
    double eta = 0.0;
};

struct ResponsePoint2 {
    double nu = 0.0;
    double delta_p = 0.0;
    Complex da_plus;
    Complex da_minus;
    Complex X1;
    Complex X2;
    Complex chi1; // omega_1^2 - nu^2 - i nu Gamma_1 at the resolved frequency
    Complex chi2;
    Complex G1;   // gamma + i Delta_L - i g x1_s - i nu
    Complex G2;   // gamma - i Delta_L + i g x1_s - i nu
    double eta = 0.0;
};

// Probe output rate |1 - 2 eta_c gamma da_plus / eps_p|^2. With
// coupling_ratio = 1 this is the bare input-output expression.
double eta(const SystemParams& params, Complex da_plus, double eps_probe);

// Closed-form sideband response of the fixed-sphere system.
ResponsePoint respond_single(const SystemParams& params, const CasimirModel& model,
                             const SteadyState1& steady, double nu);

// Closed-form response of the mirror-sphere system; fluctuation frequencies
// and coupling come resolved from the steady state.
ResponsePoint2 respond_double(const SystemParams& params, const CasimirModel& model,
                              const SteadyState2& steady, double nu);

} // namespace omit
