#pragma once

#include <array>
#include <complex>
#include <functional>

namespace omit {

// Projection of a signal onto {1, e^{-i nu t}, e^{+i nu t}} and the second
// harmonics, over an integer number of beat periods. Rectangular window;
// orthogonality over full periods removes cross-talk exactly.
struct SidebandProjection {
    std::complex<double> dc;
    std::complex<double> plus;   // coefficient of e^{-i nu t}
    std::complex<double> minus;  // coefficient of e^{+i nu t}
    std::complex<double> plus2;  // coefficient of e^{-2 i nu t}
    std::complex<double> minus2; // coefficient of e^{+2 i nu t}

    // Same projections over the two halves of the window (each an integer
    // number of periods); used for stationarity diagnostics.
    std::array<std::complex<double>, 3> half_dc;   // [first, second, unused]
    std::array<std::complex<double>, 3> half_plus;
    std::array<std::complex<double>, 3> half_minus;
};

// Composite Gauss-Legendre quadrature, `panels_per_period` panels per beat
// period. The sampler is called with strictly increasing times, so it may
// advance a simulation in place. `periods` is rounded up to the next even
// count so both half windows stay period-aligned.
SidebandProjection project_sidebands(
    const std::function<std::complex<double>(double)>& sample, double t0,
    double nu, int periods, int panels_per_period = 6);

// Largest relative half-window discrepancy across the dc/plus/minus channels,
// normalized by the largest full-window amplitude.
double projection_drift(const SidebandProjection& p);

} // namespace omit
