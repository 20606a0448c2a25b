#pragma once

#include <string>
#include <vector>

#include "omit/linear_response.hpp"

namespace omit {

struct SweepRow {
    double d = 0.0; // gap, only meaningful for switch sweeps
    double delta_p = 0.0;
    double nu = 0.0;
    double eta = 0.0;
    Complex da_plus;
    Complex da_minus;
    bool ok = true;
    std::string error; // reason for a flagged row, never silently dropped
};

struct SweepResult {
    std::string axis; // "delta_p" or "d"
    std::vector<double> grid;
    std::vector<SweepRow> rows;
    std::string provenance; // config snapshot, filled by the command layer
};

struct SolveOptions {
    ForceTreatment force_treatment = ForceTreatment::Exact;
    CoupledTreatment coupled_treatment = CoupledTreatment::Quadratic;
};

// Probe response over a strictly increasing Delta_p grid at fixed gap: one
// steady-state solve, then independent per-point evaluations (parallel when
// jobs > 1, emitted in grid order regardless).
SweepResult sweep_spectrum(const SystemParams& params, const CasimirModel& model,
                           const std::vector<double>& delta_p_grid, int jobs = 1,
                           const SolveOptions& options = {});

// Resonant output rate over a strictly increasing gap grid. Steady states are
// tracked by continuation from the largest gap down; rows inside the adhesion
// regime are flagged.
SweepResult sweep_switch(const SystemParams& params, const CasimirModel& model,
                         const std::vector<double>& d_grid, int jobs = 1,
                         const SolveOptions& options = {});

// Transparency-window center: argmax of eta over [lo, hi] in Delta_p,
// refined to a resolution of Gamma_m,1 / 10 or better.
double find_spectrum_peak(const SystemParams& params, const CasimirModel& model,
                          double lo, double hi,
                          const SolveOptions& options = {});

// Default spectral grid, 2001 points spanning +/- 4% of the mirror frequency.
std::vector<double> default_spectrum_grid(const SystemParams& params);

} // namespace omit
