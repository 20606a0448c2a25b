#include "omit/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "omit/errors.hpp"

namespace omit {

namespace {

void require_monotone(const std::vector<double>& grid, const char* name) {
    if (grid.empty()) {
        throw Error(ErrorKind::ConfigError, std::string(name) + " grid is empty");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw Error(ErrorKind::ConfigError,
                        std::string(name) + " grid must be strictly increasing");
        }
    }
}

template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
    const int workers = std::max(
        1, std::min<int>(jobs, static_cast<int>(n)));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

SweepRow response_row(const SystemParams& params, const CasimirModel& model,
                      const SteadyState1* single, const SteadyState2* coupled,
                      double delta_p) {
    SweepRow row;
    row.d = params.gap;
    row.delta_p = delta_p;
    row.nu = nu_from_delta_p(params, delta_p);
    if (single) {
        const ResponsePoint p = respond_single(params, model, *single, row.nu);
        row.eta = p.eta;
        row.da_plus = p.da_plus;
        row.da_minus = p.da_minus;
    } else {
        const ResponsePoint2 p = respond_double(params, model, *coupled, row.nu);
        row.eta = p.eta;
        row.da_plus = p.da_plus;
        row.da_minus = p.da_minus;
    }
    return row;
}

} // namespace

std::vector<double> default_spectrum_grid(const SystemParams& params) {
    const int points = 2001;
    const double span = 0.04 * params.mech_freq_1;
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) {
        grid[i] = -span + 2.0 * span * i / (points - 1);
    }
    return grid;
}

SweepResult sweep_spectrum(const SystemParams& params, const CasimirModel& model,
                           const std::vector<double>& delta_p_grid, int jobs,
                           const SolveOptions& options) {
    require_monotone(delta_p_grid, "delta_p");

    SweepResult result;
    result.axis = "delta_p";
    result.grid = delta_p_grid;
    result.rows.resize(delta_p_grid.size());

    if (params.mode == SphereMode::FixedSphere) {
        const SteadyState1 steady =
            solve_single(params, model, options.force_treatment);
        parallel_for(delta_p_grid.size(), jobs, [&](std::size_t i) {
            result.rows[i] =
                response_row(params, model, &steady, nullptr, delta_p_grid[i]);
        });
    } else {
        const SteadyState2 steady =
            solve_double(params, model, options.coupled_treatment);
        parallel_for(delta_p_grid.size(), jobs, [&](std::size_t i) {
            result.rows[i] =
                response_row(params, model, nullptr, &steady, delta_p_grid[i]);
        });
    }
    return result;
}

SweepResult sweep_switch(const SystemParams& params, const CasimirModel& model,
                         const std::vector<double>& d_grid, int jobs,
                         const SolveOptions& options) {
    (void)jobs; // steady-state continuation orders the solves; points are cheap
    require_monotone(d_grid, "d");

    SweepResult result;
    result.axis = "d";
    result.grid = d_grid;
    result.rows.resize(d_grid.size());

    // Continuation from the largest gap down tracks the physically prepared
    // branch across the whole grid.
    double seed = 0.0;
    bool have_seed = false;
    for (std::size_t k = d_grid.size(); k-- > 0;) {
        SystemParams local = params;
        local.gap = d_grid[k];
        SweepRow& row = result.rows[k];
        row.d = local.gap;
        row.delta_p = 0.0;
        row.nu = nu_from_delta_p(local, 0.0);
        try {
            if (local.mode == SphereMode::FixedSphere) {
                SteadyState1 steady;
                if (have_seed) {
                    try {
                        steady = solve_single_seeded(local, model,
                                                     options.force_treatment, seed);
                    } catch (const Error&) {
                        steady = solve_single(local, model, options.force_treatment);
                    }
                } else {
                    steady = solve_single(local, model, options.force_treatment);
                }
                seed = steady.x_s;
                have_seed = true;
                row = response_row(local, model, &steady, nullptr, 0.0);
            } else {
                const SteadyState2 steady =
                    solve_double(local, model, options.coupled_treatment);
                row = response_row(local, model, nullptr, &steady, 0.0);
            }
        } catch (const Error& err) {
            row.ok = false;
            row.error = err.what();
            row.eta = std::nan("");
            have_seed = false;
        }
    }
    return result;
}

double find_spectrum_peak(const SystemParams& params, const CasimirModel& model,
                          double lo, double hi, const SolveOptions& options) {
    if (!(hi > lo)) {
        throw Error(ErrorKind::ConfigError, "peak search window is empty");
    }
    const SteadyState1* single_ptr = nullptr;
    const SteadyState2* coupled_ptr = nullptr;
    SteadyState1 single;
    SteadyState2 coupled;
    if (params.mode == SphereMode::FixedSphere) {
        single = solve_single(params, model, options.force_treatment);
        single_ptr = &single;
    } else {
        coupled = solve_double(params, model, options.coupled_treatment);
        coupled_ptr = &coupled;
    }

    auto eta_at = [&](double delta_p) {
        return response_row(params, model, single_ptr, coupled_ptr, delta_p).eta;
    };

    const double resolution = params.mech_decay_1 / 10.0;
    double a = lo, b = hi;
    double best = 0.5 * (a + b);
    while (true) {
        const int points = 201;
        const double step = (b - a) / (points - 1);
        double best_eta = -1.0;
        for (int i = 0; i < points; ++i) {
            const double dp = a + i * step;
            const double e = eta_at(dp);
            if (e > best_eta) {
                best_eta = e;
                best = dp;
            }
        }
        if (step <= resolution) return best;
        const double span = 4.0 * step;
        a = std::max(lo, best - span);
        b = std::min(hi, best + span);
    }
}

} // namespace omit
