#include "omit/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "omit/casimir.hpp"
#include "omit/csv.hpp"
#include "omit/errors.hpp"
#include "omit/oracle.hpp"
#include "omit/svg.hpp"
#include "omit/sweep.hpp"

namespace omit {

namespace fs = std::filesystem;

namespace {

int resolve_jobs(const RunConfig& config) {
    if (config.output.jobs > 0) return config.output.jobs;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

const char* stability_name(Stability s) {
    switch (s) {
        case Stability::Stable: return "stable";
        case Stability::Adhesive: return "adhesive";
        default: return "unstable";
    }
}

// Removes everything it registered unless release() was called.
class OutputGuard {
  public:
    ~OutputGuard() {
        if (released_) return;
        for (const auto& path : paths_) {
            std::error_code ec;
            fs::remove(path, ec);
        }
    }
    void add(const std::string& path) { paths_.push_back(path); }
    std::vector<std::string> release() {
        released_ = true;
        return paths_;
    }

  private:
    std::vector<std::string> paths_;
    bool released_ = false;
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::ConfigError, "cannot open output file '" + path + "'");
    }
    out << content;
    if (!out) {
        throw Error(ErrorKind::ConfigError, "failed writing '" + path + "'");
    }
}

std::string output_stem(const RunConfig& config, const std::string& command) {
    std::string stem = command;
    if (!config.output.tag.empty()) stem += "_" + config.output.tag;
    return (fs::path(config.output.dir) / stem).string();
}

// SVG values come from re-parsing the CSV-formatted text so plot and table
// can never disagree.
double reparse(double v) { return std::strtod(format_double(v).c_str(), nullptr); }

void maybe_write_svg(const RunConfig& config, OutputGuard& guard,
                     const std::string& csv_path, const std::vector<SweepRow>& rows,
                     bool switch_axis, const std::string& title) {
    if (!config.output.svg) return;
    std::vector<double> x, y;
    x.reserve(rows.size());
    y.reserve(rows.size());
    for (const auto& row : rows) {
        x.push_back(reparse(switch_axis ? row.d : row.delta_p));
        y.push_back(reparse(row.eta));
    }
    const std::string path = csv_path.substr(0, csv_path.size() - 4) + ".svg";
    write_file(path, line_plot_svg(x, y,
                                   switch_axis ? "d (m)" : "Delta_p (rad/s)",
                                   "eta", title));
    guard.add(path);
}

std::vector<double> spectrum_grid(const RunConfig& config) {
    const double span_default = 0.04 * config.params.mech_freq_1;
    const double lo = config.spectrum.delta_p_min.value_or(-span_default);
    const double hi = config.spectrum.delta_p_max.value_or(span_default);
    const int points = config.spectrum.points;
    if (points < 2 || !(hi > lo)) {
        throw Error(ErrorKind::ConfigError, "spectrum grid must have points >= 2 "
                                            "and delta_p_max > delta_p_min");
    }
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) {
        grid[i] = lo + (hi - lo) * i / (points - 1);
    }
    return grid;
}

std::string case_suffix(const RunConfig& config, double pump, double gap) {
    std::string suffix;
    if (config.spectrum.pump_powers.size() > 1) {
        suffix += "_PL" + format_double(pump * 1e6) + "uW";
    }
    if (config.spectrum.gaps.size() > 1) {
        suffix += "_d" + format_double(gap * 1e9) + "nm";
    }
    return suffix;
}

} // namespace

void run_info(const RunConfig& config, std::ostream& out) {
    const SystemParams& p = config.params;
    const ValidationReport report = validate(p);
    if (!report.ok()) {
        throw Error(ErrorKind::ConfigError, "invalid parameters:\n" + report.summary());
    }
    const DerivedParams derived = derive(p);
    const CasimirModel& model = p.casimir;

    out << "cavity frequency omega_c  = " << format_double(derived.omega_c)
        << " rad/s\n";
    out << "coupling g                = " << format_double(derived.g)
        << " rad/(s m)\n";
    out << "pump amplitude eps_L      = " << format_double(derived.eps_pump)
        << " 1/s\n";
    out << "probe amplitude eps_p     = " << format_double(derived.eps_probe)
        << " 1/s\n";
    out << "potential amplitude V_sp  = "
        << format_double(casimir::potential_amplitude(p)) << " J m^2\n";
    if (model.active()) {
        out << "adhesion threshold d_crit = "
            << format_double(casimir::critical_separation(model, p)) << " m\n";
        out << "coupling hbar*J(d)        = "
            << format_double(constants::hbar * casimir::coupling_J(model, p, p.gap))
            << " N/m\n";
    } else {
        out << "adhesion threshold d_crit = none (force model off)\n";
        out << "coupling hbar*J(d)        = 0 N/m\n";
    }

    if (p.mode == SphereMode::FixedSphere) {
        const SteadyState1 steady = solve_single(p, model, config.force_treatment);
        out << "effective freq Omega_m    = " << format_double(steady.omega_eff)
            << " rad/s (" << format_double(steady.omega_eff / (2.0 * constants::pi))
            << " Hz)\n";
        out << "photon number n_s         = " << format_double(steady.n_s) << "\n";
        out << "static shift x_s          = " << format_double(steady.x_s) << " m\n";
        out << "effective stiffness k_eff = " << format_double(steady.k_eff)
            << " N/m\n";
        out << "stability                 = "
            << stability_name(classify_stability(steady, p, model)) << "\n";
        out << "balance residual          = " << format_double(steady.residual)
            << "\n";
    } else {
        const SteadyState2 steady = solve_double(p, model, config.coupled_treatment);
        out << "effective freq Omega_m,1  = " << format_double(steady.omega1_eff)
            << " rad/s\n";
        out << "effective freq Omega_m,2  = " << format_double(steady.omega2_eff)
            << " rad/s\n";
        out << "photon number n_s         = " << format_double(steady.n_s) << "\n";
        out << "static shifts x_1, x_2    = " << format_double(steady.x1_s) << ", "
            << format_double(steady.x2_s) << " m\n";
        out << "min coupled stiffness     = " << format_double(steady.k_min)
            << " N/m\n";
        out << "stability                 = "
            << stability_name(classify_stability(steady, p, model)) << "\n";
        out << "balance residual          = " << format_double(steady.residual)
            << "\n";
    }

    for (const auto& d : report.items) {
        out << "warning [" << d.code << "] " << d.message << "\n";
    }
}

std::vector<std::string> run_spectrum(const RunConfig& config) {
    const int jobs = resolve_jobs(config);
    const std::vector<double> grid = spectrum_grid(config);
    const SolveOptions options{config.force_treatment, config.coupled_treatment};

    std::vector<double> pumps = config.spectrum.pump_powers;
    if (pumps.empty()) pumps = {config.params.pump_power};
    std::vector<double> gaps = config.spectrum.gaps;
    if (gaps.empty()) gaps = {config.params.gap};

    OutputGuard guard;
    fs::create_directories(config.output.dir);
    for (double gap : gaps) {
        for (double pump : pumps) {
            RunConfig local = config;
            local.params.pump_power = pump;
            local.params.gap = gap;
            SweepResult sweep =
                sweep_spectrum(local.params, local.params.casimir, grid, jobs, options);
            sweep.provenance = serialize_config(local);
            const std::string path =
                output_stem(config, "spectrum") + case_suffix(config, pump, gap) +
                ".csv";
            write_file(path, spectrum_csv(sweep.rows));
            guard.add(path);
            maybe_write_svg(config, guard, path, sweep.rows, false,
                            "probe output rate");
        }
    }
    return guard.release();
}

std::vector<std::string> run_switch(const RunConfig& config) {
    const int jobs = resolve_jobs(config);
    const SolveOptions options{config.force_treatment, config.coupled_treatment};
    if (config.switch_grid.points < 2 ||
        !(config.switch_grid.d_max > config.switch_grid.d_min)) {
        throw Error(ErrorKind::ConfigError, "switch grid must have points >= 2 "
                                            "and d_max > d_min");
    }
    std::vector<double> grid(config.switch_grid.points);
    for (int i = 0; i < config.switch_grid.points; ++i) {
        grid[i] = config.switch_grid.d_min +
                  (config.switch_grid.d_max - config.switch_grid.d_min) * i /
                      (config.switch_grid.points - 1);
    }

    SweepResult sweep =
        sweep_switch(config.params, config.params.casimir, grid, jobs, options);
    sweep.provenance = serialize_config(config);

    bool any_ok = false;
    for (const auto& row : sweep.rows) any_ok |= row.ok;
    if (!any_ok) {
        throw Error(ErrorKind::AdhesionRegime,
                    "every gap in the sweep is inside the adhesion regime");
    }

    OutputGuard guard;
    fs::create_directories(config.output.dir);
    const std::string path = output_stem(config, "switch") + ".csv";
    write_file(path, switch_csv(sweep.rows));
    guard.add(path);
    maybe_write_svg(config, guard, path, sweep.rows, true,
                    "resonant output rate vs gap");
    return guard.release();
}

std::vector<std::string> run_oracle(const RunConfig& config) {
    const SystemParams& p = config.params;
    const CasimirModel& model = p.casimir;
    if (config.oracle.nu_samples < 1) {
        throw Error(ErrorKind::ConfigError, "oracle nu_samples must be >= 1");
    }

    OracleConfig oracle_config;
    oracle_config.variant = config.oracle.variant;
    oracle_config.rtol = config.oracle.rtol;
    oracle_config.settle_time = config.oracle.settle_time;
    oracle_config.demod_periods = config.oracle.demod_periods;
    oracle_config.mech_decay_override = config.oracle.mech_decay_override;
    oracle_config.dump_trajectory = config.oracle.dump_trajectory;
    oracle_config.dump_path =
        output_stem(config, "oracle_trajectory") + ".csv";

    // Analytic comparison uses the same mechanical decay as the oracle run.
    SystemParams analytic = p;
    if (config.oracle.mech_decay_override) {
        analytic.mech_decay_1 = *config.oracle.mech_decay_override;
        if (analytic.mech_decay_2)
            analytic.mech_decay_2 = *config.oracle.mech_decay_override;
    }

    std::vector<OracleRow> rows;
    const double gamma_eff = analytic.mech_decay_1;
    if (p.mode == SphereMode::FixedSphere) {
        const SteadyState1 steady = solve_single(p, model, config.force_treatment);
        const DerivedParams derived = derive(p);
        const double cooperativity =
            constants::hbar * derived.g * derived.g * steady.n_s /
            (p.mirror_mass * p.cavity_decay * steady.omega_eff * gamma_eff);
        const double center = steady.omega_eff - p.mech_freq_1; // Delta_p of window
        const double width = gamma_eff * (1.0 + cooperativity);
        for (int i = 0; i < config.oracle.nu_samples; ++i) {
            const double frac = config.oracle.nu_samples == 1
                                    ? 0.0
                                    : -1.0 + 2.0 * i / (config.oracle.nu_samples - 1);
            const double delta_p = center + frac * width;
            const double nu = nu_from_delta_p(p, delta_p);
            const double eta_ref = respond_single(analytic, model, steady, nu).eta;
            const OracleResult run =
                config.oracle.variant == OracleConfig::Variant::FullNonlinear
                    ? integrate_full(p, model, nu, oracle_config)
                    : integrate_linearized(p, model, steady, nu, oracle_config);
            rows.push_back({nu, delta_p, eta_ref, run.eta});
        }
    } else {
        const SteadyState2 steady = solve_double(p, model, config.coupled_treatment);
        if (config.oracle.variant == OracleConfig::Variant::FullNonlinear &&
            config.coupled_treatment != CoupledTreatment::Literal) {
            throw Error(ErrorKind::ConfigError,
                        "the full nonlinear oracle integrates the literal "
                        "three-mode equations; set coupled_treatment=literal");
        }
        const double center = 0.0;
        const double width = std::max(
            constants::hbar * steady.coupling_J /
                (p.mirror_mass * p.mech_freq_1),
            gamma_eff * 10.0);
        for (int i = 0; i < config.oracle.nu_samples; ++i) {
            const double frac = config.oracle.nu_samples == 1
                                    ? 0.0
                                    : -1.0 + 2.0 * i / (config.oracle.nu_samples - 1);
            const double delta_p = center + frac * width;
            const double nu = nu_from_delta_p(p, delta_p);
            const double eta_ref = respond_double(analytic, model, steady, nu).eta;
            const OracleResult run =
                config.oracle.variant == OracleConfig::Variant::FullNonlinear
                    ? integrate_full(p, model, nu, oracle_config)
                    : integrate_linearized(p, model, steady, nu, oracle_config);
            rows.push_back({nu, delta_p, eta_ref, run.eta});
        }
    }

    OutputGuard guard;
    fs::create_directories(config.output.dir);
    const std::string path = output_stem(config, "oracle") + ".csv";
    write_file(path, oracle_csv(rows));
    guard.add(path);
    return guard.release();
}

} // namespace omit
