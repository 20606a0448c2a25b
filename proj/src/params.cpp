#include "omit/params.hpp"

#include <cmath>
#include <sstream>

#include "omit/errors.hpp"

namespace omit {

namespace {

void check_positive(ValidationReport& report, double value, const char* field) {
    if (!std::isfinite(value) || value <= 0.0) {
        report.items.push_back({Diagnostic::Severity::Error, "NON_POSITIVE", field,
                                std::string(field) + " must be finite and > 0"});
    }
}

void check_non_negative(ValidationReport& report, double value, const char* field) {
    if (!std::isfinite(value) || value < 0.0) {
        report.items.push_back({Diagnostic::Severity::Error, "NEGATIVE", field,
                                std::string(field) + " must be finite and >= 0"});
    }
}

} // namespace

bool ValidationReport::ok() const {
    for (const auto& d : items)
        if (d.severity == Diagnostic::Severity::Error) return false;
    return true;
}

bool ValidationReport::has(const std::string& code) const {
    for (const auto& d : items)
        if (d.code == code) return true;
    return false;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    for (const auto& d : items) {
        os << (d.severity == Diagnostic::Severity::Error ? "error" : "warning")
           << " [" << d.code << "]";
        if (!d.field.empty()) os << " " << d.field << ":";
        os << " " << d.message << "\n";
    }
    return os.str();
}

ValidationReport validate(const SystemParams& p) {
    ValidationReport report;

    check_positive(report, p.wavelength, "wavelength");
    check_positive(report, p.cavity_length, "cavity_length");
    check_positive(report, p.sphere_radius, "sphere_radius");
    check_positive(report, p.gap, "gap");
    check_positive(report, p.mirror_mass, "mirror_mass");
    check_positive(report, p.cavity_decay, "cavity_decay");
    check_positive(report, p.mech_decay_1, "mech_decay_1");
    check_positive(report, p.mech_freq_1, "mech_freq_1");
    check_non_negative(report, p.pump_power, "pump_power");
    check_non_negative(report, p.probe_power, "probe_power");
    if (!std::isfinite(p.pump_detuning)) {
        report.items.push_back({Diagnostic::Severity::Error, "NONFINITE",
                                "pump_detuning", "pump_detuning must be finite"});
    }
    if (!std::isfinite(p.coupling_ratio) || p.coupling_ratio <= 0.0 ||
        p.coupling_ratio > 1.0) {
        report.items.push_back({Diagnostic::Severity::Error, "RANGE", "coupling_ratio",
                                "coupling_ratio must lie in (0, 1]"});
    }

    if (p.mode == SphereMode::MoveableSphere) {
        if (!p.sphere_mass) {
            report.items.push_back({Diagnostic::Severity::Error, "MISSING",
                                    "sphere_mass",
                                    "moveable-sphere mode requires sphere_mass"});
        } else {
            check_positive(report, *p.sphere_mass, "sphere_mass");
        }
        if (!p.mech_decay_2) {
            report.items.push_back({Diagnostic::Severity::Error, "MISSING",
                                    "mech_decay_2",
                                    "moveable-sphere mode requires mech_decay_2"});
        } else {
            check_positive(report, *p.mech_decay_2, "mech_decay_2");
        }
        if (!p.mech_freq_2) {
            report.items.push_back({Diagnostic::Severity::Error, "MISSING",
                                    "mech_freq_2",
                                    "moveable-sphere mode requires mech_freq_2"});
        } else {
            check_positive(report, *p.mech_freq_2, "mech_freq_2");
        }
    }

    if (p.casimir.variant == CasimirVariant::PowerLaw) {
        if (!(p.casimir.amplitude > 0.0)) {
            report.items.push_back({Diagnostic::Severity::Error, "RANGE",
                                    "casimir.amplitude",
                                    "power-law amplitude must be > 0"});
        }
        if (p.casimir.exponent < 2) {
            report.items.push_back({Diagnostic::Severity::Error, "RANGE",
                                    "casimir.exponent",
                                    "power-law exponent must be >= 2"});
        }
    }

    if (!report.ok()) return report;

    // Regime warnings. These do not block evaluation.
    const bool pfa = p.casimir.variant == CasimirVariant::IdealPfa ||
                     p.casimir.variant == CasimirVariant::PfaWithCorrection;
    if (pfa && p.gap / p.sphere_radius > 0.1) {
        report.items.push_back({Diagnostic::Severity::Warning, "PFA_VALIDITY", "gap",
                                "d/R > 0.1; proximity-force approximation degrades"});
    }
    if (p.casimir.active() && p.gap >= 1e-6) {
        report.items.push_back(
            {Diagnostic::Severity::Warning, "THERMAL_REGIME", "gap",
             "d >= 1 um; thermal contribution to the vacuum force is not modeled"});
    }
    if (p.casimir.active()) {
        const double d_crit = casimir::critical_separation(p.casimir, p);
        if (p.gap <= 1.2 * d_crit) {
            report.items.push_back(
                {Diagnostic::Severity::Warning, "ADHESION_RISK", "gap",
                 "gap within 20% of the adhesion threshold " +
                     std::to_string(d_crit) + " m"});
        }
    }
    return report;
}

DerivedParams derive(const SystemParams& p) {
    const ValidationReport report = validate(p);
    if (!report.ok()) {
        throw Error(ErrorKind::ConfigError,
                    "invalid parameters:\n" + report.summary());
    }

    DerivedParams d;
    d.omega_c = 2.0 * constants::pi * constants::c0 / p.wavelength;
    d.g = d.omega_c / p.cavity_length;
    d.omega_l = d.omega_c - p.pump_detuning;
    if (!(d.omega_l > 0.0)) {
        throw Error(ErrorKind::ConfigError, "pump_detuning exceeds omega_c");
    }
    // Probe amplitude is normalized at nu = omega_m,1 across a sweep; eta is
    // independent of eps_probe, so the choice only affects reported amplitudes.
    d.omega_p = d.omega_l + p.mech_freq_1;
    d.eps_pump = std::sqrt(2.0 * p.pump_power * p.coupling_ratio * p.cavity_decay /
                           (constants::hbar * d.omega_l));
    d.eps_probe = std::sqrt(2.0 * p.probe_power * p.coupling_ratio * p.cavity_decay /
                            (constants::hbar * d.omega_p));
    return d;
}

} // namespace omit
