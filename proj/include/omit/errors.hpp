#pragma once

#include <stdexcept>
#include <string>

namespace omit {

enum class ErrorKind {
    ConfigError,            // bad input file, bad parameter set
    NonPositiveSeparation,  // gap argument <= 0
    AdhesionRegime,         // Casimir softening cancels the restoring stiffness
    MirrorContact,          // mirror reached the sphere surface
    UnstableCoupledMode,    // coupled stiffness matrix not positive definite
    ModelHasNoAdhesion,     // critical separation undefined (force model off)
    NoConvergence,          // iteration budget exhausted
    DegenerateDenominator,  // closed-form denominator underflow
    IntegratorFailure,      // step size collapsed or step budget exhausted
    NonStationary,          // demodulation window still drifting
};

// Process exit codes used by the CLI: 2 config, 3 physics domain, 4 numeric.
inline int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ConfigError:
            return 2;
        case ErrorKind::NonPositiveSeparation:
        case ErrorKind::AdhesionRegime:
        case ErrorKind::MirrorContact:
        case ErrorKind::UnstableCoupledMode:
        case ErrorKind::ModelHasNoAdhesion:
            return 3;
        default:
            return 4;
    }
}

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }
    int exit_code() const { return exit_code_for(kind_); }

  private:
    ErrorKind kind_;
};

} // namespace omit
