#pragma once

#include <string>
#include <vector>

#include "omit/config.hpp"

namespace omit {

// Bundled reproduction scenarios. "baseline" is the common parameter set
// (1064 nm cavity, 25 mm length, 150 nm gold sphere, 145 ng mirror,
// gamma = 2pi x 80 kHz, Gamma_m = 2pi x 141 Hz, omega_m = Delta_L =
// 2pi x 947 kHz, critical coupling); the fig* presets vary one ingredient
// each. Names are stable CLI identifiers.
std::vector<std::string> preset_names();

RunConfig make_preset(const std::string& name);

} // namespace omit
