#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "omit/config.hpp"

namespace omit {

// Subcommand bodies shared by the CLI and the test suites. Each throws
// omit::Error; the CLI maps kinds to exit codes. File-writing commands return
// the paths they produced and remove partial outputs when a later step fails.
void run_info(const RunConfig& config, std::ostream& out);

std::vector<std::string> run_spectrum(const RunConfig& config);
std::vector<std::string> run_switch(const RunConfig& config);
std::vector<std::string> run_oracle(const RunConfig& config);

} // namespace omit
