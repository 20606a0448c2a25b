#pragma once

#include <string>
#include <vector>

namespace omit {

// Minimal line plot. Callers feed the values re-parsed from the CSV text so
// the rendering never disagrees with the written table. NaN rows break the
// polyline.
std::string line_plot_svg(const std::vector<double>& x, const std::vector<double>& y,
                          const std::string& x_label, const std::string& y_label,
                          const std::string& title);

} // namespace omit
