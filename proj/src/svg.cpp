#include "omit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "omit/csv.hpp"
#include "omit/errors.hpp"

namespace omit {

namespace {

constexpr double kWidth = 800.0, kHeight = 500.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 55.0;

std::string tick_label(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace

std::string line_plot_svg(const std::vector<double>& x, const std::vector<double>& y,
                          const std::string& x_label, const std::string& y_label,
                          const std::string& title) {
    if (x.size() != y.size() || x.empty()) {
        throw Error(ErrorKind::ConfigError, "plot data size mismatch");
    }
    double x_min = INFINITY, x_max = -INFINITY, y_min = INFINITY, y_max = -INFINITY;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
        x_min = std::min(x_min, x[i]);
        x_max = std::max(x_max, x[i]);
        y_min = std::min(y_min, y[i]);
        y_max = std::max(y_max, y[i]);
    }
    if (!(x_max > x_min)) x_max = x_min + 1.0;
    if (!(y_max > y_min)) y_max = y_min + 1.0;
    const double pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto sx = [&](double v) { return kLeft + (v - x_min) / (x_max - x_min) * plot_w; };
    auto sy = [&](double v) {
        return kTop + (1.0 - (v - y_min) / (y_max - y_min)) * plot_h;
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
       << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
       << kHeight << "\">\n";
    os << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"16\">"
       << title << "</text>\n";

    // Axes and ticks.
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
       << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double fx = x_min + (x_max - x_min) * i / ticks;
        const double fy = y_min + (y_max - y_min) * i / ticks;
        os << "<line x1=\"" << sx(fx) << "\" y1=\"" << kTop + plot_h << "\" x2=\""
           << sx(fx) << "\" y2=\"" << kTop + plot_h + 5 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << sx(fx) << "\" y=\"" << kTop + plot_h + 20
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
              "font-size=\"11\">"
           << tick_label(fx) << "</text>\n";
        os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << sy(fy) << "\" x2=\""
           << kLeft << "\" y2=\"" << sy(fy) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << kLeft - 8 << "\" y=\"" << sy(fy) + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
           << tick_label(fy) << "</text>\n";
    }
    os << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
       << x_label << "</text>\n";
    os << "<text x=\"18\" y=\"" << kTop + plot_h / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
          "transform=\"rotate(-90 18 "
       << kTop + plot_h / 2 << ")\">" << y_label << "</text>\n";

    // Polyline segments, broken at non-finite samples.
    bool open = false;
    std::ostringstream path;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
            open = false;
            continue;
        }
        path << (open ? 'L' : 'M') << sx(x[i]) << ' ' << sy(y[i]) << ' ';
        open = true;
    }
    os << "<path d=\"" << path.str()
       << "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";
    os << "</svg>\n";
    return os.str();
}

} // namespace omit
