#include "omit/demod.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "omit/constants.hpp"

namespace omit {

namespace {

struct GaussRule {
    std::vector<double> nodes;   // on [0, 1]
    std::vector<double> weights; // sum to 1
};

// Legendre nodes by Newton iteration; machine precision for modest order.
GaussRule make_gauss_rule(int order) {
    GaussRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        double x = std::cos(constants::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = 0.5 * (1.0 + x);
        rule.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    // The cos seed walks the roots from +1 down; samplers advance a live
    // simulation, so nodes must come out in increasing time order.
    std::vector<std::size_t> idx(rule.nodes.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return rule.nodes[a] < rule.nodes[b];
    });
    GaussRule sorted;
    for (std::size_t i : idx) {
        sorted.nodes.push_back(rule.nodes[i]);
        sorted.weights.push_back(rule.weights[i]);
    }
    return sorted;
}

const GaussRule& gauss12() {
    static const GaussRule rule = make_gauss_rule(12);
    return rule;
}

} // namespace

SidebandProjection project_sidebands(
    const std::function<std::complex<double>(double)>& sample, double t0,
    double nu, int periods, int panels_per_period) {
    if (periods % 2 != 0) ++periods;
    const double period = 2.0 * constants::pi / nu;
    const int total_panels = periods * panels_per_period;
    const double dt = period / panels_per_period;
    const GaussRule& rule = gauss12();

    using C = std::complex<double>;
    const C i_unit(0.0, 1.0);
    C acc[5] = {};       // dc, plus, minus, plus2, minus2
    C acc_half[2][3] = {};

    for (int panel = 0; panel < total_panels; ++panel) {
        const double a = t0 + panel * dt;
        const int half = (2 * panel) / total_panels;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double t = a + rule.nodes[q] * dt;
            const double w = rule.weights[q] * dt;
            const C f = sample(t);
            const C e_plus = std::exp(i_unit * (nu * t));
            const C e_minus = std::conj(e_plus);
            acc[0] += w * f;
            acc[1] += w * f * e_plus;
            acc[2] += w * f * e_minus;
            acc[3] += w * f * e_plus * e_plus;
            acc[4] += w * f * e_minus * e_minus;
            acc_half[half][0] += w * f;
            acc_half[half][1] += w * f * e_plus;
            acc_half[half][2] += w * f * e_minus;
        }
    }

    const double window = total_panels * dt;
    SidebandProjection out;
    out.dc = acc[0] / window;
    out.plus = acc[1] / window;
    out.minus = acc[2] / window;
    out.plus2 = acc[3] / window;
    out.minus2 = acc[4] / window;
    for (int h = 0; h < 2; ++h) {
        out.half_dc[h] = acc_half[h][0] / (0.5 * window);
        out.half_plus[h] = acc_half[h][1] / (0.5 * window);
        out.half_minus[h] = acc_half[h][2] / (0.5 * window);
    }
    return out;
}

double projection_drift(const SidebandProjection& p) {
    const double scale = std::max(
        {std::abs(p.dc), std::abs(p.plus), std::abs(p.minus), 1e-300});
    double drift = std::abs(p.half_dc[1] - p.half_dc[0]);
    drift = std::max(drift, std::abs(p.half_plus[1] - p.half_plus[0]));
    drift = std::max(drift, std::abs(p.half_minus[1] - p.half_minus[0]));
    return drift / scale;
}

} // namespace omit
