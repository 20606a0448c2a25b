#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

#include "omit/errors.hpp"

namespace omit {

template <int N>
using StateVec = Eigen::Matrix<double, N, 1>;

struct OdeOptions {
    double rtol = 1e-9;
    double h_init = 0.0; // 0 = pick from the first tolerance estimate
    double h_max = std::numeric_limits<double>::infinity();
    std::int64_t max_steps = 200'000'000;
};

// Adaptive Dormand-Prince 5(4) with FSAL and a PI-free step controller.
// Error is measured against rtol * (weight_i + max(|y_i|, |y_new_i|)), so the
// caller's weights set the absolute floor per component.
template <int N, class Rhs>
class Dopri5 {
  public:
    Dopri5(Rhs rhs, double t0, StateVec<N> y0, StateVec<N> weights,
           OdeOptions options = {})
        : rhs_(std::move(rhs)),
          t_(t0),
          y_(std::move(y0)),
          weights_(std::move(weights)),
          options_(options) {
        k1_ = rhs_(t_, y_);
    }

    double time() const { return t_; }
    const StateVec<N>& state() const { return y_; }
    std::int64_t steps() const { return accepted_; }

    // Called after every accepted step; may throw to abort (contact guards,
    // trajectory dumps).
    std::function<void(double, const StateVec<N>&)> on_step;

    void advance_to(double t_end) {
        while (t_ < t_end) {
            if (h_ == 0.0) h_ = initial_step(t_end);
            double h = std::min({h_, options_.h_max, t_end - t_});
            if (!(h > 0.0)) break;
            step_once(h, t_end);
        }
    }

  private:
    double initial_step(double t_end) const {
        const double span = t_end - t_;
        return span > 0.0 ? span * 1e-6 : 1e-12;
    }

    void step_once(double h, double t_end) {
        for (;;) {
            if (++attempts_ > options_.max_steps) {
                throw Error(ErrorKind::IntegratorFailure,
                            "step budget exhausted at t = " + std::to_string(t_));
            }
            const StateVec<N> k2 = rhs_(t_ + h * c2, y_ + h * (a21 * k1_));
            const StateVec<N> k3 =
                rhs_(t_ + h * c3, y_ + h * (a31 * k1_ + a32 * k2));
            const StateVec<N> k4 =
                rhs_(t_ + h * c4, y_ + h * (a41 * k1_ + a42 * k2 + a43 * k3));
            const StateVec<N> k5 = rhs_(
                t_ + h * c5, y_ + h * (a51 * k1_ + a52 * k2 + a53 * k3 + a54 * k4));
            const StateVec<N> k6 =
                rhs_(t_ + h, y_ + h * (a61 * k1_ + a62 * k2 + a63 * k3 + a64 * k4 +
                                       a65 * k5));
            const StateVec<N> y_new =
                y_ + h * (b1 * k1_ + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const StateVec<N> k7 = rhs_(t_ + h, y_new);
            const StateVec<N> err = h * (e1 * k1_ + e3 * k3 + e4 * k4 + e5 * k5 +
                                         e6 * k6 + e7 * k7);

            double norm_sq = 0.0;
            for (int i = 0; i < N; ++i) {
                const double tol =
                    options_.rtol *
                    (weights_[i] + std::max(std::abs(y_[i]), std::abs(y_new[i])));
                const double r = err[i] / tol;
                norm_sq += r * r;
            }
            const double err_norm = std::sqrt(norm_sq / N);
            const double factor =
                0.9 * std::pow(std::max(err_norm, 1e-10), -0.2);

            if (err_norm <= 1.0) {
                t_ += h;
                y_ = y_new;
                k1_ = k7; // FSAL
                ++accepted_;
                h_ = h * std::min(factor, 5.0);
                if (on_step) on_step(t_, y_);
                return;
            }
            h *= std::max(factor, 0.2);
            if (!(h > std::abs(t_) * 1e-15 + 1e-300)) {
                throw Error(ErrorKind::IntegratorFailure,
                            "step size collapsed at t = " + std::to_string(t_));
            }
            (void)t_end;
        }
    }

    // Dormand-Prince tableau.
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    Rhs rhs_;
    double t_;
    StateVec<N> y_;
    StateVec<N> weights_;
    OdeOptions options_;
    StateVec<N> k1_;
    double h_ = 0.0;
    std::int64_t accepted_ = 0;
    std::int64_t attempts_ = 0;
};

} // namespace omit
