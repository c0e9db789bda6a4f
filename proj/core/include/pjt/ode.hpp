#pragma once

// Adaptive Dormand-Prince 5(4) stepper with FSAL, PI step-size control and
// an optional caller-supplied step cap. State is any fixed-size Eigen column
// vector (real or complex).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>

#include "pjt/types.hpp"

namespace pjt {

struct OdeSettings {
    double rtol = 1e-12;
    double atol = 1e-12;
    double h_init = 1e-3;
    double h_max = std::numeric_limits<double>::infinity();
    double h_min = 1e-14;
    std::size_t max_steps = 50'000'000;
};

struct NoStepCap {
    template <class State>
    double operator()(double, const State &) const {
        return std::numeric_limits<double>::infinity();
    }
};

template <class State, class Rhs, class Cap = NoStepCap>
class Dopri5 {
  public:
    Dopri5(Rhs rhs, OdeSettings settings, Cap cap = {})
        : rhs_(std::move(rhs)), cap_(std::move(cap)), settings_(settings), h_(settings.h_init) {}

    void reset(double t, const State &y) {
        t_ = t;
        y_ = y;
        f_ = rhs_(t_, y_);
        steps_ = 0;
    }

    double t() const { return t_; }
    const State &y() const { return y_; }
    std::size_t steps() const { return steps_; }
    double step_size() const { return h_; }

    // Take one accepted step towards t_target (forward or backward) without
    // overshooting it. Returns the signed size of the accepted step.
    double advance(double t_target) {
        const double dir = t_target >= t_ ? 1.0 : -1.0;
        const double remaining = std::abs(t_target - t_);
        if (remaining == 0.0) return 0.0;
        for (;;) {
            double h = std::min({h_, settings_.h_max, cap_(t_, y_), remaining});
            const bool last = h >= remaining;
            if (last) h = remaining;
            if (h < settings_.h_min && !last) {
                throw ToleranceNotMet("step size underflow at t = " + std::to_string(t_));
            }
            if (++steps_ > settings_.max_steps) {
                throw ToleranceNotMet("maximum number of steps exceeded at t = " + std::to_string(t_));
            }
            const double hs = dir * h;
            State y_new;
            State f_new;
            const double err = try_step(hs, y_new, f_new);
            if (err <= 1.0) {
                t_ = last ? t_target : t_ + hs;
                y_ = y_new;
                f_ = f_new;
                // PI controller (Hairer, Norsett & Wanner, II.4)
                double fac = err == 0.0 ? 5.0
                                        : 0.9 * std::pow(err, -0.7 / 5.0) * std::pow(err_prev_, 0.4 / 5.0);
                fac = std::clamp(fac, 0.2, 5.0);
                err_prev_ = std::max(err, 1e-4);
                // Do not let a short final step shrink the next trial.
                h_ = last ? std::max(h_, h * fac) : h * fac;
                return hs;
            }
            h_ = h * std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
    }

    void integrate_to(double t_end) {
        while (t_ != t_end) advance(t_end);
    }

  private:
    double try_step(double h, State &y_new, State &f_new) {
        // Dormand & Prince (1980) tableau.
        constexpr double a21 = 1.0 / 5.0;
        constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
        constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
        constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                         a54 = -212.0 / 729.0;
        constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                         a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
        constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                         b6 = 11.0 / 84.0;
        constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                         e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
        constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

        const State &k1 = f_;
        const State k2 = rhs_(t_ + c2 * h, State(y_ + h * (a21 * k1)));
        const State k3 = rhs_(t_ + c3 * h, State(y_ + h * (a31 * k1 + a32 * k2)));
        const State k4 = rhs_(t_ + c4 * h, State(y_ + h * (a41 * k1 + a42 * k2 + a43 * k3)));
        const State k5 = rhs_(t_ + c5 * h, State(y_ + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
        const State k6 =
            rhs_(t_ + h, State(y_ + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
        y_new = y_ + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        f_new = rhs_(t_ + h, y_new);
        const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * f_new);

        double acc = 0.0;
        for (Eigen::Index i = 0; i < err.size(); ++i) {
            const double scale =
                settings_.atol + settings_.rtol * std::max(std::abs(y_(i)), std::abs(y_new(i)));
            const double r = std::abs(err(i)) / scale;
            acc = std::max(acc, r);
        }
        if (!std::isfinite(acc)) return 1e10;
        return acc;
    }

    Rhs rhs_;
    Cap cap_;
    OdeSettings settings_;
    double t_ = 0.0;
    State y_ = State::Zero();
    State f_ = State::Zero();
    double h_;
    double err_prev_ = 1e-4;
    std::size_t steps_ = 0;
};

} // namespace pjt
