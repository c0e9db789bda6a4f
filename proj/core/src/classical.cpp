#include "pjt/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pjt/ode.hpp"

namespace pjt {

namespace {

using State4 = Eigen::Vector4d;

State4 pack(const PhaseState &s) { return {s.q.x, s.q.y, s.p.x, s.p.y}; }

PhaseState unpack(const State4 &y, double t, Mode m) { return {{y(0), y(1)}, {y(2), y(3)}, t, m}; }

struct Force {
    double ell;
    double q_floor;

    State4 operator()(double, const State4 &y) const {
        State4 dy;
        dy(0) = y(2);
        dy(1) = y(3);
        if (ell == 0.0) {
            dy(2) = 0.0;
            dy(3) = 0.0;
            return dy;
        }
        const double r = std::hypot(y(0), y(1));
        if (r < q_floor) {
            throw SingularityReached("trajectory reached the gap q = 0 (|q| = " + std::to_string(r) + ")");
        }
        dy(2) = -ell * y(0) / r;
        dy(3) = -ell * y(1) / r;
        return dy;
    }
};

// The force direction turns on the time scale |q|/|p| near the gap.
struct GapCap {
    double fraction;
    double q_floor;
    bool active;

    double operator()(double, const State4 &y) const {
        if (!active) return std::numeric_limits<double>::infinity();
        const double r = std::max(std::hypot(y(0), y(1)), q_floor);
        const double v = std::max(std::hypot(y(2), y(3)), 1e-300);
        return fraction * r / v + 1e-14;
    }
};

using Stepper = Dopri5<State4, Force, GapCap>;

Stepper make_stepper(const PhaseState &s, const IntegratorSettings &settings) {
    OdeSettings ode;
    ode.rtol = settings.tol;
    ode.atol = settings.tol;
    ode.h_init = settings.h_init;
    const double l = ell(s.mode);
    Stepper stepper(Force{l, settings.q_floor}, ode, GapCap{settings.gap_step_fraction, settings.q_floor, l != 0.0});
    stepper.reset(s.t, pack(s));
    return stepper;
}

double radial(const State4 &y) { return y(0) * y(2) + y(1) * y(3); }

} // namespace

double energy(const PhaseState &s) { return 0.5 * dot(s.p, s.p) + ell(s.mode) * norm(s.q); }

double wedge_invariant(const PhaseState &s) { return wedge(s.q, s.p); }

double radial_product(const PhaseState &s) { return dot(s.q, s.p); }

double gap_momentum(const PhaseState &s) {
    const double two_e = 2.0 * energy(s);
    return two_e > 0.0 ? std::sqrt(two_e) : 0.0;
}

PhaseState free_flight(const PhaseState &s, double t_end) {
    const double dt = t_end - s.t;
    return {s.q + dt * s.p, s.p, t_end, s.mode};
}

PhaseState integrate(const PhaseState &s, double t_end, const IntegratorSettings &settings) {
    if (!std::isfinite(t_end)) throw OutOfRange("integration end time must be finite");
    if (t_end == s.t) return s;
    Stepper stepper = make_stepper(s, settings);
    stepper.integrate_to(t_end);
    return unpack(stepper.y(), t_end, s.mode);
}

Passage propagate_to_crossing(const PhaseState &s, double t_end, const IntegratorSettings &settings) {
    if (!std::isfinite(t_end)) throw OutOfRange("integration end time must be finite");
    if (t_end <= s.t) return {s, std::nullopt};

    Stepper stepper = make_stepper(s, settings);
    double t_a = stepper.t();
    State4 y_a = stepper.y();
    while (stepper.t() < t_end) {
        stepper.advance(t_end);
        const State4 &y_b = stepper.y();
        if (radial(y_a) < 0.0 && radial(y_b) >= 0.0) {
            // Bisect, re-integrating from the left bracket each time.
            double lo = t_a;
            double hi = stepper.t();
            State4 y_lo = y_a;
            State4 y_hi = y_b;
            while (hi - lo > settings.event_tol) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                Stepper probe = make_stepper(unpack(y_lo, lo, s.mode), settings);
                probe.integrate_to(mid);
                if (radial(probe.y()) < 0.0) {
                    lo = mid;
                    y_lo = probe.y();
                } else {
                    hi = mid;
                    y_hi = probe.y();
                }
            }
            CrossingEvent ev;
            ev.t_star = hi;
            ev.state = unpack(y_hi, hi, s.mode);
            ev.eta = wedge_invariant(ev.state);
            ev.p_local = norm(ev.state.p);
            ev.p_norm = gap_momentum(ev.state);
            return {ev.state, ev};
        }
        t_a = stepper.t();
        y_a = y_b;
    }
    return {unpack(stepper.y(), t_end, s.mode), std::nullopt};
}

std::optional<CrossingEvent> detect_crossing(const PhaseState &s, double t_end, const IntegratorSettings &settings) {
    return propagate_to_crossing(s, t_end, settings).event;
}

std::vector<PhaseState> trace(const PhaseState &s, double t_end, int n_samples, const IntegratorSettings &settings) {
    if (n_samples < 1) throw OutOfRange("trace needs at least one sample interval");
    std::vector<PhaseState> out;
    out.reserve(static_cast<std::size_t>(n_samples) + 1);
    out.push_back(s);
    Stepper stepper = make_stepper(s, settings);
    for (int i = 1; i <= n_samples; ++i) {
        const double t = s.t + (t_end - s.t) * static_cast<double>(i) / n_samples;
        stepper.integrate_to(t);
        out.push_back(unpack(stepper.y(), t, s.mode));
    }
    return out;
}

} // namespace pjt
