#pragma once

// Classical trajectories of the three adiabatic levels,
//   dq/dt = p,   dp/dt = -ell q/|q|,
// i.e. the Hamiltonian flow of E = |p|^2/2 + ell |q|, and detection of the
// passages closest to the gap {q = 0}.

#include <optional>
#include <vector>

#include "pjt/types.hpp"

namespace pjt {

struct PhaseState {
    Vec2 q;
    Vec2 p;
    double t = 0.0;
    Mode mode = Mode::Plus;
};

struct IntegratorSettings {
    double tol = 1e-12;        // relative and absolute local error tolerance
    double q_floor = 1e-9;     // closer than this to q = 0 is a hit on the gap
    double event_tol = 1e-10;  // time resolution of crossing events
    double h_init = 1e-3;
    double gap_step_fraction = 0.25; // max step as a fraction of |q|/|p| for +- modes
};

struct CrossingEvent {
    double t_star = 0.0;
    PhaseState state;      // at the minimum of |q|
    double eta = 0.0;      // q ^ p
    double p_norm = 0.0;   // |p| at the gap for the event's energy, sqrt(2E)
    double p_local = 0.0;  // |p(t_star)|
};

double energy(const PhaseState &s);
double wedge_invariant(const PhaseState &s);
// q . p, the sign of d|q|/dt.
double radial_product(const PhaseState &s);

// Momentum magnitude the trajectory would have on the gap q = 0,
// sqrt(2E). Returns 0 when the energy shell does not reach the gap.
double gap_momentum(const PhaseState &s);

PhaseState integrate(const PhaseState &s, double t_end, const IntegratorSettings &settings = {});

// First local minimum of |q| in (s.t, t_end], i.e. the first sign change of
// q.p from negative to non-negative, located by bisection to event_tol.
std::optional<CrossingEvent> detect_crossing(const PhaseState &s, double t_end,
                                             const IntegratorSettings &settings = {});

struct Passage {
    PhaseState state;                   // at the event, or at t_end if none
    std::optional<CrossingEvent> event;
};

// detect_crossing that also reports where the state ends up.
Passage propagate_to_crossing(const PhaseState &s, double t_end, const IntegratorSettings &settings = {});

// Closed-form free flight for the Zero mode.
PhaseState free_flight(const PhaseState &s, double t_end);

// Samples of the trajectory at n+1 evenly spaced times in [s.t, t_end].
std::vector<PhaseState> trace(const PhaseState &s, double t_end, int n_samples,
                              const IntegratorSettings &settings = {});

} // namespace pjt
