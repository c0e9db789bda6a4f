#pragma once

// Surface hopping by weight splitting. Particles sampled from the Wigner
// transform of the Gaussian initial state follow the classical flow of their
// level; at every local minimum of |q| a particle is replaced by three
// children, one per level, carrying the parent weight times the matching
// column of the branching matrix.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "pjt/classical.hpp"
#include "pjt/populations.hpp"
#include "pjt/types.hpp"

namespace pjt {

struct Particle {
    PhaseState state;
    double weight = 0.0;
    bool armed = false; // approaching the gap; cleared on split
};

// Which momentum enters the transition coefficient at a hop.
//  Gap:   |p| the trajectory has on the gap at its energy, sqrt(2E).
//  Local: |p(t*)| at the minimum of |q|.
enum class HopMomentum { Gap, Local };

struct HoppingConfig {
    double epsilon = 0.01;
    int n_particles = 20000;
    std::uint64_t seed = 1;
    double weight_floor = 1e-8;
    std::vector<double> t_grid;
    Vec2 q0;
    Vec2 p0;
    Mode initial_mode = Mode::Plus;
    HopMomentum momentum = HopMomentum::Gap;
    // Forces T* to this value at every hop when set (T = 0 gives pure transport).
    std::optional<double> fixed_transition;
    IntegratorSettings integrator;
    int threads = 0; // 0: hardware concurrency
};

void validate(const HoppingConfig &cfg);

// Generator for particle `id`; streams are independent of each other and of
// the order in which particles are processed.
std::mt19937_64 particle_stream(std::uint64_t seed, std::uint64_t id);

std::vector<Particle> sample_initial_ensemble(const HoppingConfig &cfg);

// T* = exp(-pi eta^2 / (2 eps p^3)).
double hop_transition(double eta, double p_norm, double epsilon);

// Children for (+, -, 0) at the event point, all disarmed.
std::array<Particle, 3> hop_split(const Particle &part, const CrossingEvent &event, double epsilon,
                                  HopMomentum momentum = HopMomentum::Gap);
std::array<Particle, 3> split_with(const Particle &part, const CrossingEvent &event, double transition);

PopulationSeries run(const HoppingConfig &cfg);

} // namespace pjt
