#include "pjt/hopping.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

#include "pjt/model.hpp"

namespace pjt {

namespace {

constexpr double kMomentumTol = 1e-12;

struct RootTally {
    std::vector<std::array<double, 3>> n;
    std::vector<double> pruned;
    std::vector<std::size_t> count;
};

void tally(const std::vector<Particle> &live, std::array<double, 3> &n) {
    n = {0.0, 0.0, 0.0};
    for (const Particle &p : live) n[index(p.state.mode)] += p.weight;
}

double event_momentum(const CrossingEvent &ev, HopMomentum rule) {
    return rule == HopMomentum::Gap ? ev.p_norm : ev.p_local;
}

RootTally simulate_root(const Particle &root, const HoppingConfig &cfg) {
    const std::size_t k_out = cfg.t_grid.size();
    RootTally out;
    out.n.resize(k_out);
    out.pruned.assign(k_out, 0.0);
    out.count.assign(k_out, 0);

    std::vector<Particle> live{root};
    std::vector<Particle> work;
    std::vector<Particle> next;
    double pruned = 0.0;
    tally(live, out.n[0]);
    out.count[0] = live.size();

    for (std::size_t k = 1; k < k_out; ++k) {
        const double t_out = cfg.t_grid[k];
        work.assign(live.rbegin(), live.rend());
        next.clear();
        while (!work.empty()) {
            Particle p = work.back();
            work.pop_back();
            const Passage passage = propagate_to_crossing(p.state, t_out, cfg.integrator);
            if (!passage.event) {
                p.state = passage.state;
                p.armed = radial_product(p.state) < 0.0;
                next.push_back(p);
                continue;
            }
            const CrossingEvent &ev = *passage.event;
            double transition = 0.0;
            if (cfg.fixed_transition) {
                transition = *cfg.fixed_transition;
            } else {
                // A level whose energy shell misses the gap transfers nothing.
                const double pm = event_momentum(ev, cfg.momentum);
                transition = pm > kMomentumTol ? hop_transition(ev.eta, pm, cfg.epsilon) : 0.0;
            }
            const auto children = split_with(p, ev, transition);
            // Push in reverse so the children are processed in (+, -, 0) order.
            for (auto it = children.rbegin(); it != children.rend(); ++it) {
                if (it->weight < cfg.weight_floor) {
                    pruned += it->weight;
                } else {
                    work.push_back(*it);
                }
            }
        }
        live.swap(next);
        tally(live, out.n[k]);
        out.pruned[k] = pruned;
        out.count[k] = live.size();
    }
    return out;
}

} // namespace

void validate(const HoppingConfig &cfg) {
    if (!(cfg.epsilon > 0.0)) throw OutOfRange("epsilon must be positive");
    if (cfg.n_particles <= 0) throw OutOfRange("n_particles must be positive");
    if (!(cfg.weight_floor >= 0.0)) throw OutOfRange("weight_floor must be non-negative");
    if (cfg.t_grid.empty() || cfg.t_grid.front() != 0.0) throw OutOfRange("t_grid must start at 0");
    for (std::size_t k = 1; k < cfg.t_grid.size(); ++k) {
        if (!(cfg.t_grid[k] > cfg.t_grid[k - 1])) throw OutOfRange("t_grid must be strictly increasing");
    }
    if (cfg.fixed_transition && !(*cfg.fixed_transition >= 0.0 && *cfg.fixed_transition <= 1.0)) {
        throw OutOfRange("fixed transition must lie in [0, 1]");
    }
}

std::mt19937_64 particle_stream(std::uint64_t seed, std::uint64_t id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32), 0x9e3779b9u};
    return std::mt19937_64(seq);
}

std::vector<Particle> sample_initial_ensemble(const HoppingConfig &cfg) {
    validate(cfg);
    const double sigma = std::sqrt(cfg.epsilon / 2.0);
    const double w = 1.0 / cfg.n_particles;
    std::vector<Particle> ensemble;
    ensemble.reserve(static_cast<std::size_t>(cfg.n_particles));
    for (int i = 0; i < cfg.n_particles; ++i) {
        auto rng = particle_stream(cfg.seed, static_cast<std::uint64_t>(i));
        std::normal_distribution<double> normal(0.0, sigma);
        Particle p;
        p.state.q = {cfg.q0.x + normal(rng), cfg.q0.y + normal(rng)};
        p.state.p = {cfg.p0.x + normal(rng), cfg.p0.y + normal(rng)};
        p.state.t = 0.0;
        p.state.mode = cfg.initial_mode;
        p.weight = w;
        p.armed = radial_product(p.state) < 0.0;
        ensemble.push_back(p);
    }
    return ensemble;
}

double hop_transition(double eta, double p_norm, double epsilon) {
    if (!(p_norm > kMomentumTol)) throw ZeroMomentum("hop requires a non-zero momentum at the gap");
    return std::exp(-std::numbers::pi * eta * eta / (2.0 * epsilon * p_norm * p_norm * p_norm));
}

std::array<Particle, 3> split_with(const Particle &part, const CrossingEvent &event, double transition) {
    const Matrix3 b = branching_matrix(transition);
    const int in = index(part.state.mode);
    std::array<Particle, 3> children;
    for (Mode m : kModes) {
        Particle &c = children[static_cast<std::size_t>(index(m))];
        c.state = event.state;
        c.state.mode = m;
        c.weight = part.weight * b(index(m), in);
        c.armed = false;
    }
    return children;
}

std::array<Particle, 3> hop_split(const Particle &part, const CrossingEvent &event, double epsilon,
                                  HopMomentum momentum) {
    return split_with(part, event, hop_transition(event.eta, event_momentum(event, momentum), epsilon));
}

PopulationSeries run(const HoppingConfig &cfg) {
    const std::vector<Particle> roots = sample_initial_ensemble(cfg);
    std::vector<RootTally> tallies(roots.size());

    unsigned n_threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
    n_threads = std::clamp(n_threads, 1u, static_cast<unsigned>(roots.size()));

    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= roots.size()) return;
            try {
                tallies[i] = simulate_root(roots[i], cfg);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                cursor.store(roots.size());
                return;
            }
        }
    };
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    // Reduce in particle order so the result does not depend on scheduling.
    PopulationSeries series;
    const std::size_t k_out = cfg.t_grid.size();
    series.t = cfg.t_grid;
    series.n.assign(k_out, {0.0, 0.0, 0.0});
    series.pruned.assign(k_out, 0.0);
    series.particles.assign(k_out, 0);
    for (const RootTally &r : tallies) {
        for (std::size_t k = 0; k < k_out; ++k) {
            for (int l = 0; l < 3; ++l) series.n[k][l] += r.n[k][l];
            series.pruned[k] += r.pruned[k];
            series.particles[k] += r.count[k];
        }
    }
    return series;
}

} // namespace pjt
