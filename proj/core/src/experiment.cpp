#include "pjt/experiment.hpp"

#include "pjt/grid.hpp"
#include "pjt/hopping.hpp"
#include "pjt/verify.hpp"

namespace pjt {

void write_population_header(std::ostream &out) { out << kPopulationHeader << '\n'; }

void write_population_row(std::ostream &out, const std::string &method, double t, const std::array<double, 3> &n) {
    out << method << ',' << format_real(t) << ',' << format_real(n[0]) << ',' << format_real(n[1]) << ','
        << format_real(n[2]) << ',' << format_real(n[0] + n[1] + n[2]) << '\n';
}

void write_populations(std::ostream &out, const std::string &method, const PopulationSeries &series) {
    write_population_header(out);
    for (std::size_t k = 0; k < series.size(); ++k) write_population_row(out, method, series.t[k], series.n[k]);
}

void write_populations(std::ostream &out, const std::string &method_a, const PopulationSeries &a,
                       const std::string &method_b, const PopulationSeries &b) {
    if (a.t != b.t) throw Error("interleaved population series need a shared time grid");
    write_population_header(out);
    for (std::size_t k = 0; k < a.size(); ++k) {
        write_population_row(out, method_a, a.t[k], a.n[k]);
        write_population_row(out, method_b, b.t[k], b.n[k]);
    }
}

void write_trajectory(std::ostream &out, const std::vector<PhaseState> &samples) {
    out << kTrajectoryHeader << '\n';
    for (const PhaseState &s : samples) {
        out << format_real(s.t) << ',' << format_real(s.q.x) << ',' << format_real(s.q.y) << ','
            << format_real(s.p.x) << ',' << format_real(s.p.y) << ',' << format_real(energy(s)) << ','
            << format_real(wedge_invariant(s)) << '\n';
    }
}

int run_experiment(const ExperimentConfig &cfg, std::ostream &out) {
    switch (cfg.method) {
    case Method::Hopping:
        write_populations(out, "hopping", run(cfg.hopping_config()));
        return 0;
    case Method::Grid:
        write_populations(out, "grid", run_grid(cfg.grid_config()));
        return 0;
    case Method::Both: {
        const PopulationSeries hop = run(cfg.hopping_config());
        const PopulationSeries grid = run_grid(cfg.grid_config());
        write_populations(out, "hopping", hop, "grid", grid);
        return 0;
    }
    case Method::Trajectory: {
        const PhaseState start{cfg.q0(), cfg.p0, 0.0, cfg.mode};
        write_trajectory(out, trace(start, cfg.t_final, cfg.n_outputs, cfg.hopping.integrator));
        return 0;
    }
    case Method::VerifyScattering: {
        ScatteringSettings settings;
        settings.s_max = cfg.scattering.s_max;
        const Report report = verify_scattering(cfg.scattering.z, settings);
        report.print(out);
        return report.ok() ? 0 : 1;
    }
    }
    return 1;
}

} // namespace pjt
