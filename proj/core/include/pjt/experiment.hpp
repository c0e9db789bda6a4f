#pragma once

#include <array>
#include <ostream>
#include <string>
#include <vector>

#include "pjt/classical.hpp"
#include "pjt/config.hpp"
#include "pjt/populations.hpp"

namespace pjt {

inline constexpr const char *kPopulationHeader = "method,t,n_plus,n_minus,n_zero,total";

void write_population_header(std::ostream &out);
void write_population_row(std::ostream &out, const std::string &method, double t, const std::array<double, 3> &n);
// Rows of one series, or of two series interleaved per output time.
void write_populations(std::ostream &out, const std::string &method, const PopulationSeries &series);
void write_populations(std::ostream &out, const std::string &method_a, const PopulationSeries &a,
                       const std::string &method_b, const PopulationSeries &b);

inline constexpr const char *kTrajectoryHeader = "t,q1,q2,p1,p2,energy,eta";
void write_trajectory(std::ostream &out, const std::vector<PhaseState> &samples);

// Runs the configured method and writes its CSV to `out`. Returns the
// process exit status (non-zero only for failed verification).
int run_experiment(const ExperimentConfig &cfg, std::ostream &out);

} // namespace pjt
