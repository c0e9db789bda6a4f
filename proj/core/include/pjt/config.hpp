#pragma once

// Experiment configuration: a flat key = value file with [sections].
//
//   [experiment]   method, epsilon, q0_scaled, p0, t_final, n_outputs, mode,
//                  seed, output
//   [hopping]      n_particles, weight_floor, momentum, threads, tol,
//                  event_tol, q_floor
//   [grid]         half_width, points, dt, dump
//   [scattering]   z, s_max
//
// Vectors are written "x, y". Numbers may also be written as multiples of
// pi ("pi/4", "3*pi/2"). Lines starting with '#' or ';' are comments.

#include <cstdint>
#include <string>
#include <vector>

#include "pjt/classical.hpp"
#include "pjt/grid.hpp"
#include "pjt/hopping.hpp"
#include "pjt/types.hpp"

namespace pjt {

class SchemaError : public Error {
  public:
    explicit SchemaError(std::vector<std::string> violations);
    const std::vector<std::string> &violations() const { return violations_; }

  private:
    std::vector<std::string> violations_;
};

enum class Method { Hopping, Grid, Both, VerifyScattering, Trajectory };

const char *to_string(Method m);

struct HoppingBlock {
    int n_particles = 20000;
    double weight_floor = 1e-8;
    HopMomentum momentum = HopMomentum::Gap;
    int threads = 0;
    IntegratorSettings integrator;
};

struct GridBlock {
    double half_width = 3.0;
    int points = 512;
    double dt = 2.5e-4;
    std::string dump; // empty: no density dump
};

struct ScatteringBlock {
    Complex z{1.0, 0.0};
    double s_max = 200.0;
};

struct ExperimentConfig {
    Method method = Method::Both;
    double epsilon = 0.01;
    Vec2 q0_scaled;          // q0 = sqrt(epsilon) * q0_scaled
    Vec2 p0;
    double t_final = 0.0;
    int n_outputs = 40;      // output times k t_final / n_outputs, k = 0..n_outputs
    Mode mode = Mode::Plus;
    std::uint64_t seed = 1;
    std::string output;      // empty or "-": standard output
    HoppingBlock hopping;
    GridBlock grid;
    ScatteringBlock scattering;

    Vec2 q0() const;
    std::vector<double> output_times() const;
    HoppingConfig hopping_config() const;
    SplitStepConfig grid_config() const;
};

// Throws SchemaError listing every violation found.
ExperimentConfig parse_config(const std::string &text);
ExperimentConfig load_config(const std::string &path);

// Canonical text: every key, fixed order, 17 significant digits.
std::string serialize(const ExperimentConfig &cfg);

// "%.17g", the float format of all CSV and config output.
std::string format_real(double x);

} // namespace pjt
