#pragma once

// Reference solver for
//
//   i eps d/dt psi = -eps^2/2 Lap psi + V(q) psi,   psi : R^2 -> C^3,
//
// on a periodic square grid by Strang splitting: exact Fourier kinetic
// steps around a pointwise closed-form exp(-i dt V / eps).

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pjt/populations.hpp"
#include "pjt/types.hpp"

namespace pjt {

// Nodes x_j = -L + j dx, j = 0..N-1, dx = 2L/N; both axes alike.
// q = 0 is the node j = N/2.
struct Grid2D {
    double half_width = 3.0;
    int n = 512;

    double dx() const { return 2.0 * half_width / n; }
    double x(int j) const { return -half_width + j * dx(); }
    // Angular wavenumber of FFT bin j: pi m / L with m in [-N/2, N/2).
    double k(int j) const;
    std::size_t points() const { return static_cast<std::size_t>(n) * static_cast<std::size_t>(n); }
    void validate() const;
};

// Component-major storage: value c at node (j, k), i.e. at q = (x_j, x_k),
// lives at data[c N^2 + j N + k].
class WaveField {
  public:
    WaveField() = default;
    explicit WaveField(const Grid2D &grid);

    const Grid2D &grid() const { return grid_; }
    Complex *data() { return data_.data(); }
    const Complex *data() const { return data_.data(); }
    Complex &operator()(int c, int j, int k) { return data_[offset(c, j, k)]; }
    const Complex &operator()(int c, int j, int k) const { return data_[offset(c, j, k)]; }
    Vector3C at(int j, int k) const;
    void set(int j, int k, const Vector3C &v);

    // dx^2 sum |psi|^2
    double norm_sq() const;
    void scale(double s);

  private:
    std::size_t offset(int c, int j, int k) const {
        return static_cast<std::size_t>(c) * grid_.points() + static_cast<std::size_t>(j) * grid_.n +
               static_cast<std::size_t>(k);
    }

    Grid2D grid_;
    std::vector<Complex> data_;
};

struct GaussianPacket {
    Vec2 q0;
    Vec2 p0;
    double epsilon = 0.01;
    Mode mode = Mode::Plus;
};

// (eps pi)^{-1/2} exp(-|q-q0|^2/(2 eps) + i p0.(q-q0)/eps) e_mode(q), with the
// eigenvector gauge fixed by a reference at q0, renormalized to unit norm.
// Throws BoxTooSmall if more than 1e-10 of the mass lies outside the box.
WaveField init_gaussian(const Grid2D &grid, const GaussianPacket &packet);

// exp(-i tau V(q)) = I - i tau sinc(tau|q|) V - tau^2/2 sinc(tau|q|/2)^2 V^2;
// exact and smooth at q = 0.
Matrix3C potential_propagator(const Vec2 &q, double tau);

// Mode populations dx^2 sum |P_l(q) psi|^2. Nodes within singular_tol of
// q = 0 use the projectors of direction (1, 0).
std::array<double, 3> populations(const WaveField &field);

// Owns the FFT plans and the precomputed multipliers for one (grid, eps, dt).
class SplitStepPropagator {
  public:
    SplitStepPropagator(const Grid2D &grid, double epsilon, double dt);
    ~SplitStepPropagator();
    SplitStepPropagator(const SplitStepPropagator &) = delete;
    SplitStepPropagator &operator=(const SplitStepPropagator &) = delete;

    double dt() const { return dt_; }
    // Recomputes the multipliers for a new step; the plans are kept.
    void set_dt(double dt);

    // Fourier multiplier exp(-i h eps |k|^2 / 2).
    void kinetic_step(WaveField &field, double h) const;
    void kinetic_half_step(WaveField &field) const { kinetic_step(field, 0.5 * dt_); }
    void potential_step(WaveField &field) const;
    // Kinetic half, potential, kinetic half.
    void strang_step(WaveField &field) const;
    // n Strang steps with the adjacent kinetic halves fused.
    void advance(WaveField &field, long n_steps) const;

    bool potential_enabled = true;

  private:
    void apply_multiplier(WaveField &field, const std::vector<Complex> &mult) const;

    Grid2D grid_;
    double epsilon_;
    double dt_;
    std::vector<double> k_sq_;
    std::vector<Complex> half_;   // includes the 1/N^2 of the inverse FFT
    std::vector<Complex> full_;
    // exp(-i dt V/eps) = I + a V + b V^2 pointwise, a = i*a_im[j], b real.
    std::vector<double> a_im_;
    std::vector<double> b_;
    struct Plans;
    std::unique_ptr<Plans> plans_;
};

// One-shot wrappers over a temporary propagator.
void kinetic_half_step(WaveField &field, double dt, double epsilon);
void potential_step(WaveField &field, double dt, double epsilon);

struct SplitStepConfig {
    Grid2D grid;
    GaussianPacket packet;
    double dt = 2.5e-4;
    std::vector<double> t_grid;        // output times, strictly increasing from 0
    bool potential = true;             // false: free Schrodinger flow
    std::optional<std::string> dump_path;
};

void validate(const SplitStepConfig &cfg);

// Each output interval is covered by ceil(dt_k / dt) equal steps.
PopulationSeries run_grid(const SplitStepConfig &cfg, std::vector<double> *norms = nullptr);

// Appends one snapshot of sum_c |psi_c|^2: uint64 N, float64 L, float64 t,
// then N^2 float64 row-major, little-endian.
void dump_density(const std::string &path, const WaveField &field, double t, bool append);

} // namespace pjt
