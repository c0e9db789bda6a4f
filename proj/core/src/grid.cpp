#include "pjt/grid.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "pjt/model.hpp"

namespace pjt {

namespace {

using std::numbers::pi;
using std::numbers::sqrt2;

// The FFTW planner is not thread safe.
std::mutex &planner_mutex() {
    static std::mutex m;
    return m;
}

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

// V psi at q, without forming V.
inline void apply_v(double q1, double c, const Complex &a, const Complex &b, const Complex &z, Complex &va,
                    Complex &vb, Complex &vz) {
    va = q1 * a + c * z;
    vb = -q1 * b + c * z;
    vz = c * (a + b);
}

// Mass of the (eps pi)^{-1} exp(-|q-q0|^2/eps) density outside [-L, L]^2.
double mass_outside(const Grid2D &grid, const Vec2 &q0, double epsilon) {
    const double s = std::sqrt(epsilon);
    const double L = grid.half_width;
    auto outside = [&](double c) { return 0.5 * std::erfc((L - c) / s) + 0.5 * std::erfc((L + c) / s); };
    const double ox = outside(q0.x);
    const double oy = outside(q0.y);
    return ox + oy - ox * oy;
}

// Eigenvector in the gauge of `reference`; where the reference is (nearly)
// orthogonal to the eigenspace the packet amplitude is negligible, so any
// unit vector of the eigenspace will do.
Vector3 lenient_eigenvector(const Vec2 &q, Mode m, const Vector3 &reference) {
    const Vec2 dir = norm(q) <= singular_tol(q) ? Vec2{1.0, 0.0} : q;
    try {
        return eigenvector(dir, m, reference);
    } catch (const DegenerateReference &) {
    }
    for (int i = 0; i < 3; ++i) {
        try {
            return eigenvector(dir, m, Vector3::Unit(i));
        } catch (const DegenerateReference &) {
        }
    }
    throw DegenerateReference("no eigenvector found");
}

} // namespace

double Grid2D::k(int j) const {
    const int m = j < n / 2 ? j : j - n;
    return pi * m / half_width;
}

void Grid2D::validate() const {
    if (!(half_width > 0.0)) throw OutOfRange("grid half_width must be positive");
    if (n < 2 || !std::has_single_bit(static_cast<unsigned>(n))) {
        throw OutOfRange("grid points per axis must be a power of two >= 2, got " + std::to_string(n));
    }
}

WaveField::WaveField(const Grid2D &grid) : grid_(grid), data_(3 * grid.points(), Complex(0.0, 0.0)) {
    grid_.validate();
}

Vector3C WaveField::at(int j, int k) const { return {(*this)(0, j, k), (*this)(1, j, k), (*this)(2, j, k)}; }

void WaveField::set(int j, int k, const Vector3C &v) {
    for (int c = 0; c < 3; ++c) (*this)(c, j, k) = v(c);
}

double WaveField::norm_sq() const {
    double sum = 0.0;
    for (const Complex &z : data_) sum += std::norm(z);
    const double dx = grid_.dx();
    return sum * dx * dx;
}

void WaveField::scale(double s) {
    for (Complex &z : data_) z *= s;
}

WaveField init_gaussian(const Grid2D &grid, const GaussianPacket &packet) {
    grid.validate();
    if (!(packet.epsilon > 0.0)) throw OutOfRange("epsilon must be positive");
    const double outside = mass_outside(grid, packet.q0, packet.epsilon);
    if (outside > 1e-10) {
        throw BoxTooSmall("initial packet leaves mass " + std::to_string(outside) + " outside the box");
    }
    const double eps = packet.epsilon;
    const Vector3 reference = lenient_eigenvector(packet.q0, packet.mode, Vector3::UnitX());
    const double amp = 1.0 / std::sqrt(eps * pi);

    WaveField field(grid);
    for (int j = 0; j < grid.n; ++j) {
        for (int k = 0; k < grid.n; ++k) {
            const Vec2 q{grid.x(j), grid.x(k)};
            const Vec2 d = q - packet.q0;
            const double envelope = amp * std::exp(-dot(d, d) / (2.0 * eps));
            if (envelope == 0.0) continue;
            const Complex scalar = std::polar(envelope, dot(packet.p0, d) / eps);
            field.set(j, k, scalar * lenient_eigenvector(q, packet.mode, reference).cast<Complex>());
        }
    }
    field.scale(1.0 / std::sqrt(field.norm_sq()));
    return field;
}

Matrix3C potential_propagator(const Vec2 &q, double tau) {
    const double r = norm(q);
    const Matrix3 v = potential_matrix(q);
    const double a = -tau * sinc(tau * r);
    const double s = sinc(0.5 * tau * r);
    const double b = -0.5 * tau * tau * s * s;
    Matrix3C u = Matrix3C::Identity();
    u += Complex(0.0, a) * v.cast<Complex>();
    u += b * (v * v).cast<Complex>();
    return u;
}

std::array<double, 3> populations(const WaveField &field) {
    const Grid2D &grid = field.grid();
    std::array<double, 3> n = {0.0, 0.0, 0.0};
    for (int j = 0; j < grid.n; ++j) {
        for (int k = 0; k < grid.n; ++k) {
            Vec2 q{grid.x(j), grid.x(k)};
            double r = norm(q);
            if (r <= singular_tol(q)) {
                q = {1.0, 0.0};
                r = 1.0;
            }
            const double c = q.y / sqrt2;
            const Complex a = field(0, j, k);
            const Complex b = field(1, j, k);
            const Complex z = field(2, j, k);
            Complex va, vb, vz, wa, wb, wz;
            apply_v(q.x, c, a, b, z, va, vb, vz);
            apply_v(q.x, c, va, vb, vz, wa, wb, wz);
            const double inv2 = 1.0 / (2.0 * r * r);
            const double inv1 = 1.0 / (2.0 * r);
            // P+- psi = (V^2 psi +- r V psi) / (2 r^2), P0 psi = psi - V^2 psi / r^2
            n[0] += std::norm(wa * inv2 + va * inv1) + std::norm(wb * inv2 + vb * inv1) +
                    std::norm(wz * inv2 + vz * inv1);
            n[1] += std::norm(wa * inv2 - va * inv1) + std::norm(wb * inv2 - vb * inv1) +
                    std::norm(wz * inv2 - vz * inv1);
            n[2] += std::norm(a - 2.0 * inv2 * wa) + std::norm(b - 2.0 * inv2 * wb) + std::norm(z - 2.0 * inv2 * wz);
        }
    }
    const double dx2 = grid.dx() * grid.dx();
    for (double &x : n) x *= dx2;
    return n;
}

struct SplitStepPropagator::Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

SplitStepPropagator::SplitStepPropagator(const Grid2D &grid, double epsilon, double dt)
    : grid_(grid), epsilon_(epsilon), dt_(dt), plans_(std::make_unique<Plans>()) {
    grid_.validate();
    if (!(epsilon > 0.0)) throw OutOfRange("epsilon must be positive");
    const int n = grid_.n;
    k_sq_.resize(grid_.points());
    for (int j = 0; j < n; ++j) {
        const double kj = grid_.k(j);
        for (int k = 0; k < n; ++k) {
            const double kk = grid_.k(k);
            k_sq_[static_cast<std::size_t>(j) * n + k] = kj * kj + kk * kk;
        }
    }
    set_dt(dt);

    // Three N x N transforms per call; planned on scratch storage and run
    // on the caller's field through the new-array interface.
    WaveField scratch(grid_);
    auto *buf = reinterpret_cast<fftw_complex *>(scratch.data());
    const int dims[2] = {n, n};
    const int dist = n * n;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard lock(planner_mutex());
    plans_->forward = fftw_plan_many_dft(2, dims, 3, buf, nullptr, 1, dist, buf, nullptr, 1, dist, FFTW_FORWARD, flags);
    plans_->backward = fftw_plan_many_dft(2, dims, 3, buf, nullptr, 1, dist, buf, nullptr, 1, dist, FFTW_BACKWARD, flags);
    if (!plans_->forward || !plans_->backward) throw Error("FFTW planning failed");
}

SplitStepPropagator::~SplitStepPropagator() {
    std::lock_guard lock(planner_mutex());
    if (plans_->forward) fftw_destroy_plan(plans_->forward);
    if (plans_->backward) fftw_destroy_plan(plans_->backward);
}

void SplitStepPropagator::set_dt(double dt) {
    if (!(dt > 0.0)) throw OutOfRange("dt must be positive");
    dt_ = dt;
    const double norm = 1.0 / static_cast<double>(grid_.points());
    half_.resize(grid_.points());
    full_.resize(grid_.points());
    for (std::size_t i = 0; i < k_sq_.size(); ++i) {
        const double phase = -0.5 * epsilon_ * k_sq_[i] * dt_;
        half_[i] = std::polar(norm, 0.5 * phase);
        full_[i] = std::polar(norm, phase);
    }

    const double tau = dt_ / epsilon_;
    const int n = grid_.n;
    a_im_.resize(grid_.points());
    b_.resize(grid_.points());
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            const double r = std::hypot(grid_.x(j), grid_.x(k));
            const double s = sinc(0.5 * tau * r);
            const std::size_t i = static_cast<std::size_t>(j) * n + k;
            a_im_[i] = -tau * sinc(tau * r);
            b_[i] = -0.5 * tau * tau * s * s;
        }
    }
}

void SplitStepPropagator::apply_multiplier(WaveField &field, const std::vector<Complex> &mult) const {
    auto *buf = reinterpret_cast<fftw_complex *>(field.data());
    fftw_execute_dft(plans_->forward, buf, buf);
    const std::size_t np = grid_.points();
    Complex *d = field.data();
    for (int c = 0; c < 3; ++c) {
        Complex *comp = d + c * np;
        for (std::size_t i = 0; i < np; ++i) comp[i] *= mult[i];
    }
    fftw_execute_dft(plans_->backward, buf, buf);
}

void SplitStepPropagator::kinetic_step(WaveField &field, double h) const {
    if (h == 0.5 * dt_) {
        apply_multiplier(field, half_);
    } else if (h == dt_) {
        apply_multiplier(field, full_);
    } else {
        const double norm = 1.0 / static_cast<double>(grid_.points());
        std::vector<Complex> mult(grid_.points());
        for (std::size_t i = 0; i < mult.size(); ++i) mult[i] = std::polar(norm, -0.5 * epsilon_ * k_sq_[i] * h);
        apply_multiplier(field, mult);
    }
}

void SplitStepPropagator::potential_step(WaveField &field) const {
    if (!potential_enabled) return;
    const int n = grid_.n;
    const std::size_t np = grid_.points();
    Complex *pa = field.data();
    Complex *pb = pa + np;
    Complex *pz = pb + np;
    const Complex i1(0.0, 1.0);
    for (int j = 0; j < n; ++j) {
        const double q1 = grid_.x(j);
        for (int k = 0; k < n; ++k) {
            const double c = grid_.x(k) / sqrt2;
            const std::size_t i = static_cast<std::size_t>(j) * n + k;
            Complex va, vb, vz, wa, wb, wz;
            apply_v(q1, c, pa[i], pb[i], pz[i], va, vb, vz);
            apply_v(q1, c, va, vb, vz, wa, wb, wz);
            const Complex a = i1 * a_im_[i];
            const double b = b_[i];
            pa[i] += a * va + b * wa;
            pb[i] += a * vb + b * wb;
            pz[i] += a * vz + b * wz;
        }
    }
}

void SplitStepPropagator::strang_step(WaveField &field) const {
    kinetic_half_step(field);
    potential_step(field);
    kinetic_half_step(field);
}

void SplitStepPropagator::advance(WaveField &field, long n_steps) const {
    if (n_steps <= 0) return;
    kinetic_half_step(field);
    for (long s = 0; s < n_steps; ++s) {
        potential_step(field);
        if (s + 1 < n_steps) kinetic_step(field, dt_);
    }
    kinetic_half_step(field);
}

void kinetic_half_step(WaveField &field, double dt, double epsilon) {
    SplitStepPropagator(field.grid(), epsilon, dt).kinetic_half_step(field);
}

void potential_step(WaveField &field, double dt, double epsilon) {
    SplitStepPropagator(field.grid(), epsilon, dt).potential_step(field);
}

void validate(const SplitStepConfig &cfg) {
    cfg.grid.validate();
    if (!(cfg.packet.epsilon > 0.0)) throw OutOfRange("epsilon must be positive");
    if (!(cfg.dt > 0.0)) throw OutOfRange("dt must be positive");
    if (cfg.t_grid.empty() || cfg.t_grid.front() != 0.0) throw OutOfRange("t_grid must start at 0");
    for (std::size_t k = 1; k < cfg.t_grid.size(); ++k) {
        if (!(cfg.t_grid[k] > cfg.t_grid[k - 1])) throw OutOfRange("t_grid must be strictly increasing");
    }
}

PopulationSeries run_grid(const SplitStepConfig &cfg, std::vector<double> *norms) {
    validate(cfg);
    WaveField field = init_gaussian(cfg.grid, cfg.packet);
    SplitStepPropagator prop(cfg.grid, cfg.packet.epsilon, cfg.dt);
    prop.potential_enabled = cfg.potential;

    PopulationSeries series;
    series.t = cfg.t_grid;
    series.n.reserve(cfg.t_grid.size());
    if (norms) norms->clear();
    auto record = [&](double t, bool first) {
        series.n.push_back(populations(field));
        if (norms) norms->push_back(field.norm_sq());
        if (cfg.dump_path) dump_density(*cfg.dump_path, field, t, !first);
    };
    record(0.0, true);
    for (std::size_t k = 1; k < cfg.t_grid.size(); ++k) {
        const double span = cfg.t_grid[k] - cfg.t_grid[k - 1];
        const long steps = static_cast<long>(std::ceil(span / cfg.dt * (1.0 - 1e-12)));
        const double h = span / static_cast<double>(steps);
        if (h != prop.dt()) prop.set_dt(h);
        prop.advance(field, steps);
        record(cfg.t_grid[k], false);
    }
    series.pruned.assign(series.t.size(), 0.0);
    return series;
}

void dump_density(const std::string &path, const WaveField &field, double t, bool append) {
    static_assert(std::endian::native == std::endian::little, "density dumps assume a little-endian host");
    std::ofstream out(path, std::ios::binary | (append ? std::ios::app : std::ios::trunc));
    if (!out) throw Error("cannot open dump file " + path);
    const Grid2D &g = field.grid();
    const std::uint64_t n = static_cast<std::uint64_t>(g.n);
    out.write(reinterpret_cast<const char *>(&n), sizeof n);
    out.write(reinterpret_cast<const char *>(&g.half_width), sizeof g.half_width);
    out.write(reinterpret_cast<const char *>(&t), sizeof t);
    std::vector<double> rho(g.points());
    const Complex *d = field.data();
    for (std::size_t i = 0; i < rho.size(); ++i) {
        rho[i] = std::norm(d[i]) + std::norm(d[i + rho.size()]) + std::norm(d[i + 2 * rho.size()]);
    }
    out.write(reinterpret_cast<const char *>(rho.data()), static_cast<std::streamsize>(rho.size() * sizeof(double)));
    if (!out) throw Error("failed writing dump file " + path);
}

} // namespace pjt
