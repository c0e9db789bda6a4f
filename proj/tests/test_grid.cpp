#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "pjt/grid.hpp"
#include "pjt/model.hpp"

using namespace pjt;

namespace {

constexpr double kPi = std::numbers::pi;

WaveField random_field(const Grid2D &grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    WaveField f(grid);
    for (int c = 0; c < 3; ++c) {
        for (int j = 0; j < grid.n; ++j) {
            for (int k = 0; k < grid.n; ++k) f(c, j, k) = {g(rng), g(rng)};
        }
    }
    return f;
}

// Free evolution of (eps pi)^{-1/4} exp(-(x-x0)^2/(2 eps) + i p (x-x0)/eps).
Complex free_gaussian(double x, double x0, double p, double eps, double t) {
    const Complex s(1.0, t);
    const double d = x - x0 - p * t;
    const Complex expo = -d * d / (2.0 * eps * s) + Complex(0.0, p * (x - x0) / eps - p * p * t / (2.0 * eps));
    return std::pow(eps * kPi, -0.25) / std::sqrt(s) * std::exp(expo);
}

} // namespace

TEST(Grid, Layout) {
    const Grid2D g{2.0, 8};
    EXPECT_DOUBLE_EQ(g.dx(), 0.5);
    EXPECT_DOUBLE_EQ(g.x(0), -2.0);
    EXPECT_DOUBLE_EQ(g.x(4), 0.0);
    EXPECT_DOUBLE_EQ(g.k(0), 0.0);
    EXPECT_DOUBLE_EQ(g.k(1), kPi / 2.0);
    EXPECT_DOUBLE_EQ(g.k(3), 3 * kPi / 2.0);
    EXPECT_DOUBLE_EQ(g.k(4), -2 * kPi);
    EXPECT_DOUBLE_EQ(g.k(7), -kPi / 2.0);
    EXPECT_EQ(g.points(), 64u);
}

TEST(Grid, Validation) {
    EXPECT_NO_THROW((Grid2D{1.0, 2}.validate()));
    EXPECT_THROW((Grid2D{1.0, 12}.validate()), OutOfRange);
    EXPECT_THROW((Grid2D{1.0, 1}.validate()), OutOfRange);
    EXPECT_THROW((Grid2D{0.0, 16}.validate()), OutOfRange);
    EXPECT_THROW(WaveField(Grid2D{1.0, 6}), OutOfRange);
}

TEST(Kinetic, ConstantFieldUnchanged) {
    const Grid2D g{1.5, 32};
    WaveField f(g);
    for (int j = 0; j < g.n; ++j) {
        for (int k = 0; k < g.n; ++k) f.set(j, k, Vector3C(1.0, Complex(0.0, 2.0), -0.5));
    }
    SplitStepPropagator prop(g, 0.01, 0.1);
    prop.potential_enabled = false;
    prop.advance(f, 5);
    for (int j = 0; j < g.n; ++j) {
        for (int k = 0; k < g.n; ++k) EXPECT_LT((f.at(j, k) - Vector3C(1.0, Complex(0.0, 2.0), -0.5)).norm(), 1e-13);
    }
}

TEST(Kinetic, PlaneWavePhase) {
    const Grid2D g{1.0, 16};
    const double eps = 0.05, h = 0.3;
    const int mj = 3, mk = -2;
    const double kx = kPi * mj / g.half_width, ky = kPi * mk / g.half_width;
    WaveField f(g);
    for (int j = 0; j < g.n; ++j) {
        for (int k = 0; k < g.n; ++k) f(1, j, k) = std::polar(1.0, kx * g.x(j) + ky * g.x(k));
    }
    SplitStepPropagator prop(g, eps, 1.0);
    prop.kinetic_step(f, h);
    const Complex phase = std::polar(1.0, -h * eps * (kx * kx + ky * ky) / 2.0);
    for (int j = 0; j < g.n; ++j) {
        for (int k = 0; k < g.n; ++k) {
            EXPECT_LT(std::abs(f(1, j, k) - phase * std::polar(1.0, kx * g.x(j) + ky * g.x(k))), 1e-13);
            EXPECT_EQ(f(0, j, k), Complex(0.0, 0.0));
        }
    }
}

TEST(Kinetic, NormPreserved) {
    const Grid2D g{2.0, 32};
    WaveField f = random_field(g, 3);
    const double n0 = f.norm_sq();
    SplitStepPropagator prop(g, 0.01, 0.01);
    for (int i = 0; i < 10000; ++i) prop.kinetic_half_step(f);
    EXPECT_LT(std::abs(f.norm_sq() / n0 - 1.0), 1e-10);
}

TEST(Kinetic, FreeGaussianMatchesAnalytic) {
    const Grid2D g{2.0, 128};
    const double eps = 0.01, t = 0.5;
    const Vec2 q0{-0.4, 0.1}, p0{0.3, 0.2};
    WaveField f(g);
    for (int j = 0; j < g.n; ++j) {
        for (int k = 0; k < g.n; ++k) {
            f(2, j, k) = free_gaussian(g.x(j), q0.x, p0.x, eps, 0.0) * free_gaussian(g.x(k), q0.y, p0.y, eps, 0.0);
        }
    }
    SplitStepPropagator prop(g, eps, t / 100);
    prop.potential_enabled = false;
    prop.advance(f, 100);
    double err = 0.0;
    for (int j = 0; j < g.n; ++j) {
        for (int k = 0; k < g.n; ++k) {
            const Complex expect =
                free_gaussian(g.x(j), q0.x, p0.x, eps, t) * free_gaussian(g.x(k), q0.y, p0.y, eps, t);
            err = std::max(err, std::abs(f(2, j, k) - expect));
        }
    }
    EXPECT_LT(err, 1e-9);
}

TEST(Potential, ClosedFormSpecialPoints) {
    EXPECT_LT((potential_propagator({0.0, 0.0}, 0.7) - Matrix3C::Identity()).cwiseAbs().maxCoeff(), 1e-16);
    const double tau = 0.9;
    Matrix3C expect = Matrix3C::Zero();
    expect(0, 0) = std::polar(1.0, -tau);
    expect(1, 1) = std::polar(1.0, tau);
    expect(2, 2) = 1.0;
    EXPECT_LT((potential_propagator({1.0, 0.0}, tau) - expect).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Potential, MatchesDenseExponential) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uq(-3.0, 3.0);
    std::uniform_real_distribution<double> ut(0.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Vec2 q = i == 0 ? Vec2{1e-9, -2e-9} : Vec2{uq(rng), uq(rng)};
        const double tau = ut(rng);
        const Matrix3C a = Complex(0.0, -tau) * potential_matrix(q).cast<Complex>();
        const Matrix3C dense = a.exp();
        worst = std::max(worst, (potential_propagator(q, tau) - dense).cwiseAbs().maxCoeff());
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(Potential, StepIsPointwiseExponential) {
    const Grid2D g{1.0, 16};
    const double eps = 0.02, dt = 0.01;
    const WaveField f0 = random_field(g, 5);
    WaveField f = f0;
    potential_step(f, dt, eps);
    for (int j = 0; j < g.n; ++j) {
        for (int k = 0; k < g.n; ++k) {
            const Vector3C expect = potential_propagator({g.x(j), g.x(k)}, dt / eps) * f0.at(j, k);
            EXPECT_LT((f.at(j, k) - expect).norm(), 1e-13);
        }
    }
    EXPECT_NEAR(f.norm_sq(), f0.norm_sq(), 1e-12 * f0.norm_sq());
}

TEST(Populations, Complete) {
    const Grid2D g{1.0, 32};
    WaveField f = random_field(g, 9);
    const auto n = populations(f);
    EXPECT_NEAR(n[0] + n[1] + n[2], f.norm_sq(), 1e-12 * f.norm_sq());
}

TEST(InitialState, GaussianOnLevel) {
    const Grid2D g{3.0, 256};
    const GaussianPacket pk{{0.5, 0.05}, {-1.0, 0.0}, 0.01, Mode::Plus};
    const WaveField f = init_gaussian(g, pk);
    EXPECT_NEAR(f.norm_sq(), 1.0, 1e-14);
    const auto n = populations(f);
    EXPECT_NEAR(n[0], 1.0, 1e-12);
    EXPECT_LT(n[1], 1e-12);
    EXPECT_LT(n[2], 1e-12);

    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> node(0, g.n - 1);
    for (int i = 0; i < 200; ++i) {
        const int j = node(rng), k = node(rng);
        const Vec2 q{g.x(j), g.x(k)};
        if (norm(q) < 1e-6) continue;
        const Vector3C psi = f.at(j, k);
        EXPECT_LT((projector(q, Mode::Minus).cast<Complex>() * psi).norm(), 1e-14 * (1.0 + psi.norm()));
    }

    double m2 = 0.0;
    const double dx2 = g.dx() * g.dx();
    for (int j = 0; j < g.n; ++j) {
        for (int k = 0; k < g.n; ++k) {
            const Vec2 d = Vec2{g.x(j), g.x(k)} - pk.q0;
            m2 += dot(d, d) * f.at(j, k).squaredNorm() * dx2;
        }
    }
    EXPECT_NEAR(m2, pk.epsilon, 1e-10);
}

TEST(InitialState, PacketOnCrossing) {
    const Grid2D g{1.0, 64};
    const WaveField f = init_gaussian(g, {{0.0, 0.0}, {0.0, 0.0}, 0.01, Mode::Zero});
    EXPECT_NEAR(f.norm_sq(), 1.0, 1e-14);
}

TEST(InitialState, BoxTooSmall) {
    const Grid2D g{1.0, 64};
    EXPECT_THROW(init_gaussian(g, {{0.8, 0.0}, {0.0, 0.0}, 0.01, Mode::Plus}), BoxTooSmall);
    EXPECT_NO_THROW(init_gaussian(g, {{0.2, 0.0}, {0.0, 0.0}, 0.01, Mode::Plus}));
}

TEST(Propagator, StrangStepsPreserveNorm) {
    const Grid2D g{3.0, 64};
    WaveField f = init_gaussian(g, {{0.5, 0.2}, {-1.0, 0.0}, 0.1, Mode::Plus});
    SplitStepPropagator prop(g, 0.1, 1e-3);
    prop.advance(f, 1000);
    EXPECT_LT(std::abs(f.norm_sq() - 1.0), 1e-12);
}

TEST(Propagator, FusedMatchesUnfused) {
    const Grid2D g{3.0, 32};
    const WaveField f0 = init_gaussian(g, {{0.5, 0.2}, {-1.0, 0.0}, 0.2, Mode::Minus});
    SplitStepPropagator prop(g, 0.2, 2e-3);
    WaveField a = f0, b = f0;
    prop.advance(a, 7);
    for (int i = 0; i < 7; ++i) prop.strang_step(b);
    double err = 0.0;
    for (std::size_t i = 0; i < 3 * g.points(); ++i) err = std::max(err, std::abs(a.data()[i] - b.data()[i]));
    EXPECT_LT(err, 1e-13);
}

TEST(Run, SmallGrid) {
    SplitStepConfig cfg;
    cfg.grid = {3.0, 64};
    cfg.packet = {{0.5, 0.2}, {-1.0, 0.0}, 0.1, Mode::Plus};
    cfg.dt = 1e-3;
    cfg.t_grid = {0.0, 0.1, 0.25};
    std::vector<double> norms;
    const PopulationSeries s = run_grid(cfg, &norms);
    ASSERT_EQ(s.size(), 3u);
    ASSERT_EQ(norms.size(), 3u);
    EXPECT_NEAR(s.n[0][0], 1.0, 1e-12);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_NEAR(s.total(k), 1.0, 1e-12);
        EXPECT_NEAR(norms[k], 1.0, 1e-12);
    }
    cfg.t_grid = {0.1, 0.2};
    EXPECT_THROW(run_grid(cfg), OutOfRange);
    cfg.t_grid = {0.0, 0.2, 0.2};
    EXPECT_THROW(run_grid(cfg), OutOfRange);
}

TEST(Run, FreeFlowKeepsPopulationsOfFreeField) {
    SplitStepConfig cfg;
    cfg.grid = {3.0, 64};
    cfg.packet = {{0.5, 0.2}, {-1.0, 0.0}, 0.1, Mode::Plus};
    cfg.dt = 1e-3;
    cfg.t_grid = {0.0, 0.05};
    cfg.potential = false;
    std::vector<double> norms;
    const PopulationSeries s = run_grid(cfg, &norms);
    EXPECT_NEAR(norms[1], 1.0, 1e-12);
    EXPECT_NEAR(s.total(1), 1.0, 1e-12);
}

TEST(Dump, BinaryLayout) {
    const Grid2D g{1.0, 8};
    WaveField f = random_field(g, 4);
    const auto path = std::filesystem::temp_directory_path() / "pjt_dump_test.bin";
    dump_density(path.string(), f, 0.0, false);
    dump_density(path.string(), f, 0.5, true);
    std::ifstream in(path, std::ios::binary);
    for (double t : {0.0, 0.5}) {
        std::uint64_t n = 0;
        double L = 0.0, tt = -1.0;
        in.read(reinterpret_cast<char *>(&n), sizeof n);
        in.read(reinterpret_cast<char *>(&L), sizeof L);
        in.read(reinterpret_cast<char *>(&tt), sizeof tt);
        EXPECT_EQ(n, 8u);
        EXPECT_EQ(L, 1.0);
        EXPECT_EQ(tt, t);
        std::vector<double> rho(64);
        in.read(reinterpret_cast<char *>(rho.data()), 64 * sizeof(double));
        EXPECT_DOUBLE_EQ(rho[3 * 8 + 5], f.at(3, 5).squaredNorm());
    }
    EXPECT_EQ(in.peek(), std::char_traits<char>::eof());
    in.close();
    std::filesystem::remove(path);
}
