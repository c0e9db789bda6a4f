#include "pjt/scattering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "pjt/model.hpp"
#include "pjt/special.hpp"

namespace pjt {

namespace {

using std::numbers::pi;
using std::numbers::sqrt2;

constexpr std::array<double, 3> kEll = {1.0, -1.0, 0.0};

// Real 6-vector (Re v+, Im v+, Re v-, Im v-, Re v0, Im v0) for the odeint
// range algebra.
using RealState = std::array<double, 6>;

RealState to_real(const Vector3C &v) {
    return {v(0).real(), v(0).imag(), v(1).real(), v(1).imag(), v(2).real(), v(2).imag()};
}

Vector3C to_complex(const RealState &x) {
    return {Complex(x[0], x[1]), Complex(x[2], x[3]), Complex(x[4], x[5])};
}

struct SystemRhs {
    Complex coupling;      // z / sqrt(2)
    Complex coupling_bar;  // conj(z) / sqrt(2)

    // d/ds v = i A(s) v
    void operator()(const RealState &x, RealState &dx, double s) const {
        const Complex vp(x[0], x[1]);
        const Complex vm(x[2], x[3]);
        const Complex v0(x[4], x[5]);
        const Complex ap = s * vp + coupling * v0;
        const Complex am = -s * vm + coupling_bar * v0;
        const Complex a0 = coupling_bar * vp + coupling * vm;
        dx = {-ap.imag(), ap.real(), -am.imag(), am.real(), -a0.imag(), a0.real()};
    }
};

// Columns: first-order adiabatic dressing of e+, e-, e0 at s, made exactly
// orthonormal by Gram-Schmidt.
Matrix3C dressed_basis(double s, Complex z) {
    const Complex c = z / (sqrt2 * s);
    const Complex cb = std::conj(z) / (sqrt2 * s);
    Matrix3C u = Matrix3C::Identity();
    u(2, 0) = cb;
    u(2, 1) = -c;
    u(0, 2) = -c;
    u(1, 2) = cb;
    for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < j; ++k) {
            u.col(j) -= u.col(k).dot(u.col(j)) * u.col(k);
        }
        u.col(j).normalize();
    }
    return u;
}

} // namespace

double phase_phi(double s, Complex z) {
    if (s == 0.0) throw DomainError("phase phi(s, z) is undefined at s = 0");
    return 0.5 * s * s + 0.5 * std::norm(z) * std::log(std::abs(s));
}

Matrix3C system_matrix(double s, Complex z) {
    const Complex c = z / sqrt2;
    const Complex cb = std::conj(z) / sqrt2;
    Matrix3C a;
    a << s, 0.0, c,
         0.0, -s, cb,
         cb, c, 0.0;
    return a;
}

double scattering_t(Complex z) { return std::exp(-pi * std::norm(z) / 2.0); }

Complex scattering_omega(Complex z) {
    const double r = std::abs(z);
    if (r == 0.0) return 1.0;
    // arg Gamma(1 - i u) = -arg Gamma(1 + i u)
    const double quarter = std::norm(z) / 4.0;
    return (z / r) * std::polar(1.0, gamma_phase(-quarter));
}

ScatteringMatrix analytic_s_matrix(Complex z) {
    const Complex i(0.0, 1.0);
    const double t = scattering_t(z);
    const double theta = std::sqrt(1.0 - t) * std::sqrt(t);
    const Complex w = scattering_omega(z);
    const Complex wb = std::conj(w);
    const Complex e_plus = std::polar(1.0, pi / 4.0);
    const Complex e_minus = std::conj(e_plus);

    ScatteringMatrix s;
    s(0, 0) = t;
    s(0, 1) = i * w * w * (1.0 - t);
    s(0, 2) = sqrt2 * e_plus * w * theta;
    s(1, 0) = -i * wb * wb * (1.0 - t);
    s(1, 1) = t;
    s(1, 2) = -sqrt2 * e_minus * wb * theta;
    s(2, 0) = -sqrt2 * e_minus * wb * theta;
    s(2, 1) = sqrt2 * e_plus * w * theta;
    s(2, 2) = 2.0 * t - 1.0;
    return s;
}

Vector3C integrate_system(Complex z, const Vector3C &v_start, double s_start, double s_end,
                          const ScatteringSettings &settings) {
    namespace odeint = boost::numeric::odeint;
    auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<RealState>>(settings.tol, settings.tol);
    const SystemRhs rhs{z / sqrt2, std::conj(z) / sqrt2};

    RealState x = to_real(v_start);
    const double dir = s_end >= s_start ? 1.0 : -1.0;
    double s = s_start;
    double ds = dir * 1e-3;
    std::size_t failures = 0;
    while (dir * (s_end - s) > 0.0) {
        const double remaining = std::abs(s_end - s);
        const double cap = std::min(settings.step_factor / (1.0 + std::abs(s)), remaining);
        if (std::abs(ds) > cap) ds = dir * cap;
        const bool last = std::abs(ds) >= remaining;
        if (stepper.try_step(rhs, x, s, ds) == odeint::success) {
            failures = 0;
            if (last) s = s_end;
        } else if (++failures > 100 || std::abs(ds) < 1e-14 * (1.0 + std::abs(s))) {
            throw ToleranceNotMet("scattering integration cannot meet tol = " + std::to_string(settings.tol) +
                                  " at s = " + std::to_string(s));
        }
    }
    return to_complex(x);
}

ScatteringMatrix numerical_s_matrix(Complex z, const ScatteringSettings &settings) {
    const double s_max = settings.s_max;
    if (!(s_max > 0.0)) throw OutOfRange("s_max must be positive");
    const double phi_in = phase_phi(-s_max, z);
    const double phi_out = phase_phi(s_max, z);
    const bool dressed = settings.profiles == ProfileExtraction::Dressed;
    const Matrix3C basis_in = dressed ? dressed_basis(-s_max, z) : Matrix3C::Identity();
    const Matrix3C basis_out = dressed ? dressed_basis(s_max, z) : Matrix3C::Identity();

    ScatteringMatrix s;
    for (int j = 0; j < 3; ++j) {
        const Vector3C v = basis_in.col(j) * std::polar(1.0, kEll[j] * phi_in);
        const Vector3C out = basis_out.adjoint() * integrate_system(z, v, -s_max, s_max, settings);
        for (int k = 0; k < 3; ++k) {
            s(k, j) = std::polar(1.0, -kEll[k] * phi_out) * out(k);
        }
    }
    return s;
}

Vector3C wedge_solution(const Vector3C &u, const Vector3C &v) {
    Vector3C w;
    w(0) = std::conj(u(1) * v(2) - u(2) * v(1));
    w(1) = std::conj(u(2) * v(0) - u(0) * v(2));
    w(2) = std::conj(u(0) * v(1) - u(1) * v(0));
    return w;
}

double wedge_residual(Complex z, double s_lo, double s_hi, int n_samples, double h,
                      const ScatteringSettings &settings) {
    if (n_samples < 2 || !(s_hi > s_lo) || !(h > 0.0)) throw OutOfRange("wedge_residual needs s_lo < s_hi, n >= 2");
    // Central-difference weights for offsets 1..4.
    constexpr std::array<double, 4> c = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
    const Complex i(0.0, 1.0);
    Vector3C v1 = Vector3C::Unit(0);
    Vector3C v2 = Vector3C::Unit(1);
    double s = s_lo;
    double worst = 0.0;
    for (int n = 0; n < n_samples; ++n) {
        const double target = s_lo + (s_hi - s_lo) * n / (n_samples - 1);
        if (target != s) {
            v1 = integrate_system(z, v1, s, target, settings);
            v2 = integrate_system(z, v2, s, target, settings);
            s = target;
        }
        auto wedge_at = [&](double offset) {
            return wedge_solution(integrate_system(z, v1, s, s + offset, settings),
                                  integrate_system(z, v2, s, s + offset, settings));
        };
        Vector3C deriv = Vector3C::Zero();
        for (int k = 1; k <= 4; ++k) deriv += c[k - 1] * (wedge_at(k * h) - wedge_at(-k * h));
        deriv /= h;
        const Vector3C w = wedge_solution(v1, v2);
        worst = std::max(worst, (-i * deriv - system_matrix(s, z) * w).norm());
    }
    return worst;
}

int mode_component_map(int sign_s, Mode m) {
    if (m == Mode::Zero) return 2;
    const bool plus = m == Mode::Plus;
    if (sign_s > 0) return plus ? 0 : 1;
    return plus ? 1 : 0;
}

Matrix3 transfer_probabilities(const ScatteringMatrix &s) {
    Matrix3 p;
    for (Mode out : kModes) {
        for (Mode in : kModes) {
            p(index(out), index(in)) = std::norm(s(mode_component_map(+1, out), mode_component_map(-1, in)));
        }
    }
    return p;
}

double branching_consistency(Complex z) {
    const Matrix3 p = transfer_probabilities(analytic_s_matrix(z));
    return (p - branching_matrix(scattering_t(z))).cwiseAbs().maxCoeff();
}

Complex aux_a(Complex z) {
    const double r2 = std::norm(z);
    const double r = std::sqrt(r2);
    const Complex gamma = std::exp(log_gamma(Complex(1.0, -r2 / 4.0)));
    return 2.0 * (z / r) * std::exp(-pi * r2 / 8.0) * std::sinh(pi * r2 / 4.0) / (r2 / 4.0) * gamma;
}

Complex aux_b(Complex z) {
    const double r2 = std::norm(z);
    const double r = std::sqrt(r2);
    return 8.0 / r * std::polar(1.0, pi / 4.0) * std::sqrt(pi) * std::sinh(pi * r2 / 4.0);
}

double unitarity_defect(const ScatteringMatrix &s) {
    return (s * s.adjoint() - Matrix3C::Identity()).cwiseAbs().maxCoeff();
}

} // namespace pjt
