#include "pjt/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pjt {

Mode parse_mode(const std::string &name) {
    if (name == "plus" || name == "+" || name == "+1") return Mode::Plus;
    if (name == "minus" || name == "-" || name == "-1") return Mode::Minus;
    if (name == "zero" || name == "0") return Mode::Zero;
    throw OutOfRange("unknown mode '" + name + "' (expected plus, minus or zero)");
}

Matrix3 potential_matrix(const Vec2 &q) {
    const double c = q.y / std::numbers::sqrt2;
    Matrix3 v;
    v << q.x, 0.0, c,
         0.0, -q.x, c,
         c, c, 0.0;
    return v;
}

std::array<double, 3> eigenvalues(const Vec2 &q) {
    const double r = norm(q);
    return {-r, 0.0, r};
}

double singular_tol(const Vec2 &q) { return 1e-12 * (1.0 + norm(q)); }

Matrix3 projector(const Vec2 &q, Mode m) {
    const double r = norm(q);
    if (r <= singular_tol(q)) {
        throw SingularPoint("eigenprojectors are singular at the crossing q = 0");
    }
    const Matrix3 v = potential_matrix(q);
    const Matrix3 v2 = v * v;
    switch (m) {
    case Mode::Plus: return (v2 + r * v) / (2.0 * r * r);
    case Mode::Minus: return (v2 - r * v) / (2.0 * r * r);
    case Mode::Zero: return Matrix3::Identity() - v2 / (r * r);
    }
    return Matrix3::Zero();
}

Vector3 eigenvector(const Vec2 &q, Mode m, const Vector3 &reference, double tol) {
    const Vector3 projected = projector(q, m) * reference;
    const double len = projected.norm();
    if (len < tol) {
        throw DegenerateReference("reference vector is orthogonal to the " +
                                  std::string(to_string(m)) + " eigenspace");
    }
    return projected / len;
}

double transition_coefficient(double p_norm, double eta) {
    constexpr double kMomentumTol = 1e-12;
    if (!(p_norm > kMomentumTol)) {
        throw ZeroMomentum("transition coefficient requires |p| > 0");
    }
    return std::exp(-std::numbers::pi * eta * eta / (2.0 * p_norm * p_norm * p_norm));
}

double transition_coefficient(const Vec2 &p, double eta) {
    return transition_coefficient(norm(p), eta);
}

Matrix3 branching_matrix(double T) {
    if (!(T >= 0.0 && T <= 1.0)) {
        throw OutOfRange("branching matrix needs T in [0, 1], got " + std::to_string(T));
    }
    const double stay = (1.0 - T) * (1.0 - T);
    const double swap = T * T;
    const double mix = 2.0 * T * (1.0 - T);
    const double zero = (1.0 - 2.0 * T) * (1.0 - 2.0 * T);
    Matrix3 b;
    b << stay, swap, mix,
         swap, stay, mix,
         mix, mix, zero;
    return b;
}

Matrix3 gauge_m() {
    const double h = 1.0 / std::numbers::sqrt2;
    Matrix3 m;
    m << h, h, 0.0,
         h, -h, 0.0,
         0.0, 0.0, 1.0;
    return m;
}

Matrix3 gauge_w(const Vec2 &q) {
    Matrix3 w;
    w << 0.0, q.x, q.y,
         q.x, 0.0, 0.0,
         q.y, 0.0, 0.0;
    return w;
}

Matrix3 gauge_r(const Vec2 &p) {
    const double r = norm(p);
    if (!(r > 0.0)) {
        throw ZeroMomentum("R(p) is not defined at p = 0");
    }
    Matrix3 m;
    m << r, 0.0, 0.0,
         0.0, -p.x, -p.y,
         0.0, p.y, -p.x;
    return m / r;
}

GaugeMatrices gauge_matrices(const Vec2 &p) { return {gauge_m(), gauge_r(p)}; }

} // namespace pjt
