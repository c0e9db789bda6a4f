#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace pjt {

using Complex = std::complex<double>;
using Matrix3 = Eigen::Matrix3d;
using Vector3 = Eigen::Vector3d;
using Matrix3C = Eigen::Matrix3cd;
using Vector3C = Eigen::Vector3cd;

// A point of R^2, used for both positions and momenta.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 &operator+=(const Vec2 &o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    constexpr Vec2 &operator-=(const Vec2 &o) {
        x -= o.x;
        y -= o.y;
        return *this;
    }
    constexpr Vec2 &operator*=(double s) {
        x *= s;
        y *= s;
        return *this;
    }
    friend constexpr Vec2 operator+(Vec2 a, const Vec2 &b) { return a += b; }
    friend constexpr Vec2 operator-(Vec2 a, const Vec2 &b) { return a -= b; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
    friend constexpr bool operator==(const Vec2 &, const Vec2 &) = default;
};

constexpr double dot(const Vec2 &a, const Vec2 &b) { return a.x * b.x + a.y * b.y; }

// a ^ b = a1*b2 - a2*b1
constexpr double wedge(const Vec2 &a, const Vec2 &b) { return a.x * b.y - a.y * b.x; }

inline double norm(const Vec2 &a) { return std::hypot(a.x, a.y); }

// The three adiabatic levels, with eigenvalue ell*|q|. The enumerator values
// are the storage index used everywhere: (+, -, 0).
enum class Mode : int { Plus = 0, Minus = 1, Zero = 2 };

inline constexpr std::array<Mode, 3> kModes = {Mode::Plus, Mode::Minus, Mode::Zero};

constexpr int index(Mode m) { return static_cast<int>(m); }

constexpr int ell(Mode m) {
    switch (m) {
    case Mode::Plus: return 1;
    case Mode::Minus: return -1;
    case Mode::Zero: return 0;
    }
    return 0;
}

inline const char *to_string(Mode m) {
    switch (m) {
    case Mode::Plus: return "plus";
    case Mode::Minus: return "minus";
    case Mode::Zero: return "zero";
    }
    return "?";
}

Mode parse_mode(const std::string &name);

// Error hierarchy. Each failure kind has its own type so callers can
// catch exactly what they are prepared to handle.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class SingularPoint : public Error {
  public:
    using Error::Error;
};
class DegenerateReference : public Error {
  public:
    using Error::Error;
};
class ZeroMomentum : public Error {
  public:
    using Error::Error;
};
class OutOfRange : public Error {
  public:
    using Error::Error;
};
class SingularityReached : public Error {
  public:
    using Error::Error;
};
class ToleranceNotMet : public Error {
  public:
    using Error::Error;
};
class BoxTooSmall : public Error {
  public:
    using Error::Error;
};
class DomainError : public Error {
  public:
    using Error::Error;
};

} // namespace pjt
