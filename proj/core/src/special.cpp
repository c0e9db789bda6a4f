#include "pjt/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace pjt {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

} // namespace

Complex log_gamma(Complex z) {
    using std::numbers::pi;
    if (z.real() < 0.5) {
        // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(1.0 - z);
    }
    z -= 1.0;
    Complex x = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) {
        x += kLanczos[i] / (z + static_cast<double>(i));
    }
    const Complex t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

double gamma_phase(double u) {
    if (u == 0.0) return 0.0;
    // The Lanczos sum stays in the right half plane on Re z = 1, so the
    // principal logs above are continuous in u and the imaginary part is the
    // continuous argument; odd symmetry is imposed exactly.
    const double phase = log_gamma(Complex(1.0, std::abs(u))).imag();
    return u > 0.0 ? phase : -phase;
}

// |Gamma(1 + iu)|^2 = pi u / sinh(pi u)
double gamma_modulus_sq(double u) {
    const double x = std::numbers::pi * u;
    return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : x / std::sinh(x);
}

} // namespace pjt
