#pragma once

#include "pjt/types.hpp"

namespace pjt {

// Principal-branch-continuous log Gamma for Re(z) >= 1/2 by the Lanczos
// approximation (g = 7, n = 9); reflection is used below that.
Complex log_gamma(Complex z);

// arg Gamma(1 + i u), continuous in u, zero at u = 0.
double gamma_phase(double u);

// |Gamma(1 + i u)|^2 computed from log_gamma.
double gamma_modulus_sq(double u);

} // namespace pjt
