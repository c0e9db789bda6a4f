#pragma once

// Scattering through the model crossing
//
//   -i d/ds v = A(s, z) v,   A = [[s, 0, z/r2], [0, -s, conj(z)/r2], [conj(z)/r2, z/r2, 0]]
//
// for v = (v+, v-, v0). Far from s = 0 the components behave like
// exp(i ell phi(s, z)) times constant profiles; S(z) maps the incoming
// profiles (s -> -inf) to the outgoing ones (s -> +inf).

#include "pjt/types.hpp"

namespace pjt {

// 3x3 unitary matrix, rows and columns ordered (+, -, 0).
using ScatteringMatrix = Matrix3C;

// How asymptotic profiles are imposed at -s_max and read off at +s_max.
//  Leading: v_l = exp(i l phi) alpha_l on the bare components; the truncated
//           asymptotics leave an O(|z|/s_max) error with an oscillating constant.
//  Dressed: the same profiles carried by the first-order adiabatic
//           eigenvectors of A(+-s_max) (orthonormalized); error O(|z|^2/s_max^2).
enum class ProfileExtraction { Leading, Dressed };

struct ScatteringSettings {
    double s_max = 200.0;
    double tol = 1e-13;
    double step_factor = 1.0; // max step = step_factor / (1 + |s|)
    ProfileExtraction profiles = ProfileExtraction::Dressed;
};

// phi(s, z) = s^2/2 + |z|^2/2 ln|s|. Throws DomainError at s = 0.
double phase_phi(double s, Complex z);

Matrix3C system_matrix(double s, Complex z);

// Transfer coefficient t = exp(-pi |z|^2 / 2) entering S(z).
double scattering_t(Complex z);

// Omega(z) = (z/|z|) Gamma(1 - i|z|^2/4) / |Gamma(1 - i|z|^2/4)|; 1 at z = 0.
Complex scattering_omega(Complex z);

ScatteringMatrix analytic_s_matrix(Complex z);

Vector3C integrate_system(Complex z, const Vector3C &v_start, double s_start, double s_end,
                          const ScatteringSettings &settings = {});

ScatteringMatrix numerical_s_matrix(Complex z, const ScatteringSettings &settings = {});

// conj(v1 x v2): the wedge of two solutions is again a solution (Tr A = 0).
Vector3C wedge_solution(const Vector3C &v1, const Vector3C &v2);

// Max over n_samples points of [s_lo, s_hi] of |-i W' - A W| for W the wedge
// of the solutions starting from e+ and e- at s_lo; W' by an 8th-order
// central difference of step h.
double wedge_residual(Complex z, double s_lo, double s_hi, int n_samples, double h = 1e-3,
                      const ScatteringSettings &settings = {});

// Component (0-based) carrying mode m on the side sign_s of the crossing.
int mode_component_map(int sign_s, Mode m);

// Max |P - B(T)| where P[out][in] = |S_{map(+1,out), map(-1,in)}|^2 and
// B is the branching matrix at T = exp(-pi |z|^2 / 2).
double branching_consistency(Complex z);

// Mode transfer probabilities read off |S|^2 with the relabeling above.
Matrix3 transfer_probabilities(const ScatteringMatrix &s);

// Auxiliary functions from the contour-integral solutions.
Complex aux_a(Complex z);
Complex aux_b(Complex z);

double unitarity_defect(const ScatteringMatrix &s);

} // namespace pjt
