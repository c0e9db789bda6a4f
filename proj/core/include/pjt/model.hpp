#pragma once

// Spectral and algebraic machinery of the pseudo Jahn-Teller potential
//
//            [ q1    0     q2/r2 ]
//   V(q)  =  [ 0    -q1    q2/r2 ]      r2 = sqrt(2)
//            [ q2/r2 q2/r2  0    ]
//
// whose eigenvalues |q|, -|q| and 0 cross jointly at q = 0.

#include <array>

#include "pjt/types.hpp"

namespace pjt {

Matrix3 potential_matrix(const Vec2 &q);

// (-|q|, 0, |q|), ascending.
std::array<double, 3> eigenvalues(const Vec2 &q);

// Threshold below which |q| is treated as the crossing point.
double singular_tol(const Vec2 &q);

// Eigenprojector onto the ell(m)*|q| eigenspace, from the spectral polynomial:
//   P+- = (V^2 +- |q| V) / (2|q|^2),   P0 = I - V^2/|q|^2.
// Throws SingularPoint at the crossing.
Matrix3 projector(const Vec2 &q, Mode m);

// Unit vector spanning Ran projector(q, m) with <e, reference> > 0.
// Throws DegenerateReference if the reference has (almost) no component
// along the eigenspace.
Vector3 eigenvector(const Vec2 &q, Mode m, const Vector3 &reference, double tol = 1e-10);

// T(p, eta) = exp(-pi eta^2 / (2 |p|^3)).
double transition_coefficient(const Vec2 &p, double eta);
double transition_coefficient(double p_norm, double eta);

// Doubly stochastic matrix sending (nu+, nu-, nu0)_in to (nu+, nu-, nu0)_out.
Matrix3 branching_matrix(double T);

struct GaugeMatrices {
    Matrix3 M;
    Matrix3 R;
};

// M with M V(q) M = W(q).
Matrix3 gauge_m();
// W(q) = M V(q) M.
Matrix3 gauge_w(const Vec2 &q);
// R(p) with R W(q) R^T = -W(p.q/|p|, p^q/|p|). Throws ZeroMomentum at p = 0.
Matrix3 gauge_r(const Vec2 &p);
GaugeMatrices gauge_matrices(const Vec2 &p);

} // namespace pjt
