#pragma once
#include <utility>

#include "nbv/grid.hpp"

namespace nbv {

// The continuum total variation is rotation invariant; on a grid a norm for
// the per-cell gradient vector has to be chosen.
enum class TvFlavor { Isotropic, Anisotropic };

// Discrete total variation:
//   Isotropic:   h^2 * sum_c sqrt(gx^2 + gy^2)
//   Anisotropic: h^2 * sum_c (|gx| + |gy|)
double tv(const ScalarField& u, TvFlavor flavor);

// h * sum over boundary faces of |u(adjacent cell)|. Corner cells count once
// per incident face.
double boundary_trace_term(const ScalarField& u);

// ||u|| = tv(u) + boundary trace. A norm on the discrete space: it vanishes
// only when u is constant with zero trace, i.e. u == 0.
double bv_norm(const ScalarField& u, TvFlavor flavor);

// The 1-Laplacian energy's convex part; identical to bv_norm, kept as a named
// functional to mirror the mean-curvature companion below.
double i0(const ScalarField& u, TvFlavor flavor);

// Area functional h^2 * sum_c sqrt(1 + gx^2 + gy^2) plus the boundary trace.
// Always isotropic.
double i0_tilde(const ScalarField& u);

// One-sided derivative of I0 along its own ray, d/dt I0(s*u + t*u) at t=0.
// By positive 1-homogeneity this equals i0(u) for every s > 0.
double i0_dirderiv_ray(const ScalarField& u, double s, TvFlavor flavor);

// d/dt I0tilde(s*u + t*u) at t=0:
//   h^2 * sum_c (gx^2+gy^2)/sqrt(1/s^2 + gx^2+gy^2) + boundary trace.
// Nondecreasing in s; tends to i0(u, Isotropic) as s -> infinity.
double i0_tilde_dirderiv_ray(const ScalarField& u, double s);

// Cellwise (max(u,v), min(u,v)). Requires matching domains.
std::pair<ScalarField, ScalarField> lattice_pair(const ScalarField& u, const ScalarField& v);

// Smoothed pieces used by the descent solver. Each |.| is replaced by
// sqrt(eps^2 + .^2) - eps, so the eps = 0 case coincides with the exact
// functional and the gap is at most eps per unit of measure.
double tv_smoothed(const ScalarField& u, TvFlavor flavor, double eps);
double boundary_trace_smoothed(const ScalarField& u, double eps);

// h^2 * sum_c sqrt(1 + gx^2 + gy^2), the area part of i0_tilde.
double graph_area(const ScalarField& u);

// Subgradient fluxes q = dW/dg for the gradient-dependent integrands W:
//   smoothed tv (isotropic): q = g / sqrt(eps^2 + |g|^2)
//   smoothed tv (anisotropic): per component
//   graph area:               q = g / sqrt(1 + |g|^2)
// All satisfy |q| <= 1 cellwise.
VectorField tv_smoothed_flux(const ScalarField& u, TvFlavor flavor, double eps);
VectorField graph_area_flux(const ScalarField& u);

} // namespace nbv
