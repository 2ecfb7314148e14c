#pragma once
#include <cstdint>
#include <optional>

#include "nbv/fibering.hpp"

namespace nbv {

struct CriticalityReport {
    double subdiff_min_slack = 0.0; // min over probes of I0(v)-I0(u)-lambda*I'(u)(v-u)
    int n_probes = 0;
    std::optional<double> el_residual;
    std::optional<double> pairing_gap;
    std::optional<double> nondegeneracy;

    bool passes(double tol_cert = 1e-7, double tol_el = 1e-6) const {
        if (subdiff_min_slack < -tol_cert) return false;
        if (el_residual && *el_residual > tol_el) return false;
        return true;
    }
};

// Sampled subdifferential test of the bounded-variation solution inequality
//   I0(v) - I0(u) >= lambda * I'(u)(v - u)   for all v
// (I0tilde for the mean-curvature problem). Probes: v = 0 and v = 2u always,
// scaled copies of u, single-cell bumps, Gaussian fields, and a steepest
// scaled direction. For a true critical point every slack is >= 0.
CriticalityReport subdiff_check(const ProblemSpec& spec, const ScalarField& u,
                                int n_probes, std::uint64_t seed);

struct VectorFieldCertificate {
    VectorField z;                     // cellwise |z| <= 1
    std::vector<double> boundary_sign; // sign slack per cell from the trace term, in [-1,1]
    ScalarField divergence_residual;   // div z + f(u) - boundary balance, per cell
    double el_residual = 0.0;          // L2 residual / max(1, ||f(u)||_2)
    double pairing_gap = 0.0;          // | -h^2 sum u div z - tv(u) |
    int iterations = 0;
    bool converged = false;

    double max_cellwise_norm() const;
};

// Euler-Lagrange feasibility for the 1-Laplacian: seeks cellwise fluxes z,
// |z| <= 1, and boundary sign slacks so that -div z + trace balance = f(u),
// by projected gradient on the squared residual. Reports residuals; a failed
// tolerance is recorded, not thrown.
VectorFieldCertificate el_certificate(const ScalarField& u, const Nonlinearity& nl,
                                      int max_iters = 20000, double tol_el = 1e-6);

// Mean-curvature stationarity residual: z = grad u / sqrt(1 + |grad u|^2),
// returns ||div z + lambda f(u)||_2 / ||lambda f(u)||_2 over interior cells
// (0/0 convention: 0).
double mc_el_residual(const ScalarField& u, double lambda, const Nonlinearity& nl);

// h^2 * sum_c f'(u) u^2; strictly positive at any nontrivial field when f is
// strictly increasing. Throws MissingDerivative when f' is absent.
double nondegeneracy(const ScalarField& u, const Nonlinearity& nl);

} // namespace nbv
