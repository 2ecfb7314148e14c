#pragma once
#include <cstdint>
#include <vector>

#include "nbv/verification.hpp"

namespace nbv {

struct SolverConfig {
    int restarts = 8;
    std::uint64_t seed = 0;
    std::vector<double> eps_schedule = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    double step_init = 1.0;
    double backtrack = 0.5;
    int max_iters = 500;       // per smoothing stage
    double psi_stop_tol = 1e-13; // relative stall threshold on psi decrease
    int workers = 1;           // restart-level parallelism; does not affect results
    int certificate_probes = 500;

    void validate() const; // throws std::invalid_argument
};

struct TraceRow {
    int restart = 0;
    double eps = 0.0;
    int iter = 0;
    double psi = 0.0;
    double t_w = 0.0;
    double step = 0.0;
};

struct GroundStateResult {
    ScalarField u_star;
    double energy = 0.0;          // Phi(u_star), unsmoothed
    double nehari_residual_value = 0.0;
    int best_restart = -1;
    std::vector<double> restart_energies; // NaN for restarts that failed to bracket
    CriticalityReport certificate;
    std::vector<TraceRow> trace;
};

// Phi with every nonsmooth |.| replaced by sqrt(eps^2 + .^2) - eps. Coincides
// with phi at eps = 0; the gap is bounded by eps * (|Omega| + perimeter) for
// the isotropic flavor.
double smoothed_phi(const ProblemSpec& spec, const ScalarField& u, double eps);

// psi_eps(w): normalize w in bv_norm, project onto the Nehari set along the
// ray (unsmoothed g), return (Phi_eps at the projected point, t_w).
std::pair<double, double> reduced_objective(const ProblemSpec& spec, const ScalarField& w,
                                            double eps);

// Multi-start projected descent on the reduced functional with smoothing
// continuation. Deterministic for fixed (spec, cfg) regardless of workers.
GroundStateResult solve(const ProblemSpec& spec, const SolverConfig& cfg);

struct ContinuationPoint {
    double p = 0.0;
    double energy = 0.0;
    bool bracketed = false; // false when every restart failed to bracket
    ScalarField field;
};

// Diagnostic continuation in the operator exponent: tv is replaced by the
// p-homogeneous surrogate (1/p)(h^2 sum |grad u|^p + h sum_bd |u|^p) and the
// same Nehari machinery is run for each p. OneLaplacian specs only.
std::vector<ContinuationPoint> p_continuation(const ProblemSpec& spec,
                                              const std::vector<double>& p_list,
                                              const SolverConfig& cfg);

} // namespace nbv
