#pragma once
#include <memory>

#include "nbv/bv_calculus.hpp"
#include "nbv/nonlinearity.hpp"

namespace nbv {

enum class Functional { OneLaplacian, MeanCurvature };

// Which energy is being minimized:
//   OneLaplacian:  Phi = I0 - I          (lambda fixed at 1)
//   MeanCurvature: Phi = I0tilde - lambda*I
struct ProblemSpec {
    Functional functional = Functional::OneLaplacian;
    double lambda = 1.0;
    Nonlinearity nl;
    TvFlavor flavor = TvFlavor::Isotropic;
    DiscreteDomain domain;

    static ProblemSpec one_laplacian(const DiscreteDomain& d, Nonlinearity nl,
                                     TvFlavor flavor = TvFlavor::Isotropic);
    static ProblemSpec mean_curvature(const DiscreteDomain& d, Nonlinearity nl, double lambda,
                                      TvFlavor flavor = TvFlavor::Isotropic);

    void validate() const; // throws std::invalid_argument
};

double phi(const ProblemSpec& spec, const ScalarField& u);
double phi_zero(const ProblemSpec& spec); // Phi(0): 0 or |Omega|

// Energy along the ray through a fixed direction w != 0:
//   gamma(t) = Phi(t*w),    g(t) = gamma'(t) = I0'(tw)w - lambda*I'(tw)w.
// Per-direction invariants (norms, power sums, gradient magnitudes) are
// cached at construction, so gamma/g evaluations are cheap inside root loops.
class FiberingMap {
public:
    FiberingMap(const ProblemSpec& spec, ScalarField w); // throws ZeroDirection

    double gamma(double t) const; // t >= 0
    double g_deriv(double t) const; // t > 0

    const ProblemSpec& spec() const { return spec_; }
    const ScalarField& direction() const { return w_; }

private:
    ProblemSpec spec_;
    ScalarField w_;
    double i0_w_ = 0.0;       // I0'(tw)w for OneLaplacian (constant in t)
    double trace_w_ = 0.0;
    double power_sum_ = 0.0;  // h^2 sum |w|^p (Power fast path)
    double power_sum_q_ = 0.0;
    bool fast_reaction_ = false;
    std::vector<double> grad_sq_; // |grad w|^2 per cell (MeanCurvature)
};

struct NehariRoot {
    double t_w = 0.0;
    double residual = 0.0; // |g(t_w)| scaled as in nehari_residual
    double t_lo = 0.0, t_hi = 0.0;
    int iterations = 0;
};

// Unique positive root of g by bracketed bisection: halve down from 1 until
// g > 0, double up until g < 0, then bisect to relative width tol_root.
// Throws BracketFailureLow / BracketFailureHigh / ZeroDirection.
NehariRoot nehari_project(const FiberingMap& fib, double tol_root = 1e-10);

// |I0'(u)u - lambda*I'(u)u| / max(1, I0'(u)u); membership in the Nehari set
// means this is below tolerance.
double nehari_residual(const ProblemSpec& spec, const ScalarField& u);

} // namespace nbv
