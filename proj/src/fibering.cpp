#include "nbv/fibering.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nbv/errors.hpp"
#include "ray_root.hpp"

namespace nbv {

ProblemSpec ProblemSpec::one_laplacian(const DiscreteDomain& d, Nonlinearity nl, TvFlavor flavor) {
    ProblemSpec s;
    s.functional = Functional::OneLaplacian;
    s.lambda = 1.0; // (P1) carries no parameter
    s.nl = std::move(nl);
    s.flavor = flavor;
    s.domain = d;
    return s;
}

ProblemSpec ProblemSpec::mean_curvature(const DiscreteDomain& d, Nonlinearity nl, double lambda,
                                        TvFlavor flavor) {
    ProblemSpec s;
    s.functional = Functional::MeanCurvature;
    s.lambda = lambda;
    s.nl = std::move(nl);
    s.flavor = flavor;
    s.domain = d;
    s.validate();
    return s;
}

void ProblemSpec::validate() const {
    if (functional == Functional::OneLaplacian && lambda != 1.0)
        throw std::invalid_argument("OneLaplacian problem carries no lambda (must be 1)");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("lambda must be positive and finite");
    if (!nl.f || !nl.F) throw std::invalid_argument("nonlinearity has no evaluators");
}

double phi(const ProblemSpec& spec, const ScalarField& u) {
    if (spec.functional == Functional::OneLaplacian)
        return i0(u, spec.flavor) - I_functional(u, spec.nl);
    return i0_tilde(u) - spec.lambda * I_functional(u, spec.nl);
}

double phi_zero(const ProblemSpec& spec) {
    return spec.functional == Functional::OneLaplacian ? 0.0 : spec.domain.area();
}

FiberingMap::FiberingMap(const ProblemSpec& spec, ScalarField w)
    : spec_(spec), w_(std::move(w)) {
    if (w_.is_zero()) throw ZeroDirection();
    trace_w_ = boundary_trace_term(w_);
    i0_w_ = i0(w_, spec_.flavor);
    const auto kind = spec_.nl.kind;
    fast_reaction_ = kind == Nonlinearity::Kind::Power || kind == Nonlinearity::Kind::PowerSum;
    if (fast_reaction_) {
        const double h2 = w_.domain.h * w_.domain.h;
        double sp = 0.0, sq = 0.0;
        for (double v : w_.values) {
            sp += std::pow(std::abs(v), spec_.nl.p);
            if (kind == Nonlinearity::Kind::PowerSum) sq += std::pow(std::abs(v), spec_.nl.q);
        }
        if (kind == Nonlinearity::Kind::Power) {
            power_sum_ = h2 * sp;
            power_sum_q_ = 0.0;
        } else {
            power_sum_ = spec_.nl.c1 * h2 * sp;
            power_sum_q_ = spec_.nl.c2 * h2 * sq;
        }
    }
    if (spec_.functional == Functional::MeanCurvature) {
        const VectorField g = gradient(w_);
        grad_sq_.resize(g.x.size());
        for (std::size_t c = 0; c < g.x.size(); ++c)
            grad_sq_[c] = g.x[c] * g.x[c] + g.y[c] * g.y[c];
    }
}

double FiberingMap::gamma(double t) const {
    if (t < 0.0) throw std::invalid_argument("gamma: t must be nonnegative");
    if (t == 0.0) return phi_zero(spec_);
    double reaction;
    if (fast_reaction_) {
        const double p = spec_.nl.p;
        reaction = std::pow(t, p) / p * power_sum_;
        if (spec_.nl.kind == Nonlinearity::Kind::PowerSum)
            reaction += std::pow(t, spec_.nl.q) / spec_.nl.q * power_sum_q_;
    } else {
        reaction = I_functional(scaled(w_, t), spec_.nl);
    }
    if (spec_.functional == Functional::OneLaplacian) return t * i0_w_ - reaction;

    const double h2 = w_.domain.h * w_.domain.h;
    double area = 0.0;
    const double t2 = t * t;
    for (double g2 : grad_sq_) area += std::sqrt(1.0 + t2 * g2);
    return h2 * area + t * trace_w_ - spec_.lambda * reaction;
}

double FiberingMap::g_deriv(double t) const {
    if (!(t > 0.0)) throw std::invalid_argument("g_deriv: t must be positive");
    double reaction;
    if (fast_reaction_) {
        reaction = std::pow(t, spec_.nl.p - 1.0) * power_sum_;
        if (spec_.nl.kind == Nonlinearity::Kind::PowerSum)
            reaction += std::pow(t, spec_.nl.q - 1.0) * power_sum_q_;
    } else {
        reaction = I_dirderiv_ray(w_, t, spec_.nl);
    }
    if (spec_.functional == Functional::OneLaplacian) return i0_w_ - reaction;

    const double h2 = w_.domain.h * w_.domain.h;
    const double inv_t2 = 1.0 / (t * t);
    double area_deriv = 0.0;
    for (double g2 : grad_sq_)
        if (g2 > 0.0) area_deriv += g2 / std::sqrt(inv_t2 + g2);
    return h2 * area_deriv + trace_w_ - spec_.lambda * reaction;
}

namespace {

// I0'(t w)w along the ray: constant for the 1-homogeneous I0, monotone for
// the area functional. Used to scale the root residual tolerance.
double ray_i0_deriv(const FiberingMap& fib, double t) {
    if (fib.spec().functional == Functional::OneLaplacian)
        return i0(fib.direction(), fib.spec().flavor);
    return i0_tilde_dirderiv_ray(fib.direction(), t);
}

} // namespace

NehariRoot nehari_project(const FiberingMap& fib, double tol_root) {
    const auto r = detail::bracket_bisect(
        [&](double t) { return fib.g_deriv(t); },
        [&](double t) { return std::max(1.0, std::abs(ray_i0_deriv(fib, t))); }, tol_root);
    NehariRoot root;
    root.t_w = r.t_w;
    root.residual = r.g_abs;
    root.t_lo = r.t_lo;
    root.t_hi = r.t_hi;
    root.iterations = r.evals;
    return root;
}

double nehari_residual(const ProblemSpec& spec, const ScalarField& u) {
    if (u.is_zero()) throw ZeroDirection();
    const double lhs = spec.functional == Functional::OneLaplacian
                           ? i0(u, spec.flavor)
                           : i0_tilde_dirderiv_ray(u, 1.0);
    const double rhs = spec.lambda * I_dirderiv_ray(u, 1.0, spec.nl);
    return std::abs(lhs - rhs) / std::max(1.0, lhs);
}

} // namespace nbv
