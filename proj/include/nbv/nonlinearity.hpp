#pragma once
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nbv/grid.hpp"

namespace nbv {

// Reaction nonlinearity f with primitive F(s) = int_0^s f. The subcritical
// growth exponent p must lie in (1, 2) in two dimensions; out-of-range values
// are representable so the audit can flag them.
struct Nonlinearity {
    enum class Kind { Power, PowerSum, Custom };

    Kind kind = Kind::Power;
    double p = 1.5;              // growth exponent of (f3)
    double q = 0.0, c1 = 0.0, c2 = 0.0; // PowerSum extras

    std::function<double(double)> f;
    std::function<double(double)> F;
    std::function<double(double)> fprime; // optional; empty if absent

    bool has_derivative() const { return static_cast<bool>(fprime); }

    // f(s) = |s|^(p-2) s,  F(s) = |s|^p / p.
    static Nonlinearity power(double p);

    // f(s) = c1 |s|^(p-2) s + c2 |s|^(q-2) s.
    static Nonlinearity power_sum(double p, double q, double c1, double c2);

    // Arbitrary f with declared growth exponent. When no primitive is given,
    // F is evaluated by adaptive quadrature of f.
    static Nonlinearity custom(std::function<double(double)> f, double growth_p,
                               std::function<double(double)> F = {},
                               std::function<double(double)> fprime = {});
};

double f_eval(const Nonlinearity& nl, double s);
double F_eval(const Nonlinearity& nl, double s);

struct HypothesisCheck {
    std::string name;     // "f1".."f5", "F_primitive", "f_epsilon"
    bool pass = false;
    double witness = 0.0; // sample point of the worst violation, if any
    std::string detail;
};

struct AuditReport {
    std::vector<HypothesisCheck> checks;
    bool all_pass = false;
    std::vector<std::string> warnings;
    double c1_fit = 0.0, c2_fit = 0.0;    // least constants realizing (f3) on the grid
    double eps_pair = 0.0, C_eps = 0.0;   // empirical pair realizing |F| <= eps|s| + C|s|^p

    const HypothesisCheck* check(const std::string& name) const;
};

// Log-spaced audit grid over [-limit, limit], symmetric, including 0.
std::vector<double> default_audit_grid(double limit = 1e3, int per_decade = 16);

// Numerical audit of (f1)-(f5) on a finite sample grid. Universally
// quantified hypotheses can only be falsified, not proven; the report carries
// witnesses for every failure.
AuditReport audit(const Nonlinearity& nl, const std::vector<double>& s_grid);

// I(u) = h^2 * sum_c F(u(c)).
double I_functional(const ScalarField& u, const Nonlinearity& nl);

// d/ds I(t*u + s*u) at s=0, i.e. h^2 * sum_c f(t*u(c)) u(c). Requires t > 0.
double I_dirderiv_ray(const ScalarField& u, double t, const Nonlinearity& nl);

} // namespace nbv
