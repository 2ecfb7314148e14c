#include "nbv/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace nbv {

namespace {

// |s|^(p-2) s, continuously extended by 0 at s = 0.
double power_f(double p, double s) {
    if (s == 0.0) return 0.0;
    return std::pow(std::abs(s), p - 2.0) * s;
}

double power_F(double p, double s) { return std::pow(std::abs(s), p) / p; }

// (p-1)|s|^(p-2); infinite at 0 for p < 2, evaluated as 0 there. The
// diagnostic integrand f'(u)u^2 = (p-1)|u|^p stays finite either way.
double power_fprime(double p, double s) {
    if (s == 0.0) return 0.0;
    return (p - 1.0) * std::pow(std::abs(s), p - 2.0);
}

} // namespace

Nonlinearity Nonlinearity::power(double p) {
    Nonlinearity nl;
    nl.kind = Kind::Power;
    nl.p = p;
    nl.f = [p](double s) { return power_f(p, s); };
    nl.F = [p](double s) { return power_F(p, s); };
    nl.fprime = [p](double s) { return power_fprime(p, s); };
    return nl;
}

Nonlinearity Nonlinearity::power_sum(double p, double q, double c1, double c2) {
    Nonlinearity nl;
    nl.kind = Kind::PowerSum;
    nl.p = p;
    nl.q = q;
    nl.c1 = c1;
    nl.c2 = c2;
    nl.f = [=](double s) { return c1 * power_f(p, s) + c2 * power_f(q, s); };
    nl.F = [=](double s) { return c1 * power_F(p, s) + c2 * power_F(q, s); };
    nl.fprime = [=](double s) { return c1 * power_fprime(p, s) + c2 * power_fprime(q, s); };
    return nl;
}

Nonlinearity Nonlinearity::custom(std::function<double(double)> f, double growth_p,
                                  std::function<double(double)> F,
                                  std::function<double(double)> fprime) {
    Nonlinearity nl;
    nl.kind = Kind::Custom;
    nl.p = growth_p;
    nl.f = std::move(f);
    nl.fprime = std::move(fprime);
    if (F) {
        nl.F = std::move(F);
    } else {
        auto fc = nl.f;
        nl.F = [fc](double s) {
            if (s == 0.0) return 0.0;
            boost::math::quadrature::tanh_sinh<double> integrator;
            const double a = std::min(0.0, s), b = std::max(0.0, s);
            const double v = integrator.integrate(fc, a, b, 1e-12);
            return s > 0.0 ? v : -v;
        };
    }
    return nl;
}

double f_eval(const Nonlinearity& nl, double s) { return nl.f(s); }
double F_eval(const Nonlinearity& nl, double s) { return nl.F(s); }

const HypothesisCheck* AuditReport::check(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::vector<double> default_audit_grid(double limit, int per_decade) {
    std::vector<double> grid;
    const double lo = 1e-8;
    const int steps = static_cast<int>(std::ceil(per_decade * std::log10(limit / lo)));
    grid.push_back(0.0);
    for (int k = 0; k <= steps; ++k) {
        const double s = lo * std::pow(10.0, static_cast<double>(k) / per_decade);
        if (s > limit) break;
        grid.push_back(s);
        grid.push_back(-s);
    }
    std::sort(grid.begin(), grid.end());
    return grid;
}

AuditReport audit(const Nonlinearity& nl, const std::vector<double>& s_grid) {
    if (s_grid.empty()) throw std::invalid_argument("audit: empty sample grid");
    AuditReport rep;

    const double s_max = std::max(std::abs(s_grid.front()), std::abs(s_grid.back()));

    // (f1) continuity: finite values everywhere, and no blow-up between
    // neighboring samples (jump bounded relative to scale).
    {
        HypothesisCheck c{"f1", true, 0.0, "finite on the sample grid"};
        for (double s : s_grid) {
            const double v = nl.f(s);
            if (!std::isfinite(v)) {
                c.pass = false;
                c.witness = s;
                c.detail = "f is not finite";
                break;
            }
        }
        rep.checks.push_back(c);
    }

    // (f2) f(s) = o(1) as s -> 0: f(0) = 0 and |f| decays monotonically along
    // s = +-10^-k. An absolute threshold alone would reject legitimate slow
    // decays such as |s|^0.1.
    {
        HypothesisCheck c{"f2", true, 0.0, "f decays to 0 at the origin"};
        if (std::abs(nl.f(0.0)) > 1e-15) {
            c.pass = false;
            c.detail = "f(0) != 0";
        } else {
            for (double sign : {1.0, -1.0}) {
                double prev = std::abs(nl.f(sign * 1e-2));
                const double first = prev;
                for (int k = 3; k <= 8; ++k) {
                    const double cur = std::abs(nl.f(sign * std::pow(10.0, -k)));
                    if (cur > prev * (1.0 + 1e-9) + 1e-15) {
                        c.pass = false;
                        c.witness = sign * std::pow(10.0, -k);
                        c.detail = "|f| does not decay toward 0";
                    }
                    prev = cur;
                }
                const double last = std::abs(nl.f(sign * 1e-8));
                const bool small = last <= 1e-9;
                const bool shrunk = last <= 0.5 * first || first == 0.0;
                if (!small && !shrunk) {
                    c.pass = false;
                    c.witness = sign * 1e-8;
                    c.detail = "|f| does not tend to 0";
                }
            }
        }
        rep.checks.push_back(c);
    }

    // (f3) subcritical growth: p in (1, 1*) with 1* = 2 for N = 2, plus the
    // least (c1, c2) realizing |f(s)| <= c1 + c2 |s|^(p-1) on the grid.
    {
        HypothesisCheck c{"f3", true, 0.0, ""};
        if (!(nl.p > 1.0 && nl.p < 2.0)) {
            c.pass = false;
            c.witness = nl.p;
            c.detail = "growth exponent p outside (1, 2) for N = 2 (1* = 2)";
        } else {
            double c1_fit = 0.0, c2_fit = 0.0;
            for (double s : s_grid) {
                const double a = std::abs(nl.f(s));
                if (std::abs(s) <= 1.0)
                    c1_fit = std::max(c1_fit, a);
                else
                    c2_fit = std::max(c2_fit, a / std::pow(std::abs(s), nl.p - 1.0));
            }
            rep.c1_fit = std::max(c1_fit, 1e-12);
            rep.c2_fit = std::max(c2_fit, 1e-12);
            std::ostringstream os;
            os << "bound holds with c1 = " << rep.c1_fit << ", c2 = " << rep.c2_fit;
            c.detail = os.str();
        }
        rep.checks.push_back(c);
    }

    // (f4) F(t)/t -> +-infinity: monotone growth of F(t)/t along t = 2^k and
    // the mirrored decay for t -> -infinity.
    {
        HypothesisCheck c{"f4", true, 0.0, "F(t)/t grows monotonically along t = 2^k"};
        double prev_pos = F_eval(nl, 2.0) / 2.0;
        double prev_neg = F_eval(nl, -2.0) / -2.0;
        for (int k = 2; k <= 20; ++k) {
            const double t = std::pow(2.0, k);
            const double rp = F_eval(nl, t) / t;
            const double rn = F_eval(nl, -t) / -t;
            if (!(rp > prev_pos)) {
                c.pass = false;
                c.witness = t;
                c.detail = "F(t)/t fails to grow at t -> +inf";
                break;
            }
            if (!(rn < prev_neg)) {
                c.pass = false;
                c.witness = -t;
                c.detail = "F(t)/t fails to diverge at t -> -inf";
                break;
            }
            prev_pos = rp;
            prev_neg = rn;
        }
        rep.checks.push_back(c);
    }

    // (f5) f increasing. Built-ins must be strictly increasing; a merely
    // non-decreasing custom f passes with a warning.
    {
        HypothesisCheck c{"f5", true, 0.0, "f is increasing on the sample grid"};
        bool strict = true;
        for (std::size_t k = 1; k < s_grid.size(); ++k) {
            const double a = nl.f(s_grid[k - 1]);
            const double b = nl.f(s_grid[k]);
            const double scale = std::max({1.0, std::abs(a), std::abs(b)});
            if (b < a - 1e-12 * scale) {
                c.pass = false;
                c.witness = s_grid[k];
                c.detail = "f decreases between consecutive samples";
                break;
            }
            if (b <= a) strict = false;
        }
        if (c.pass && !strict) {
            if (nl.kind == Nonlinearity::Kind::Custom) {
                rep.warnings.push_back("f5: custom f is non-decreasing but not strictly increasing");
            } else {
                c.pass = false;
                c.detail = "built-in f must be strictly increasing";
            }
        }
        rep.checks.push_back(c);
    }

    // F(0) = 0 and F' = f by finite differences on a subsample.
    {
        HypothesisCheck c{"F_primitive", true, 0.0, "F(0) = 0 and F' = f by central differences"};
        if (std::abs(F_eval(nl, 0.0)) > 1e-14) {
            c.pass = false;
            c.detail = "F(0) != 0";
        } else {
            const std::size_t stride = std::max<std::size_t>(1, s_grid.size() / 64);
            for (std::size_t k = 0; k < s_grid.size(); k += stride) {
                const double s = s_grid[k];
                // Step scaled to |s|: F can have unbounded curvature at 0.
                const double d = s == 0.0 ? 1e-5 : 1e-5 * std::abs(s);
                const double fd = (F_eval(nl, s + d) - F_eval(nl, s - d)) / (2.0 * d);
                const double fv = nl.f(s);
                if (std::abs(fd - fv) > 1e-5 * std::max(1.0, std::abs(fv))) {
                    c.pass = false;
                    c.witness = s;
                    c.detail = "central difference of F does not match f";
                    break;
                }
            }
        }
        rep.checks.push_back(c);
    }

    // Empirical (eps, C_eps) realizing |F(s)| <= eps|s| + C_eps|s|^p on the grid.
    {
        HypothesisCheck c{"f_epsilon", true, 0.0, ""};
        const double eps = 0.1;
        double C = 0.0;
        for (double s : s_grid) {
            if (s == 0.0) continue;
            const double need = (std::abs(F_eval(nl, s)) - eps * std::abs(s)) /
                                std::pow(std::abs(s), nl.p);
            C = std::max(C, need);
        }
        rep.eps_pair = eps;
        rep.C_eps = std::max(C, 0.0);
        std::ostringstream os;
        os << "|F(s)| <= " << eps << "|s| + " << rep.C_eps << "|s|^p on the grid, |s| <= " << s_max;
        c.detail = os.str();
        rep.checks.push_back(c);
    }

    rep.all_pass = true;
    for (const auto& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;
    return rep;
}

double I_functional(const ScalarField& u, const Nonlinearity& nl) {
    const double h2 = u.domain.h * u.domain.h;
    double sum = 0.0;
    for (double v : u.values) sum += nl.F(v);
    return h2 * sum;
}

double I_dirderiv_ray(const ScalarField& u, double t, const Nonlinearity& nl) {
    if (!(t > 0.0)) throw std::invalid_argument("I_dirderiv_ray: t must be positive");
    const double h2 = u.domain.h * u.domain.h;
    double sum = 0.0;
    for (double v : u.values) sum += nl.f(t * v) * v;
    return h2 * sum;
}

} // namespace nbv
