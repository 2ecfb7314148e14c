#include "nbv/ground_state.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "nbv/errors.hpp"
#include "nbv/rng.hpp"
#include "ray_root.hpp"

namespace nbv {

void SolverConfig::validate() const {
    if (restarts < 1) throw std::invalid_argument("SolverConfig: restarts must be >= 1");
    if (eps_schedule.empty()) throw std::invalid_argument("SolverConfig: empty smoothing schedule");
    double prev = std::numeric_limits<double>::infinity();
    for (double e : eps_schedule) {
        if (!(e > 0.0) || !(e < prev))
            throw std::invalid_argument("SolverConfig: eps schedule must be positive and strictly decreasing");
        prev = e;
    }
    if (!(eps_schedule.back() < 1e-5))
        throw std::invalid_argument("SolverConfig: eps schedule must end below 1e-5");
    if (!(step_init > 0.0)) throw std::invalid_argument("SolverConfig: step_init must be positive");
    if (!(backtrack > 0.0 && backtrack < 1.0))
        throw std::invalid_argument("SolverConfig: backtrack factor must lie in (0,1)");
    if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
    if (!(psi_stop_tol > 0.0)) throw std::invalid_argument("SolverConfig: psi_stop_tol must be positive");
    if (workers < 1) throw std::invalid_argument("SolverConfig: workers must be >= 1");
    if (certificate_probes < 1) throw std::invalid_argument("SolverConfig: certificate_probes must be >= 1");
}

double smoothed_phi(const ProblemSpec& spec, const ScalarField& u, double eps) {
    if (eps < 0.0) throw std::invalid_argument("smoothed_phi: eps must be nonnegative");
    if (spec.functional == Functional::OneLaplacian)
        return tv_smoothed(u, spec.flavor, eps) + boundary_trace_smoothed(u, eps) -
               I_functional(u, spec.nl);
    return graph_area(u) + boundary_trace_smoothed(u, eps) -
           spec.lambda * I_functional(u, spec.nl);
}

std::pair<double, double> reduced_objective(const ProblemSpec& spec, const ScalarField& w,
                                            double eps) {
    const double n = bv_norm(w, spec.flavor);
    if (n == 0.0) throw ZeroDirection();
    const ScalarField wn = scaled(w, 1.0 / n);
    const FiberingMap fib(spec, wn);
    const NehariRoot root = nehari_project(fib);
    return {smoothed_phi(spec, scaled(wn, root.t_w), eps), root.t_w};
}

namespace {

double l2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// d/du(c) of the smoothed Phi. The gradient-dependent part goes through the
// exact negative adjoint of the forward-difference gradient.
std::vector<double> phi_eps_gradient(const ProblemSpec& spec, const ScalarField& u, double eps) {
    const auto& d = u.domain;
    const VectorField q = spec.functional == Functional::OneLaplacian
                              ? tv_smoothed_flux(u, spec.flavor, eps)
                              : graph_area_flux(u);
    const ScalarField div = divergence(q);
    const double h2 = d.h * d.h;
    const double lam = spec.functional == Functional::OneLaplacian ? 1.0 : spec.lambda;
    const double e2 = eps * eps;
    std::vector<double> g(u.values.size());
    for (int j = 0; j < d.ny; ++j) {
        for (int i = 0; i < d.nx; ++i) {
            const int c = d.index(i, j);
            const double uc = u.values[c];
            double v = -h2 * div.values[c];
            const int nf = d.boundary_face_count(i, j);
            if (nf > 0) v += d.h * nf * uc / std::sqrt(e2 + uc * uc);
            v -= lam * h2 * spec.nl.f(uc);
            g[c] = v;
        }
    }
    return g;
}

// Native problems behind the generic restart engine.
struct SpecPolicy {
    const ProblemSpec& spec;

    double norm(const ScalarField& u) const { return bv_norm(u, spec.flavor); }
    double project(const ScalarField& wn, double tol) const {
        const FiberingMap fib(spec, wn);
        return nehari_project(fib, tol).t_w;
    }
    double phi_eps(const ScalarField& u, double eps) const { return smoothed_phi(spec, u, eps); }
    std::vector<double> grad_phi_eps(const ScalarField& u, double eps) const {
        return phi_eps_gradient(spec, u, eps);
    }
    double phi_exact(const ScalarField& u) const { return phi(spec, u); }
};

// p-homogeneous surrogate of I0 for the continuation diagnostic:
//   J_p(u) = (1/p) (h^2 sum |grad u|^p + h sum_bd |u|^p),
// which recovers I0 (isotropic) at p = 1.
struct SurrogatePolicy {
    const ProblemSpec& spec;
    double p_op;

    double jp(const ScalarField& u) const {
        const VectorField g = gradient(u);
        const auto& d = u.domain;
        double grad_sum = 0.0;
        for (std::size_t c = 0; c < g.x.size(); ++c) {
            const double m2 = g.x[c] * g.x[c] + g.y[c] * g.y[c];
            if (m2 > 0.0) grad_sum += std::pow(m2, 0.5 * p_op);
        }
        double tr = 0.0;
        for (const BoundaryFace& f : d.boundary_faces())
            tr += std::pow(std::abs(u.at(f.i, f.j)), p_op);
        return (d.h * d.h * grad_sum + d.h * tr) / p_op;
    }

    double norm(const ScalarField& u) const { return bv_norm(u, spec.flavor); }

    double project(const ScalarField& wn, double tol) const {
        const double J = jp(wn);
        if (J == 0.0) throw ZeroDirection();
        const bool fast = spec.nl.kind == Nonlinearity::Kind::Power;
        double B = 0.0;
        if (fast) {
            const double h2 = wn.domain.h * wn.domain.h;
            for (double v : wn.values) B += std::pow(std::abs(v), spec.nl.p);
            B *= h2;
        }
        auto gfun = [&](double t) {
            const double principal = p_op * std::pow(t, p_op - 1.0) * J;
            const double reaction = fast ? std::pow(t, spec.nl.p - 1.0) * B
                                         : I_dirderiv_ray(wn, t, spec.nl);
            return principal - reaction;
        };
        auto scale = [&](double t) {
            return std::max(1.0, p_op * std::pow(t, p_op - 1.0) * J);
        };
        return detail::bracket_bisect(gfun, scale, tol).t_w;
    }

    double phi_eps(const ScalarField& u, double eps) const {
        const VectorField g = gradient(u);
        const auto& d = u.domain;
        const double e2 = eps * eps;
        const double ep = std::pow(eps, p_op);
        double grad_sum = 0.0;
        for (std::size_t c = 0; c < g.x.size(); ++c) {
            const double m2 = g.x[c] * g.x[c] + g.y[c] * g.y[c];
            grad_sum += std::pow(e2 + m2, 0.5 * p_op) - ep;
        }
        double tr = 0.0;
        for (const BoundaryFace& f : d.boundary_faces()) {
            const double v = u.at(f.i, f.j);
            tr += std::pow(e2 + v * v, 0.5 * p_op) - ep;
        }
        return (d.h * d.h * grad_sum + d.h * tr) / p_op - I_functional(u, spec.nl);
    }

    std::vector<double> grad_phi_eps(const ScalarField& u, double eps) const {
        const auto& d = u.domain;
        VectorField q = gradient(u);
        const double e2 = eps * eps;
        for (std::size_t c = 0; c < q.x.size(); ++c) {
            const double w = std::pow(e2 + q.x[c] * q.x[c] + q.y[c] * q.y[c], 0.5 * p_op - 1.0);
            q.x[c] *= w;
            q.y[c] *= w;
        }
        const ScalarField div = divergence(q);
        const double h2 = d.h * d.h;
        std::vector<double> g(u.values.size());
        for (int j = 0; j < d.ny; ++j) {
            for (int i = 0; i < d.nx; ++i) {
                const int c = d.index(i, j);
                const double uc = u.values[c];
                double v = -h2 * div.values[c];
                const int nf = d.boundary_face_count(i, j);
                if (nf > 0) v += d.h * nf * std::pow(e2 + uc * uc, 0.5 * p_op - 1.0) * uc;
                v -= h2 * spec.nl.f(uc);
                g[c] = v;
            }
        }
        return g;
    }

    double phi_exact(const ScalarField& u) const { return jp(u) - I_functional(u, spec.nl); }
};

struct RestartOutcome {
    bool ok = false;
    std::string error;
    ScalarField w; // normalized direction at exit
    double t_w = 0.0;
    double energy = std::numeric_limits<double>::quiet_NaN(); // exact Phi at t_w * w
    std::vector<TraceRow> trace;
};

constexpr double kProjectTol = 1e-10;

// One seeded restart: random direction, then projected descent with
// smoothing continuation. Never throws; failures are recorded in the outcome.
template <class Policy>
RestartOutcome run_restart(const Policy& P, const DiscreteDomain& domain, const SolverConfig& cfg,
                           int restart, std::uint64_t stream) {
    RestartOutcome out;
    Rng rng = Rng::for_stream(cfg.seed, stream);
    ScalarField w(domain);
    for (auto& v : w.values) v = rng.normal();
    try {
        const double n0 = P.norm(w);
        if (n0 == 0.0) throw ZeroDirection();
        w = scaled(w, 1.0 / n0);
        double t_w = P.project(w, kProjectTol);

        for (double eps : cfg.eps_schedule) {
            double psi = P.phi_eps(scaled(w, t_w), eps);
            double step = cfg.step_init;
            int stall = 0;
            for (int iter = 0; iter < cfg.max_iters; ++iter) {
                const ScalarField u = scaled(w, t_w);
                std::vector<double> g = P.grad_phi_eps(u, eps);
                const double gn = l2(g);
                if (gn == 0.0) break;
                const double wl2 = l2(w.values);
                const double dir_scale = wl2 / gn; // step 1 moves by ~|w|_2

                bool accepted = false;
                double alpha = step;
                ScalarField w_new;
                double psi_new = 0.0, t_new = 0.0;
                while (alpha > 1e-14) {
                    ScalarField cand = w;
                    const double a = alpha * dir_scale;
                    for (std::size_t k = 0; k < cand.values.size(); ++k)
                        cand.values[k] -= a * g[k];
                    const double cn = P.norm(cand);
                    if (cn > 0.0) {
                        cand = scaled(cand, 1.0 / cn);
                        try {
                            const double t_c = P.project(cand, kProjectTol);
                            const double psi_c = P.phi_eps(scaled(cand, t_c), eps);
                            if (psi_c < psi) {
                                accepted = true;
                                w_new = std::move(cand);
                                psi_new = psi_c;
                                t_new = t_c;
                                break;
                            }
                        } catch (const BracketFailureLow&) {
                        } catch (const BracketFailureHigh&) {
                        }
                    }
                    alpha *= cfg.backtrack;
                }
                if (!accepted) break;

                const double decrease = psi - psi_new;
                w = std::move(w_new);
                psi = psi_new;
                t_w = t_new;
                out.trace.push_back({restart, eps, iter, psi, t_w, alpha});
                step = std::min(alpha / cfg.backtrack, 4.0 * cfg.step_init);
                if (decrease < cfg.psi_stop_tol * std::max(1.0, std::abs(psi))) {
                    if (++stall >= 3) break;
                } else {
                    stall = 0;
                }
            }
        }

        out.w = std::move(w);
        out.t_w = t_w;
        out.energy = P.phi_exact(scaled(out.w, t_w));
        out.ok = true;
    } catch (const std::exception& e) {
        out.ok = false;
        out.error = e.what();
    }
    return out;
}

template <class Policy>
std::vector<RestartOutcome> run_all_restarts(const Policy& P, const DiscreteDomain& domain,
                                             const SolverConfig& cfg, std::uint64_t stream_base) {
    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));
    if (cfg.workers == 1) {
        for (int r = 0; r < cfg.restarts; ++r)
            outcomes[static_cast<std::size_t>(r)] =
                run_restart(P, domain, cfg, r, stream_base + static_cast<std::uint64_t>(r));
        return outcomes;
    }
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int r = next.fetch_add(1);
            if (r >= cfg.restarts) return;
            outcomes[static_cast<std::size_t>(r)] =
                run_restart(P, domain, cfg, r, stream_base + static_cast<std::uint64_t>(r));
        }
    };
    std::vector<std::thread> pool;
    const int nthreads = std::min(cfg.workers, cfg.restarts);
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return outcomes;
}

// Lowest energy wins; ties break toward the smaller restart index, so the
// merge does not depend on scheduling.
int best_restart_index(const std::vector<RestartOutcome>& outcomes) {
    int best = -1;
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
        if (!outcomes[r].ok || !std::isfinite(outcomes[r].energy)) continue;
        if (best < 0 || outcomes[r].energy < outcomes[static_cast<std::size_t>(best)].energy)
            best = static_cast<int>(r);
    }
    return best;
}

} // namespace

GroundStateResult solve(const ProblemSpec& spec, const SolverConfig& cfg) {
    spec.validate();
    cfg.validate();
    const AuditReport rep = audit(spec.nl, default_audit_grid());
    if (!rep.all_pass) {
        std::string names;
        for (const auto& c : rep.checks)
            if (!c.pass) names += (names.empty() ? "" : ", ") + c.name;
        throw AuditFailed("nonlinearity audit failed: " + names);
    }

    const SpecPolicy policy{spec};
    const auto outcomes = run_all_restarts(policy, spec.domain, cfg, 0);

    const int best = best_restart_index(outcomes);
    if (best < 0) {
        std::string why = "every restart failed to bracket";
        for (const auto& o : outcomes)
            if (!o.ok && !o.error.empty()) {
                why += "; last error: " + o.error;
                break;
            }
        throw AllRestartsFailed(why);
    }

    GroundStateResult res;
    res.best_restart = best;
    res.restart_energies.reserve(outcomes.size());
    for (const auto& o : outcomes) res.restart_energies.push_back(o.energy);
    for (const auto& o : outcomes)
        res.trace.insert(res.trace.end(), o.trace.begin(), o.trace.end());

    // Final tight projection of the winning direction on the exact
    // (unsmoothed) fibering; all certificates are computed at eps = 0.
    const ScalarField& w_best = outcomes[static_cast<std::size_t>(best)].w;
    const FiberingMap fib(spec, w_best);
    const NehariRoot root = nehari_project(fib, 1e-12);
    res.u_star = scaled(w_best, root.t_w);
    res.energy = phi(spec, res.u_star);
    res.nehari_residual_value = nehari_residual(spec, res.u_star);

    res.certificate = subdiff_check(spec, res.u_star, cfg.certificate_probes,
                                    cfg.seed ^ 0x5EEDC0DE5EEDC0DEULL);
    if (spec.nl.has_derivative()) res.certificate.nondegeneracy = nondegeneracy(res.u_star, spec.nl);
    return res;
}

std::vector<ContinuationPoint> p_continuation(const ProblemSpec& spec,
                                              const std::vector<double>& p_list,
                                              const SolverConfig& cfg) {
    if (spec.functional != Functional::OneLaplacian)
        throw std::invalid_argument("p_continuation requires a OneLaplacian spec");
    cfg.validate();
    double prev = 2.0 + 1e-9;
    for (double p : p_list) {
        if (!(p > 1.0 && p <= 2.0 && p < prev))
            throw std::invalid_argument("p_continuation: p_list must be decreasing within (1, 2]");
        prev = p;
    }

    std::vector<ContinuationPoint> points;
    points.reserve(p_list.size());
    for (std::size_t pi = 0; pi < p_list.size(); ++pi) {
        const SurrogatePolicy policy{spec, p_list[pi]};
        const std::uint64_t stream_base = (static_cast<std::uint64_t>(pi) + 1) << 24;
        const auto outcomes = run_all_restarts(policy, spec.domain, cfg, stream_base);
        ContinuationPoint pt;
        pt.p = p_list[pi];
        const int best = best_restart_index(outcomes);
        if (best >= 0) {
            const auto& o = outcomes[static_cast<std::size_t>(best)];
            pt.bracketed = true;
            pt.energy = o.energy;
            pt.field = scaled(o.w, o.t_w);
        } else {
            pt.bracketed = false;
            pt.energy = std::numeric_limits<double>::quiet_NaN();
        }
        points.push_back(std::move(pt));
    }
    return points;
}

} // namespace nbv
