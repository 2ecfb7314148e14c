#include "nbv/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nbv/errors.hpp"
#include "nbv/rng.hpp"

namespace nbv {

namespace {

double h_norm(const DiscreteDomain& d, const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(d.h * d.h * s);
}

// Gradient of the exact Phi with the nonsmooth pieces regularized at a tiny
// eps; used only to build falsification probes.
ScalarField steepest_direction(const ProblemSpec& spec, const ScalarField& u) {
    const auto& d = u.domain;
    const double eps = 1e-9;
    const VectorField q = spec.functional == Functional::OneLaplacian
                              ? tv_smoothed_flux(u, spec.flavor, eps)
                              : graph_area_flux(u);
    const ScalarField div = divergence(q);
    const double h2 = d.h * d.h;
    const double lam = spec.functional == Functional::OneLaplacian ? 1.0 : spec.lambda;
    ScalarField g(d);
    for (int j = 0; j < d.ny; ++j) {
        for (int i = 0; i < d.nx; ++i) {
            const int c = d.index(i, j);
            const double uc = u.values[c];
            double v = -h2 * div.values[c];
            const int nf = d.boundary_face_count(i, j);
            if (nf > 0) v += d.h * nf * uc / std::sqrt(eps * eps + uc * uc);
            v -= lam * h2 * spec.nl.f(uc);
            g.values[c] = -v;
        }
    }
    return g;
}

} // namespace

CriticalityReport subdiff_check(const ProblemSpec& spec, const ScalarField& u, int n_probes,
                                std::uint64_t seed) {
    if (u.is_zero()) throw ZeroDirection();
    const auto& d = u.domain;
    const double h2 = d.h * d.h;
    const double lam = spec.functional == Functional::OneLaplacian ? 1.0 : spec.lambda;

    const auto I0_of = [&](const ScalarField& v) {
        return spec.functional == Functional::OneLaplacian ? i0(v, spec.flavor) : i0_tilde(v);
    };
    const double I0_u = I0_of(u);

    std::vector<double> fu(u.values.size());
    for (std::size_t c = 0; c < fu.size(); ++c) fu[c] = spec.nl.f(u.values[c]);

    const auto slack = [&](const ScalarField& v) {
        double lin = 0.0;
        for (std::size_t c = 0; c < fu.size(); ++c) lin += fu[c] * (v.values[c] - u.values[c]);
        return I0_of(v) - I0_u - lam * h2 * lin;
    };

    double umax = 0.0;
    for (double v : u.values) umax = std::max(umax, std::abs(v));

    CriticalityReport rep;
    rep.subdiff_min_slack = std::numeric_limits<double>::infinity();
    int count = 0;
    const auto feed = [&](const ScalarField& v) {
        rep.subdiff_min_slack = std::min(rep.subdiff_min_slack, slack(v));
        ++count;
    };

    // Mandatory probes: v = 0 and v = 2u (the ray-limit argument showing
    // critical points lie on the Nehari set).
    feed(ScalarField(d));
    feed(scaled(u, 2.0));

    // Scaled copies around the Nehari point.
    for (double s : {0.5, 0.9, 0.99, 1.01, 1.1, 1.5})
        if (count < n_probes) feed(scaled(u, s));

    // Steepest scaled directions: the strongest cheap falsifier for
    // non-critical fields.
    {
        const ScalarField dir = steepest_direction(spec, u);
        double dmax = 0.0;
        for (double v : dir.values) dmax = std::max(dmax, std::abs(v));
        if (dmax > 0.0) {
            for (double tau : {1e-2, 0.1, 1.0})
                if (count < n_probes) feed(axpy(tau * umax / dmax, dir, u));
        }
    }

    // Randomized families: single-cell bumps and Gaussian perturbations.
    Rng rng(seed);
    while (count < n_probes) {
        const int family = count % 3;
        if (family == 0) {
            ScalarField v = u;
            const int c = rng.uniform_int(d.cells());
            const double a = (rng.uniform01() < 0.5 ? -1.0 : 1.0) *
                             umax * std::pow(10.0, rng.uniform(-2.0, 0.5));
            v.values[static_cast<std::size_t>(c)] += a;
            feed(v);
        } else if (family == 1) {
            ScalarField v = u;
            const double amp = umax * std::pow(10.0, rng.uniform(-3.0, 0.0));
            for (auto& x : v.values) x += amp * rng.normal();
            feed(v);
        } else {
            ScalarField v(d);
            const double amp = umax * std::pow(10.0, rng.uniform(-1.0, 1.0));
            for (auto& x : v.values) x = amp * rng.normal();
            feed(v);
        }
    }

    rep.n_probes = count;
    return rep;
}

double VectorFieldCertificate::max_cellwise_norm() const {
    double m = 0.0;
    for (std::size_t c = 0; c < z.x.size(); ++c)
        m = std::max(m, std::sqrt(z.x[c] * z.x[c] + z.y[c] * z.y[c]));
    return m;
}

namespace {

struct DualState {
    VectorField z;
    std::vector<double> sigma;
};

// Residual r(c) = div z + f(u) - (faces/h) sigma, the cellwise stationarity
// balance of I0 - I. sigma is the trace-term subgradient: pinned to sign(u)
// away from zero, a free slack in [-1,1] on (numerically) zero cells.
std::vector<double> el_residual_vec(const DiscreteDomain& d, const DualState& s,
                                    const std::vector<double>& fu) {
    const ScalarField div = divergence(s.z);
    std::vector<double> r(fu.size());
    for (int j = 0; j < d.ny; ++j) {
        for (int i = 0; i < d.nx; ++i) {
            const int c = d.index(i, j);
            r[c] = div.values[c] + fu[c] -
                   (d.boundary_face_count(i, j) / d.h) * s.sigma[static_cast<std::size_t>(c)];
        }
    }
    return r;
}

} // namespace

VectorFieldCertificate el_certificate(const ScalarField& u, const Nonlinearity& nl,
                                      int max_iters, double tol_el) {
    const auto& d = u.domain;
    const std::size_t n = u.values.size();
    const double h2 = d.h * d.h;

    std::vector<double> fu(n);
    for (std::size_t c = 0; c < n; ++c) fu[c] = nl.f(u.values[c]);

    double umax = 0.0;
    for (double v : u.values) umax = std::max(umax, std::abs(v));
    const double zero_tol = 1e-9 * std::max(1.0, umax);

    // sigma is a variable only on boundary cells where u vanishes.
    std::vector<char> sigma_free(n, 0);
    DualState x;
    x.z = VectorField(d);
    x.sigma.assign(n, 0.0);
    for (int j = 0; j < d.ny; ++j) {
        for (int i = 0; i < d.nx; ++i) {
            const int c = d.index(i, j);
            if (d.boundary_face_count(i, j) == 0) continue;
            const double uc = u.values[static_cast<std::size_t>(c)];
            if (std::abs(uc) > zero_tol)
                x.sigma[static_cast<std::size_t>(c)] = uc > 0.0 ? 1.0 : -1.0;
            else
                sigma_free[static_cast<std::size_t>(c)] = 1;
        }
    }

    // Start from the aligned flux grad u / |grad u|; it realizes the pairing
    // identity exactly wherever the gradient does not vanish.
    {
        const VectorField g = gradient(u);
        for (std::size_t c = 0; c < n; ++c) {
            const double m = std::sqrt(g.x[c] * g.x[c] + g.y[c] * g.y[c]);
            if (m > 0.0) {
                x.z.x[c] = g.x[c] / m;
                x.z.y[c] = g.y[c] / m;
            }
        }
    }

    const auto grad_step = [&](const DualState& s, DualState& out, double step) {
        const std::vector<double> r = el_residual_vec(d, s, fu);
        ScalarField rf(d);
        rf.values = r;
        const VectorField gr = gradient(rf); // -grad r is dJ/dz up to h^2
        for (std::size_t c = 0; c < n; ++c) {
            out.z.x[c] = s.z.x[c] + step * h2 * gr.x[c];
            out.z.y[c] = s.z.y[c] + step * h2 * gr.y[c];
            const double m2 = out.z.x[c] * out.z.x[c] + out.z.y[c] * out.z.y[c];
            if (m2 > 1.0) {
                const double m = std::sqrt(m2);
                out.z.x[c] /= m;
                out.z.y[c] /= m;
            }
        }
        for (int j = 0; j < d.ny; ++j) {
            for (int i = 0; i < d.nx; ++i) {
                const std::size_t c = static_cast<std::size_t>(d.index(i, j));
                if (!sigma_free[c]) {
                    out.sigma[c] = s.sigma[c];
                    continue;
                }
                const double gsig = -h2 * (d.boundary_face_count(i, j) / d.h) * r[c];
                out.sigma[c] = std::clamp(s.sigma[c] - step * gsig, -1.0, 1.0);
            }
        }
    };

    // Lipschitz constant of the quadratic via power iteration on A^T A.
    double L;
    {
        VectorField pz(d);
        std::vector<double> ps(n, 0.0);
        for (std::size_t c = 0; c < n; ++c) {
            pz.x[c] = 1.0;
            pz.y[c] = -0.5;
            if (sigma_free[c]) ps[c] = 0.7;
        }
        double lam_est = 1.0;
        for (int it = 0; it < 40; ++it) {
            // A(p)
            DualState tmp{pz, ps};
            std::vector<double> ap = el_residual_vec(d, tmp, std::vector<double>(n, 0.0));
            // A^T(ap)
            ScalarField apf(d);
            apf.values = ap;
            const VectorField gr = gradient(apf);
            double nrm = 0.0;
            for (std::size_t c = 0; c < n; ++c) {
                pz.x[c] = -gr.x[c];
                pz.y[c] = -gr.y[c];
                nrm += pz.x[c] * pz.x[c] + pz.y[c] * pz.y[c];
            }
            for (int j = 0; j < d.ny; ++j)
                for (int i = 0; i < d.nx; ++i) {
                    const std::size_t c = static_cast<std::size_t>(d.index(i, j));
                    ps[c] = sigma_free[c]
                                ? -(d.boundary_face_count(i, j) / d.h) * ap[c]
                                : 0.0;
                    nrm += ps[c] * ps[c];
                }
            nrm = std::sqrt(nrm);
            if (nrm == 0.0) break;
            lam_est = nrm;
            for (std::size_t c = 0; c < n; ++c) {
                pz.x[c] /= nrm;
                pz.y[c] /= nrm;
                ps[c] /= nrm;
            }
        }
        L = h2 * lam_est * 1.05 + 1e-30;
    }
    const double step = 1.0 / L;

    const double fnorm = h_norm(d, fu);
    const double denom = std::max(1.0, fnorm);

    // FISTA over the cellwise ball and box constraints.
    DualState prev = x;
    double residual = h_norm(d, el_residual_vec(d, x, fu)) / denom;
    int it = 0;
    for (; it < max_iters && residual > tol_el; ++it) {
        DualState y = x;
        const double mom = static_cast<double>(it) / (it + 3.0);
        for (std::size_t c = 0; c < n; ++c) {
            y.z.x[c] = x.z.x[c] + mom * (x.z.x[c] - prev.z.x[c]);
            y.z.y[c] = x.z.y[c] + mom * (x.z.y[c] - prev.z.y[c]);
            y.sigma[c] = x.sigma[c] + mom * (x.sigma[c] - prev.sigma[c]);
        }
        DualState next = x;
        grad_step(y, next, step);
        prev = std::move(x);
        x = std::move(next);
        residual = h_norm(d, el_residual_vec(d, x, fu)) / denom;
    }

    VectorFieldCertificate cert;
    cert.z = x.z;
    cert.boundary_sign = x.sigma;
    cert.divergence_residual = ScalarField(d);
    cert.divergence_residual.values = el_residual_vec(d, x, fu);
    cert.el_residual = residual;
    cert.iterations = it;
    cert.converged = residual <= tol_el;

    const ScalarField div = divergence(x.z);
    double pairing = 0.0;
    for (std::size_t c = 0; c < n; ++c) pairing -= u.values[c] * div.values[c];
    pairing *= h2;
    cert.pairing_gap = std::abs(pairing - tv(u, TvFlavor::Isotropic));
    return cert;
}

double mc_el_residual(const ScalarField& u, double lambda, const Nonlinearity& nl) {
    const auto& d = u.domain;
    const VectorField z = graph_area_flux(u);
    const ScalarField div = divergence(z);
    double num = 0.0, den = 0.0;
    for (int j = 0; j < d.ny; ++j) {
        for (int i = 0; i < d.nx; ++i) {
            if (d.boundary_face_count(i, j) != 0) continue; // trace condition is weak
            const int c = d.index(i, j);
            const double rhs = lambda * nl.f(u.values[c]);
            const double r = div.values[c] + rhs;
            num += r * r;
            den += rhs * rhs;
        }
    }
    if (den == 0.0) return 0.0;
    return std::sqrt(num / den);
}

double nondegeneracy(const ScalarField& u, const Nonlinearity& nl) {
    if (!nl.has_derivative()) throw MissingDerivative();
    const double h2 = u.domain.h * u.domain.h;
    double sum = 0.0;
    for (double v : u.values) sum += nl.fprime(v) * v * v;
    return h2 * sum;
}

} // namespace nbv
