#include "nbv/bv_calculus.hpp"

#include <cmath>
#include <stdexcept>

namespace nbv {

namespace {

double cell_tv_density(double gx, double gy, TvFlavor flavor) {
    return flavor == TvFlavor::Isotropic ? std::sqrt(gx * gx + gy * gy)
                                         : std::abs(gx) + std::abs(gy);
}

void require_positive_ray(double s) {
    if (!(s > 0.0)) throw std::invalid_argument("ray parameter must be positive");
}

} // namespace

double tv(const ScalarField& u, TvFlavor flavor) {
    const VectorField g = gradient(u);
    const double h2 = u.domain.h * u.domain.h;
    double sum = 0.0;
    for (std::size_t c = 0; c < g.x.size(); ++c) sum += cell_tv_density(g.x[c], g.y[c], flavor);
    return h2 * sum;
}

double boundary_trace_term(const ScalarField& u) {
    const auto& d = u.domain;
    double sum = 0.0;
    for (const BoundaryFace& f : d.boundary_faces()) sum += std::abs(u.at(f.i, f.j));
    return d.h * sum;
}

double bv_norm(const ScalarField& u, TvFlavor flavor) {
    return tv(u, flavor) + boundary_trace_term(u);
}

double i0(const ScalarField& u, TvFlavor flavor) { return bv_norm(u, flavor); }

double i0_tilde(const ScalarField& u) { return graph_area(u) + boundary_trace_term(u); }

double i0_dirderiv_ray(const ScalarField& u, double s, TvFlavor flavor) {
    require_positive_ray(s);
    // I0 is positively 1-homogeneous, so d/dt I0(su + tu) = I0(u) for any s > 0.
    return i0(u, flavor);
}

double i0_tilde_dirderiv_ray(const ScalarField& u, double s) {
    require_positive_ray(s);
    const VectorField g = gradient(u);
    const double h2 = u.domain.h * u.domain.h;
    const double inv_s2 = 1.0 / (s * s);
    double sum = 0.0;
    for (std::size_t c = 0; c < g.x.size(); ++c) {
        const double g2 = g.x[c] * g.x[c] + g.y[c] * g.y[c];
        if (g2 > 0.0) sum += g2 / std::sqrt(inv_s2 + g2);
    }
    return h2 * sum + boundary_trace_term(u);
}

std::pair<ScalarField, ScalarField> lattice_pair(const ScalarField& u, const ScalarField& v) {
    if (!(u.domain == v.domain)) throw std::invalid_argument("lattice_pair: domain mismatch");
    ScalarField hi = u, lo = u;
    for (std::size_t c = 0; c < u.values.size(); ++c) {
        hi.values[c] = std::max(u.values[c], v.values[c]);
        lo.values[c] = std::min(u.values[c], v.values[c]);
    }
    return {hi, lo};
}

double tv_smoothed(const ScalarField& u, TvFlavor flavor, double eps) {
    if (eps == 0.0) return tv(u, flavor);
    const VectorField g = gradient(u);
    const double h2 = u.domain.h * u.domain.h;
    const double e2 = eps * eps;
    double sum = 0.0;
    if (flavor == TvFlavor::Isotropic) {
        for (std::size_t c = 0; c < g.x.size(); ++c)
            sum += std::sqrt(e2 + g.x[c] * g.x[c] + g.y[c] * g.y[c]) - eps;
    } else {
        for (std::size_t c = 0; c < g.x.size(); ++c)
            sum += std::sqrt(e2 + g.x[c] * g.x[c]) + std::sqrt(e2 + g.y[c] * g.y[c]) - 2.0 * eps;
    }
    return h2 * sum;
}

double boundary_trace_smoothed(const ScalarField& u, double eps) {
    if (eps == 0.0) return boundary_trace_term(u);
    const auto& d = u.domain;
    const double e2 = eps * eps;
    double sum = 0.0;
    for (const BoundaryFace& f : d.boundary_faces()) {
        const double v = u.at(f.i, f.j);
        sum += std::sqrt(e2 + v * v) - eps;
    }
    return d.h * sum;
}

double graph_area(const ScalarField& u) {
    const VectorField g = gradient(u);
    const double h2 = u.domain.h * u.domain.h;
    double sum = 0.0;
    for (std::size_t c = 0; c < g.x.size(); ++c)
        sum += std::sqrt(1.0 + g.x[c] * g.x[c] + g.y[c] * g.y[c]);
    return h2 * sum;
}

VectorField tv_smoothed_flux(const ScalarField& u, TvFlavor flavor, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("tv_smoothed_flux requires eps > 0");
    VectorField q = gradient(u);
    const double e2 = eps * eps;
    if (flavor == TvFlavor::Isotropic) {
        for (std::size_t c = 0; c < q.x.size(); ++c) {
            const double den = std::sqrt(e2 + q.x[c] * q.x[c] + q.y[c] * q.y[c]);
            q.x[c] /= den;
            q.y[c] /= den;
        }
    } else {
        for (std::size_t c = 0; c < q.x.size(); ++c) {
            q.x[c] /= std::sqrt(e2 + q.x[c] * q.x[c]);
            q.y[c] /= std::sqrt(e2 + q.y[c] * q.y[c]);
        }
    }
    return q;
}

VectorField graph_area_flux(const ScalarField& u) {
    VectorField q = gradient(u);
    for (std::size_t c = 0; c < q.x.size(); ++c) {
        const double den = std::sqrt(1.0 + q.x[c] * q.x[c] + q.y[c] * q.y[c]);
        q.x[c] /= den;
        q.y[c] /= den;
    }
    return q;
}

} // namespace nbv
