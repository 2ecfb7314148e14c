#include "nbv/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace nbv {

DiscreteDomain::DiscreteDomain(int nx_, int ny_, double h_) : nx(nx_), ny(ny_), h(h_) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("DiscreteDomain: cell counts must be positive");
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("DiscreteDomain: h must be positive and finite");
}

std::vector<BoundaryFace> DiscreteDomain::boundary_faces() const {
    std::vector<BoundaryFace> faces;
    faces.reserve(static_cast<std::size_t>(2 * (nx + ny)));
    for (int j = 0; j < ny; ++j) faces.push_back({0, j, Face::West});
    for (int j = 0; j < ny; ++j) faces.push_back({nx - 1, j, Face::East});
    for (int i = 0; i < nx; ++i) faces.push_back({i, 0, Face::South});
    for (int i = 0; i < nx; ++i) faces.push_back({i, ny - 1, Face::North});
    return faces;
}

ScalarField::ScalarField(const DiscreteDomain& d, std::vector<double> v)
    : domain(d), values(std::move(v)) {
    if (values.size() != static_cast<std::size_t>(d.cells()))
        throw std::invalid_argument("ScalarField: value count does not match the domain");
}

bool ScalarField::is_zero() const {
    for (double v : values)
        if (v != 0.0) return false;
    return true;
}

bool ScalarField::all_finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

VectorField gradient(const ScalarField& u) {
    const auto& d = u.domain;
    VectorField g(d);
    const double inv_h = 1.0 / d.h;
    for (int j = 0; j < d.ny; ++j) {
        for (int i = 0; i < d.nx; ++i) {
            const int c = d.index(i, j);
            g.x[c] = (i + 1 < d.nx) ? (u.values[d.index(i + 1, j)] - u.values[c]) * inv_h : 0.0;
            g.y[c] = (j + 1 < d.ny) ? (u.values[d.index(i, j + 1)] - u.values[c]) * inv_h : 0.0;
        }
    }
    return g;
}

ScalarField divergence(const VectorField& z) {
    const auto& d = z.domain;
    ScalarField out(d);
    const double inv_h = 1.0 / d.h;
    for (int j = 0; j < d.ny; ++j) {
        for (int i = 0; i < d.nx; ++i) {
            const int c = d.index(i, j);
            double v = 0.0;
            if (i + 1 < d.nx) v += z.x[c];
            if (i > 0) v -= z.x[d.index(i - 1, j)];
            if (j + 1 < d.ny) v += z.y[c];
            if (j > 0) v -= z.y[d.index(i, j - 1)];
            out.values[c] = v * inv_h;
        }
    }
    return out;
}

ScalarField scaled(const ScalarField& u, double a) {
    ScalarField out = u;
    for (double& v : out.values) v *= a;
    return out;
}

ScalarField axpy(double a, const ScalarField& x, const ScalarField& y) {
    if (!(x.domain == y.domain)) throw std::invalid_argument("axpy: domain mismatch");
    ScalarField out = y;
    for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] += a * x.values[k];
    return out;
}

} // namespace nbv
