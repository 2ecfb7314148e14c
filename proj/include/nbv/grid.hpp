#pragma once
#include <vector>

namespace nbv {

enum class Face { West, East, South, North };

struct BoundaryFace {
    int i = 0;
    int j = 0;
    Face side = Face::West;
};

// Rectangular grid of nx*ny square cells of side h. Cell (i,j) is indexed
// row-major, 0 <= i < nx, 0 <= j < ny.
struct DiscreteDomain {
    int nx = 1;
    int ny = 1;
    double h = 1.0;

    DiscreteDomain() = default;
    DiscreteDomain(int nx_, int ny_, double h_);

    int cells() const { return nx * ny; }
    double area() const { return nx * ny * h * h; }
    double perimeter() const { return 2.0 * (nx + ny) * h; }
    int index(int i, int j) const { return j * nx + i; }

    // Number of boundary faces incident to cell (i,j): 0 for interior cells,
    // 2 at corners.
    int boundary_face_count(int i, int j) const {
        return (i == 0) + (i == nx - 1) + (j == 0) + (j == ny - 1);
    }

    // Every boundary face exactly once, each of measure h.
    std::vector<BoundaryFace> boundary_faces() const;

    friend bool operator==(const DiscreteDomain&, const DiscreteDomain&) = default;
};

// Piecewise-constant field, one value per cell.
struct ScalarField {
    DiscreteDomain domain;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const DiscreteDomain& d, double fill = 0.0)
        : domain(d), values(static_cast<std::size_t>(d.cells()), fill) {}
    ScalarField(const DiscreteDomain& d, std::vector<double> v);

    double& at(int i, int j) { return values[static_cast<std::size_t>(domain.index(i, j))]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(domain.index(i, j))]; }

    bool is_zero() const;
    bool all_finite() const;
};

// Per-cell 2-vector, laid out like the forward-difference gradient: the x
// component lives conceptually on the east face of the cell, the y component
// on the north face.
struct VectorField {
    DiscreteDomain domain;
    std::vector<double> x, y;

    VectorField() = default;
    explicit VectorField(const DiscreteDomain& d)
        : domain(d),
          x(static_cast<std::size_t>(d.cells()), 0.0),
          y(static_cast<std::size_t>(d.cells()), 0.0) {}
};

// Forward differences with zero padding on the last column/row:
//   gx(i,j) = (u(i+1,j) - u(i,j))/h,  gx(nx-1,j) = 0, and likewise gy.
VectorField gradient(const ScalarField& u);

// Negative adjoint of `gradient`: for all u and z,
//   sum_c z(c).grad(u)(c) = -sum_c u(c) div(z)(c)
// holds exactly (components of z on the padded last column/row are ignored).
ScalarField divergence(const VectorField& z);

// Field algebra used throughout the solvers.
ScalarField scaled(const ScalarField& u, double a);
ScalarField axpy(double a, const ScalarField& x, const ScalarField& y); // a*x + y

} // namespace nbv
