#pragma once
#include "nbv/grid.hpp"
#include "nbv/rng.hpp"

inline nbv::ScalarField random_field(const nbv::DiscreteDomain& d, nbv::Rng& rng,
                                     double amp = 1.0) {
    nbv::ScalarField u(d);
    for (auto& v : u.values) v = amp * rng.normal();
    return u;
}
