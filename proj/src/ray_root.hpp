#pragma once
#include <cmath>
#include <sstream>

#include "nbv/errors.hpp"

namespace nbv::detail {

struct RayRootResult {
    double t_w = 0.0;
    double g_abs = 0.0;
    double t_lo = 0.0, t_hi = 0.0;
    int evals = 0;
};

// Root of a ray derivative that is positive near 0 and negative near
// infinity: halve down from 1 until g > 0, double up until g < 0, bisect to
// relative width tol_root and |g| below tol_root * res_scale(t).
template <class G, class Scale>
RayRootResult bracket_bisect(G&& g, Scale&& res_scale, double tol_root) {
    if (!(tol_root > 0.0)) throw std::invalid_argument("bracket_bisect: tol_root must be positive");

    RayRootResult out;
    double t_lo = 1.0, t_hi = 1.0;
    double g_lo = g(t_lo);
    out.evals = 1;

    for (int k = 0; g_lo <= 0.0; ++k) {
        if (k >= 200) {
            std::ostringstream os;
            os << "ray derivative never positive down to t = " << t_lo
               << " (mountain-pass geometry absent for this direction)";
            throw BracketFailureLow(os.str());
        }
        t_lo *= 0.5;
        g_lo = g(t_lo);
        ++out.evals;
    }

    double g_hi = g(t_hi);
    ++out.evals;
    for (int k = 0; g_hi >= 0.0; ++k) {
        if (k >= 200) {
            std::ostringstream os;
            os << "ray derivative never negative up to t = " << t_hi
               << " (superlinearity fails along this direction)";
            throw BracketFailureHigh(os.str());
        }
        t_hi *= 2.0;
        g_hi = g(t_hi);
        ++out.evals;
    }

    double t_mid = 0.5 * (t_lo + t_hi);
    double g_mid = g(t_mid);
    ++out.evals;
    for (int it = 0; it < 2000; ++it) {
        if (g_mid > 0.0)
            t_lo = t_mid;
        else if (g_mid < 0.0)
            t_hi = t_mid;
        else
            break; // exact root
        if ((t_hi - t_lo) <= tol_root * t_lo &&
            std::abs(g_mid) <= tol_root * res_scale(t_mid))
            break;
        const double next = 0.5 * (t_lo + t_hi);
        if (next == t_lo || next == t_hi) break; // bracket at floating-point resolution
        t_mid = next;
        g_mid = g(t_mid);
        ++out.evals;
    }

    out.t_w = t_mid;
    out.g_abs = std::abs(g_mid);
    out.t_lo = t_lo;
    out.t_hi = t_hi;
    return out;
}

} // namespace nbv::detail
