#pragma once

#include <cmath>
#include <utility>

#include "spdc/errors.hpp"

namespace spdc {

// Root of g on [lo, hi] (g(lo), g(hi) of opposite sign) to |hi-lo| <= xtol.
template <class G>
double bisect(G&& g, double lo, double hi, double xtol) {
    double glo = g(lo);
    for (int it = 0; it < 200 && (hi - lo) > xtol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((glo <= 0.0) == (gm <= 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Full width at half maximum of a nonnegative function about peak_x: marches
// outward until f drops below half the peak value, then bisects each crossing
// to 1e-10 * search_radius.
template <class F>
double fwhm(F&& f, double peak_x, double search_radius) {
    const double fp = f(peak_x);
    if (!(fp > 0.0)) throw Error("fwhm: peak value must be positive");
    const double half = 0.5 * fp;
    const double xtol = 1e-10 * search_radius;
    const int nsteps = 256;
    const double step = search_radius / nsteps;

    auto crossing = [&](double side) {
        double prev = peak_x;
        for (int k = 1; k <= nsteps; ++k) {
            const double x = peak_x + side * k * step;
            if (f(x) < half) {
                auto g = [&](double t) { return f(t) - half; };
                double lo = std::min(prev, x), hi = std::max(prev, x);
                return bisect(g, lo, hi, xtol);
            }
            prev = x;
        }
        throw NoBracket("fwhm: half-maximum not crossed within search radius");
    };

    const double x_hi = crossing(+1.0);
    const double x_lo = crossing(-1.0);
    return x_hi - x_lo;
}

} // namespace spdc
