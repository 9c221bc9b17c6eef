#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "spdc/errors.hpp"

namespace spdc {

// Golden-section maximization on [a, b]; stops when the bracket is narrower
// than xtol. Returns (argmax, max).
template <class F>
std::pair<double, double> golden_max(F&& f, double a, double b, double xtol) {
    constexpr double gr = 0.6180339887498949; // (sqrt(5)-1)/2
    double c1 = b - gr * (b - a);
    double c2 = a + gr * (b - a);
    double f1 = f(c1), f2 = f(c2);
    while (b - a > xtol) {
        if (f1 > f2) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - gr * (b - a);
            f1 = f(c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + gr * (b - a);
            f2 = f(c2);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

struct NelderMeadOptions {
    double xatol = 1e-10;
    double fatol = 1e-14;
    int max_iter = 4000;
};

// Standard Nelder-Mead minimization (reflection 1, expansion 2, contraction
// 0.5, shrink 0.5), deterministic. Returns (argmin, min).
template <class F>
std::pair<std::vector<double>, double> nelder_mead_min(
    F&& f, const std::vector<double>& x0, const std::vector<double>& step,
    const NelderMeadOptions& opt = {}) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> xs(n + 1, x0);
    std::vector<double> fs(n + 1);
    for (std::size_t i = 0; i < n; ++i) xs[i + 1][i] += step[i];
    for (std::size_t i = 0; i <= n; ++i) fs[i] = f(xs[i]);

    std::vector<std::size_t> order(n + 1);
    auto sort_simplex = [&] {
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    };

    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    for (int it = 0; it < opt.max_iter; ++it) {
        sort_simplex();
        const std::size_t best = order[0], worst = order[n], second = order[n - 1];

        double xspread = 0.0;
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t d = 0; d < n; ++d)
                xspread = std::max(xspread, std::abs(xs[order[i]][d] - xs[best][d]));
        if (xspread <= opt.xatol && std::abs(fs[worst] - fs[best]) <= opt.fatol)
            break;

        for (std::size_t d = 0; d < n; ++d) {
            double s = 0.0;
            for (std::size_t i = 0; i <= n; ++i)
                if (i != worst) s += xs[i][d];
            centroid[d] = s / n;
        }
        for (std::size_t d = 0; d < n; ++d) xr[d] = centroid[d] + (centroid[d] - xs[worst][d]);
        const double fr = f(xr);
        if (fr < fs[best]) {
            for (std::size_t d = 0; d < n; ++d) xe[d] = centroid[d] + 2.0 * (centroid[d] - xs[worst][d]);
            const double fe = f(xe);
            if (fe < fr) {
                xs[worst] = xe;
                fs[worst] = fe;
            } else {
                xs[worst] = xr;
                fs[worst] = fr;
            }
        } else if (fr < fs[second]) {
            xs[worst] = xr;
            fs[worst] = fr;
        } else {
            const bool outside = fr < fs[worst];
            const std::vector<double>& ref = outside ? xr : xs[worst];
            for (std::size_t d = 0; d < n; ++d) xc[d] = centroid[d] + 0.5 * (ref[d] - centroid[d]);
            const double fc = f(xc);
            if (fc < (outside ? fr : fs[worst])) {
                xs[worst] = xc;
                fs[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t d = 0; d < n; ++d)
                        xs[i][d] = xs[best][d] + 0.5 * (xs[i][d] - xs[best][d]);
                    fs[i] = f(xs[i]);
                }
            }
        }
    }
    sort_simplex();
    return {xs[order[0]], fs[order[0]]};
}

// Bounded derivative-free maximization: a coarse grid scan (grid_pts per axis,
// log-spaced where log_axes says so) feeding golden-section (1D) or
// Nelder-Mead (nD) refinement to ~1e-6 relative argument changes.
template <class F>
std::pair<std::vector<double>, double> maximize(
    F&& f, const std::vector<double>& lower, const std::vector<double>& upper,
    const std::vector<bool>& log_axes = {}, int grid_pts = 64) {
    const std::size_t n = lower.size();
    auto is_log = [&](std::size_t d) { return d < log_axes.size() && log_axes[d]; };
    auto to_t = [&](std::size_t d, double x) { return is_log(d) ? std::log(x) : x; };
    auto from_t = [&](std::size_t d, double t) { return is_log(d) ? std::exp(t) : t; };

    std::vector<double> tlo(n), thi(n);
    for (std::size_t d = 0; d < n; ++d) {
        tlo[d] = to_t(d, lower[d]);
        thi[d] = to_t(d, upper[d]);
    }

    auto eval_t = [&](const std::vector<double>& t) {
        std::vector<double> x(n);
        for (std::size_t d = 0; d < n; ++d) {
            if (t[d] < tlo[d] || t[d] > thi[d]) return -std::numeric_limits<double>::infinity();
            x[d] = from_t(d, t[d]);
        }
        return f(x);
    };

    // Coarse scan.
    std::size_t total = 1;
    for (std::size_t d = 0; d < n; ++d) total *= static_cast<std::size_t>(grid_pts);
    std::vector<double> t(n), best_t(n);
    double best_f = -std::numeric_limits<double>::infinity();
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        for (std::size_t d = 0; d < n; ++d) {
            const std::size_t k = rem % grid_pts;
            rem /= grid_pts;
            t[d] = tlo[d] + (thi[d] - tlo[d]) * (grid_pts == 1 ? 0.5 : double(k) / (grid_pts - 1));
        }
        const double v = eval_t(t);
        if (v > best_f) {
            best_f = v;
            best_t = t;
        }
    }

    // Local refinement.
    if (n == 1) {
        const double h = (thi[0] - tlo[0]) / (grid_pts - 1);
        const double a = std::max(tlo[0], best_t[0] - h);
        const double b = std::min(thi[0], best_t[0] + h);
        auto [tx, fx] = golden_max([&](double v) { return eval_t({v}); }, a, b,
                                   1e-6 * (1.0 + std::abs(best_t[0])));
        if (fx > best_f) {
            best_f = fx;
            best_t[0] = tx;
        }
    } else {
        std::vector<double> step(n);
        double tscale = 0.0;
        for (std::size_t d = 0; d < n; ++d) {
            step[d] = (thi[d] - tlo[d]) / (grid_pts - 1);
            tscale = std::max(tscale, std::abs(best_t[d]));
        }
        NelderMeadOptions opt;
        opt.xatol = 1e-6 * (1.0 + tscale);
        opt.fatol = 1e-13 * (1.0 + std::abs(best_f));
        auto [tx, fneg] = nelder_mead_min(
            [&](const std::vector<double>& v) { return -eval_t(v); }, best_t, step, opt);
        if (-fneg > best_f) {
            best_f = -fneg;
            best_t = tx;
        }
    }

    std::vector<double> argmax(n);
    for (std::size_t d = 0; d < n; ++d) argmax[d] = from_t(d, best_t[d]);
    return {argmax, best_f};
}

} // namespace spdc
