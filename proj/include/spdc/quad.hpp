#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <type_traits>
#include <vector>

#include "spdc/errors.hpp"

namespace spdc {

struct QuadSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 200;
};

namespace detail {

// Gauss-Kronrod 15/7 abscissae (positive half) and weights.
inline constexpr double gk_x[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
};
inline constexpr double gk_wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

template <class F>
auto gk15(F& f, double a, double b, double& err) -> std::decay_t<decltype(f(a))> {
    using T = std::decay_t<decltype(f(a))>;
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T fc = f(c);
    T k = gk_wk[7] * fc;
    T g = gk_wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * gk_x[j];
        T f1 = f(c - dx);
        T f2 = f(c + dx);
        k += gk_wk[j] * (f1 + f2);
        if (j % 2 == 1) g += gk_wg[(j - 1) / 2] * (f1 + f2);
    }
    err = std::abs(h * (k - g));
    return h * k;
}

} // namespace detail

// Adaptive quadrature of a real- or complex-valued integrand over [a, b]:
// repeatedly bisects the segment with the largest Kronrod-vs-Gauss error
// estimate until the summed estimate meets the tolerances.
template <class F>
auto integrate(F&& f, double a, double b, const QuadSpec& spec = {})
    -> std::decay_t<decltype(f(a))> {
    using T = std::decay_t<decltype(f(a))>;
    struct Seg {
        double a, b, err;
        T val;
    };
    std::vector<Seg> segs;
    segs.reserve(64);
    double e0;
    T v0 = detail::gk15(f, a, b, e0);
    segs.push_back({a, b, e0, v0});
    for (;;) {
        T total{};
        double err = 0.0;
        for (const Seg& s : segs) {
            total += s.val;
            err += s.err;
        }
        if (err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) return total;
        if (static_cast<int>(segs.size()) >= spec.max_subdivisions)
            throw NoConvergence("quadrature: subdivision budget exhausted");
        auto worst = std::max_element(
            segs.begin(), segs.end(),
            [](const Seg& x, const Seg& y) { return x.err < y.err; });
        Seg s = *worst;
        const double mid = 0.5 * (s.a + s.b);
        double e1, e2;
        T v1 = detail::gk15(f, s.a, mid, e1);
        T v2 = detail::gk15(f, mid, s.b, e2);
        *worst = {s.a, mid, e1, v1};
        segs.push_back({mid, s.b, e2, v2});
    }
}

// Same integral split into n_panels even panels before adaptivity; use when
// the integrand oscillates (panel width chosen by the caller from the phase).
template <class F>
auto integrate_panels(F&& f, double a, double b, int n_panels, const QuadSpec& spec = {})
    -> std::decay_t<decltype(f(a))> {
    using T = std::decay_t<decltype(f(a))>;
    n_panels = std::max(1, n_panels);
    QuadSpec sub = spec;
    sub.abs_tol = spec.abs_tol / n_panels;
    T total{};
    const double w = (b - a) / n_panels;
    for (int p = 0; p < n_panels; ++p) {
        const double pa = a + p * w;
        const double pb = (p + 1 == n_panels) ? b : pa + w;
        total += integrate(f, pa, pb, sub);
    }
    return total;
}

template <class F>
std::complex<double> integrate_complex(F&& f, double a, double b, const QuadSpec& spec = {}) {
    static_assert(std::is_convertible_v<decltype(f(a)), std::complex<double>>,
                  "integrand must be complex-valued");
    return integrate([&](double x) { return std::complex<double>(f(x)); }, a, b, spec);
}

} // namespace spdc
