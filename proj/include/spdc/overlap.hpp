#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "spdc/constants.hpp"
#include "spdc/errors.hpp"
#include "spdc/model.hpp"
#include "spdc/optimize.hpp"
#include "spdc/quad.hpp"
#include "spdc/spline.hpp"

namespace spdc {

// Location and height of the global maximum of |F(xi, phi)|.
struct FPeak {
    double xi_star = 0.0;
    double phi_star = 0.0;
    double f_star = 0.0;
};

namespace detail {

// One panel per half oscillation period of exp(i phi l / 2) on [-1, 1].
inline int phase_panels(double phi) {
    return std::max(1, static_cast<int>(std::ceil(std::abs(phi) / pi)));
}

inline std::complex<double> ipow(std::complex<double> z, int n) {
    std::complex<double> r{1.0, 0.0};
    while (n > 0) {
        if (n & 1) r *= z;
        z *= z;
        n >>= 1;
    }
    return r;
}

} // namespace detail

// Longitudinal Gaussian-overlap kernel
//   F(xi, phi) = int_{-1}^{1} sqrt(xi) e^{i phi l / 2} / (1 - i xi l) dl,
// real-valued up to quadrature noise (the integrand pairs conjugate under
// l -> -l). Returned as complex so callers can monitor that noise.
inline std::complex<double> phase_match_F(double xi, double phi,
                                          const QuadSpec& spec = {}) {
    if (!(xi > 0.0)) throw ValidationError("phase_match_F: xi must be positive");
    const double rxi = std::sqrt(xi);
    auto f = [=](double l) {
        return rxi * std::exp(std::complex<double>(0.0, 0.5 * phi * l)) /
               std::complex<double>(1.0, -xi * l);
    };
    return integrate_panels(f, -1.0, 1.0, detail::phase_panels(phi), spec);
}

// Same kernel with the quadratic residual term kept in the denominator:
// 1 - i xi l - c xi^2 l^2. Reduces to phase_match_F at c = 0.
inline std::complex<double> phase_match_F_exact(double xi, double phi, double c,
                                                const QuadSpec& spec = {}) {
    if (!(xi > 0.0)) throw ValidationError("phase_match_F_exact: xi must be positive");
    if (!(std::abs(c) < 0.3))
        throw SingularDenominator("phase_match_F_exact: residual term |c| >= 0.3 "
                                  "drives the denominator toward zero on the path");
    const double rxi = std::sqrt(xi);
    auto f = [=](double l) {
        return rxi * std::exp(std::complex<double>(0.0, 0.5 * phi * l)) /
               std::complex<double>(1.0 - c * xi * xi * l * l, -xi * l);
    };
    return integrate_panels(f, -1.0, 1.0, detail::phase_panels(phi), spec);
}

// Convenience overload pulling the aggregate focus and residual term from the
// derived parameter bundle.
inline std::complex<double> phase_match_F_exact(double phi, const AuxParams& aux,
                                                const QuadSpec& spec = {}) {
    return phase_match_F_exact(aux.xi_agg, phi, aux.c_param, spec);
}

// n-th Laguerre-Gauss collection-mode overlap (common dimensional prefactor
// factored out; collection applies it once):
//   int_{-1}^{1} e^{i phi l/2} (A- + i l B- t)^n / (A+ - i l B+ t)^{n+1} dl,
// with t = xi_s xi_i / xi_p.
inline std::complex<double> lg_overlap(int n, const DimensionlessConfig& cfg,
                                       const AuxParams& aux, double phi,
                                       const QuadSpec& spec = {}) {
    if (n < 0) throw ValidationError("lg_overlap: mode index must be nonnegative");
    const double t = cfg.xi_s * cfg.xi_i / cfg.xi_p;
    auto f = [&aux, t, phi, n](double l) {
        const std::complex<double> num(aux.a_minus, l * aux.b_minus * t);
        const std::complex<double> den(aux.a_plus, -l * aux.b_plus * t);
        return std::exp(std::complex<double>(0.0, 0.5 * phi * l)) *
               detail::ipow(num, n) / (detail::ipow(den, n) * den);
    };
    return integrate_panels(f, -1.0, 1.0, detail::phase_panels(phi), spec);
}

namespace detail {

// Quadrature nodes in l for the kernel family: uniform half-period panels for
// the oscillation, bisected near l = 0 where the denominator varies on the
// 1/xi scale, each panel carrying a fixed 15-point Kronrod rule.
struct LNode {
    double l, w;
};

inline void split_panel(double a, double b, double xi,
                        std::vector<std::pair<double, double>>& out) {
    const double width = b - a;
    const double center = 0.5 * (a + b);
    if (width > 1.2 * std::hypot(center, 1.0 / xi) && width > 1e-6) {
        split_panel(a, center, xi, out);
        split_panel(center, b, xi, out);
    } else {
        out.emplace_back(a, b);
    }
}

inline std::vector<LNode> kernel_l_nodes(double xi, double max_abs_phi) {
    const int n_pan = std::max(4, static_cast<int>(std::ceil(max_abs_phi / pi)));
    std::vector<std::pair<double, double>> panels;
    for (int p = 0; p < n_pan; ++p) {
        const double a = -1.0 + 2.0 * p / n_pan;
        const double b = -1.0 + 2.0 * (p + 1) / n_pan;
        split_panel(a, b, xi, panels);
    }
    std::vector<LNode> nodes;
    nodes.reserve(panels.size() * 15);
    for (const auto& [a, b] : panels) {
        const double c = 0.5 * (a + b);
        const double h = 0.5 * (b - a);
        nodes.push_back({c, h * gk_wk[7]});
        for (int j = 0; j < 7; ++j) {
            nodes.push_back({c - h * gk_x[j], h * gk_wk[j]});
            nodes.push_back({c + h * gk_x[j], h * gk_wk[j]});
        }
    }
    return nodes;
}

} // namespace detail

// Dense uniform sampling of the real kernel value at phi0 + k h, k = 0..n-1.
// The l-quadrature nodes are fixed once; stepping in phi is an incremental
// unit rotation per node, so the whole table costs O(n * nodes).
inline std::vector<double> f_dense_samples(double xi, double c, double phi0,
                                           double h, std::size_t n) {
    if (!(xi > 0.0)) throw ValidationError("f_dense_samples: xi must be positive");
    if (!(std::abs(c) < 0.3))
        throw SingularDenominator("f_dense_samples: residual term |c| >= 0.3");
    const double max_abs = std::max(std::abs(phi0), std::abs(phi0 + h * double(n - 1)));
    const auto nodes = detail::kernel_l_nodes(xi, max_abs);
    const std::size_t m = nodes.size();

    std::vector<std::complex<double>> cur(m), rot(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double l = nodes[j].l;
        const std::complex<double> den(1.0 - c * xi * xi * l * l, -xi * l);
        cur[j] = (nodes[j].w / den) *
                 std::exp(std::complex<double>(0.0, 0.5 * phi0 * l));
        rot[j] = std::exp(std::complex<double>(0.0, 0.5 * h * l));
    }

    const double rxi = std::sqrt(xi);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> sum{0.0, 0.0};
        for (std::size_t j = 0; j < m; ++j) sum += cur[j];
        out[k] = rxi * sum.real();
        if (k + 1 < n)
            for (std::size_t j = 0; j < m; ++j) cur[j] *= rot[j];
    }
    return out;
}

// Plancherel identity: the integral of |F|^2 over all phi collapses to a
// one-dimensional l-integral. Used as a closed-form normalization and as an
// independent oracle for the phi-quadrature paths.
inline double f_norm2_total(double xi, double c = 0.0, const QuadSpec& spec = {}) {
    auto f = [=](double l) {
        const double re = 1.0 - c * xi * xi * l * l;
        return 1.0 / (re * re + xi * xi * l * l);
    };
    return 4.0 * pi * xi * integrate(f, -1.0, 1.0, spec);
}

// Companion cross term between the c = 0 kernel and a residual-c kernel,
// integrated over all phi (both kernels are real).
inline double f_cross_total(double xi, double c, const QuadSpec& spec = {}) {
    auto f = [=](double l) {
        const std::complex<double> g0 = 1.0 / std::complex<double>(1.0, -xi * l);
        const std::complex<double> gc =
            1.0 / std::complex<double>(1.0 - c * xi * xi * l * l, -xi * l);
        return (std::conj(g0) * gc).real();
    };
    return 4.0 * pi * xi * integrate(f, -1.0, 1.0, spec);
}

// |F|^2 falls off as coef * sin^2(phi/2 + alpha) / phi^2; the mass in both
// tails beyond |phi - peak| = R is approximately coef / R.
inline double f_tail_coefficient(double xi, double c = 0.0) {
    const double re = 1.0 - c * xi * xi;
    return 16.0 * xi / (re * re + xi * xi);
}

// Exponential decay rate of the interior (pole) contribution to the kernel:
// the zero of (1 - c xi^2 l^2) - i xi l nearest the real axis sits at
// Im l = gamma, and the profile's shoulder falls off as exp(-gamma |phi|).
// The 1/phi^2 endpoint tail only dominates once that shoulder has died, so
// any fixed-window treatment of |F|^2 must extend to several 1/gamma.
inline double f_shoulder_rate(double xi, double c = 0.0) {
    const double disc = 1.0 - 4.0 * c;
    if (disc <= 0.0) return 1.0 / (2.0 * c * xi);
    return 2.0 / (xi * (1.0 + std::sqrt(disc)));
}

// Leading large-|phi| form of the (real) kernel, from integrating by parts:
// the endpoint contributions dominate once the phase wraps faster than the
// denominator varies.
inline double f_asymptotic(double xi, double phi, double c = 0.0) {
    const double re = 1.0 - c * xi * xi;
    const double r = std::hypot(re, xi);
    const double alpha = std::atan2(xi, re);
    return 4.0 * std::sqrt(xi) / (r * phi) * std::sin(0.5 * phi + alpha);
}

// Phi-location and squared height of the kernel's global peak at fixed xi.
// Coarse dense scan (the peak drifts to large negative phi as xi grows),
// then golden-section refinement on the adaptive-quadrature evaluator.
inline std::pair<double, double> f_peak_phi(double xi, double c = 0.0,
                                            const QuadSpec& spec = {}) {
    const double lo = -4.0 * pi - 0.8 * xi;
    const double hi = 2.0 * pi;
    const std::size_t n =
        std::max<std::size_t>(1025, static_cast<std::size_t>((hi - lo) / 0.05) + 1);
    const double h = (hi - lo) / double(n - 1);
    const std::vector<double> scan = f_dense_samples(xi, c, lo, h, n);

    std::size_t k = 0;
    for (std::size_t j = 1; j < n; ++j)
        if (std::abs(scan[j]) > std::abs(scan[k])) k = j;

    auto f2 = [&](double p) {
        const double v = std::abs(phase_match_F_exact(xi, p, c, spec));
        return v * v;
    };
    const double a = lo + h * double(k > 0 ? k - 1 : 0);
    const double b = lo + h * double(std::min(k + 1, n - 1));
    auto [phi_star, f2_star] = golden_max(f2, a, b, 1e-9 * (1.0 + std::abs(lo + h * k)));
    return {phi_star, f2_star};
}

// Global peak of |F| over a (log-xi, phi) box. Defaults cover the full
// figure domain with margin.
inline FPeak find_F_peak(double xi_lo = 0.05, double xi_hi = 200.0,
                         double phi_lo = -4.0 * pi, double phi_hi = 2.0 * pi,
                         const QuadSpec& spec = {}) {
    auto [arg, val] = maximize(
        [&](const std::vector<double>& v) {
            return std::abs(phase_match_F(v[0], v[1], spec));
        },
        {xi_lo, phi_lo}, {xi_hi, phi_hi}, {true, false});
    return {arg[0], arg[1], val};
}

// The unrestricted peak, computed once per process.
inline const FPeak& global_F_peak() {
    static const FPeak peak = find_F_peak();
    return peak;
}

// Spline table of the real kernel around its peak, answering any phi: dense
// samples at spacing 0.02 inside [peak - cap, peak + cap], the integration-
// by-parts asymptote outside. cap is at least 200 so the handoff happens
// where the asymptote is accurate.
class FProfile {
public:
    FProfile(double xi, double c, double half_extent)
        : xi_(xi), c_(c), cap_(required_cap(half_extent)) {
        auto [pk, f2] = f_peak_phi(xi, c);
        pk_ = pk;
        pk_f2_ = f2;
        const double h = 0.02;
        lo_ = pk_ - cap_ - 0.1;
        const std::size_t n =
            static_cast<std::size_t>(std::ceil(2.0 * (cap_ + 0.1) / h)) + 1;
        hi_ = lo_ + h * double(n - 1);
        spline_ = UniformSpline(lo_, h, f_dense_samples(xi_, c_, lo_, h, n));
    }

    double operator()(double phi) const {
        if (phi < lo_ || phi > hi_) return f_asymptotic(xi_, phi, c_);
        return spline_(phi);
    }

    static double required_cap(double half_extent) {
        return std::max(2.0 * half_extent, 200.0);
    }

    double xi() const { return xi_; }
    double c() const { return c_; }
    double peak_phi() const { return pk_; }
    double peak_f2() const { return pk_f2_; }
    double cap() const { return cap_; }
    bool covers(double half_extent) const {
        return cap_ >= required_cap(half_extent) - 1e-9;
    }

private:
    double xi_, c_, cap_, pk_ = 0.0, pk_f2_ = 0.0, lo_ = 0.0, hi_ = 0.0;
    UniformSpline spline_;
};

// Process-wide profile cache keyed on (xi, c); rebuilt when a caller needs a
// wider table than the cached one.
inline std::shared_ptr<const FProfile> f_profile_cached(double xi, double c,
                                                        double half_extent) {
    static std::mutex mu;
    static std::map<std::pair<double, double>, std::shared_ptr<const FProfile>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{xi, c}];
    if (!slot || !slot->covers(half_extent))
        slot = std::make_shared<const FProfile>(xi, c, half_extent);
    return slot;
}

} // namespace spdc
