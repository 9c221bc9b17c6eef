#pragma once

// Joint spectral amplitude of the pair source: peak spectral density across
// focusing conditions, the dimensional amplitude ceiling, JSA grid and slice
// construction, and photon bandwidth.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "spdc/constants.hpp"
#include "spdc/errors.hpp"
#include "spdc/model.hpp"
#include "spdc/overlap.hpp"
#include "spdc/quad.hpp"
#include "spdc/rootfind.hpp"
#include "spdc/threads.hpp"

namespace spdc {

// Two-photon amplitude sampled over scaled frequency offsets delta_omega/Omega.
// values(i, j) = s(x_i + y_j) * F(xi_agg, Phi(x_i, y_j)) with the pump
// envelope s normalized to unit peak; dimensional prefactors are the business
// of max_spectral_amplitude.
struct JsaGrid {
    Eigen::MatrixXcd values;
    Eigen::VectorXd ds_axis;  // signal offsets, row index
    Eigen::VectorXd di_axis;  // idler offsets, column index
    DimensionlessConfig config;
};

// Monochromatic-pump amplitude: a 1D profile of F on a uniform phase axis
// (the pump factor collapses the grid to a line, so 2D storage is degenerate).
struct JsaSlice {
    Eigen::VectorXd phi_axis;
    Eigen::VectorXd amplitude;  // F is real-valued
    double xi = 0.0;
    double c = 0.0;
};

struct BandwidthReport {
    double delta_phi = 0.0;      // FWHM of |F(xi, .)|^2 [rad]
    double delta_omega = 0.0;    // photon bandwidth [rad/s]
    double heuristic_phi = 0.0;  // 2*pi*max(1, xi/10) [rad]
    double confocal_b = 0.0;     // aggregate confocal length L/xi [m]
    std::vector<Warning> warnings;
};

// FWHM in Phi of |F(xi, Phi)|^2 about its peak. The bracket radius grows with
// xi (the profile widens roughly linearly at large xi) and doubles on a
// failed bracket before giving up.
inline double phi_bandwidth(double xi, const QuadSpec& spec = {}) {
    if (!(xi > 0.0)) throw ValidationError("phi_bandwidth: xi must be positive");
    const double pk = f_peak_phi(xi, 0.0, spec).first;
    auto f2 = [&](double phi) { return std::norm(phase_match_F(xi, phi, spec)); };
    double radius = 10.0 + 0.35 * xi;
    for (int attempt = 0;; ++attempt) {
        try {
            return fwhm(f2, pk, radius);
        } catch (const NoBracket&) {
            if (attempt >= 3) throw;
            radius *= 2.0;
        }
    }
}

// Photon bandwidth of the pair at the aggregate focal parameter, under a
// monochromatic pump (a nonzero configured pump bandwidth is ignored with a
// warning: it broadens the pair sum, not the individual photon).
inline BandwidthReport photon_bandwidth(const PhysicalSource& src) {
    const DimensionlessConfig cfg = reduce(src);
    const AuxParams aux = aux_params(cfg);

    BandwidthReport rep;
    if (src.pump_bw > 0.0) rep.warnings.push_back(Warning::PumpBandwidthIgnored);
    rep.delta_phi = phi_bandwidth(aux.xi_agg);
    rep.heuristic_phi = 2.0 * pi * std::max(1.0, aux.xi_agg / 10.0);
    rep.confocal_b = src.L * aux.b_confocal_over_L;
    rep.delta_omega = rep.delta_phi * c_light / (std::abs(src.ns_g - src.ni_g) * src.L);
    return rep;
}

// Peak joint spectral density at equal signal/idler focusing and degenerate
// collinear ratios, maximized over Phi and normalized to the global optimum
// (which is computed, not hardcoded, to avoid compounding rounding).
inline double relative_peak_density(double xi_p, double xi_s) {
    if (!(xi_p > 0.0) || !(xi_s > 0.0))
        throw ValidationError("relative_peak_density: focal parameters must be positive");
    DimensionlessConfig cfg;
    cfg.xi_p = xi_p;
    cfg.xi_s = cfg.xi_i = xi_s;
    const AuxParams aux = aux_params(cfg);
    const double pk_f2 = f_peak_phi(aux.xi_agg).second;
    const double f_star = global_F_peak().f_star;
    return pk_f2 / (aux.a_plus * aux.b_plus) / (0.25 * f_star * f_star);
}

// Dimensional peak of the joint spectral amplitude at optimal focusing, in
// sqrt(s^2/rad^2); the squared value is the peak joint spectral density. For
// a monochromatic pump the result is per unit pump spectral amplitude.
inline double max_spectral_amplitude(const PhysicalSource& src) {
    src.validate();
    const double f_star = global_F_peak().f_star;
    const double pref = std::sqrt(8.0 * pi * pi * hbar * src.epsilon * src.n_s * src.n_i /
                                  (eps0 * src.n_p));
    const double s_peak =
        src.pump_bw > 0.0 ? std::pow(2.0 * pi * src.pump_bw * src.pump_bw, -0.25) : 1.0;
    return 0.5 * f_star * pref * (src.chi_eff / (src.lambda_s * src.lambda_i)) *
           std::sqrt(src.N_p * src.L) * s_peak;
}

namespace detail {

// Half-extent of the retained phase window: at least four FWHM, at least 40,
// and wide enough that the analytic |F|^2 tail mass beyond it stays below
// 5e-3 of the total. All three branches vary smoothly in xi, so downstream
// optima never sit on a policy step. Memoized on (xi, c): the bandwidth
// bisection behind it is far costlier than a map lookup, and pump-bandwidth
// optimization re-requests the same extent for every trial grid.
inline double phase_half_extent(double xi, double c, const QuadSpec& spec = {}) {
    static std::mutex mu;
    static std::map<std::pair<double, double>, double> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({xi, c});
        if (it != cache.end()) return it->second;
    }
    const double w = phi_bandwidth(xi, spec);
    const double total = f_norm2_total(xi, c, spec);
    const double m_tail = f_tail_coefficient(xi, c) / (total * 5e-3);
    const double half = std::max({4.0 * w, 40.0, m_tail});
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(std::pair<double, double>{xi, c}, half);
    return half;
}

}  // namespace detail

// Builds the two-photon amplitude on an n x n grid centered where the pump
// envelope peaks on the phase-matching ridge. Coverage criteria: pump-edge
// amplitude <= 1e-4 of the maximum and phase-direction tail mass <= 5e-3 of
// the total (|F| tails fall off only as 1/Phi, so a pointwise gate across the
// ridge would need unworkably large grids); extents expand x1.5 per round,
// at most four rounds. With use_exact_c the F kernel keeps the quadratic
// phase-mismatch term, taking c from cfg's bookkeeping unless given here.
inline JsaGrid build_jsa(const DimensionlessConfig& cfg, int n_points = 512,
                         double extent_sigmas = 7.0, bool use_exact_c = false,
                         double c = std::numeric_limits<double>::quiet_NaN()) {
    cfg.validate();
    if (n_points < 64) throw ValidationError("build_jsa: n_points must be at least 64");
    if (!(cfg.pump_bw_scaled > 0.0))
        throw MonochromaticPump(
            "build_jsa: monochromatic pump collapses the grid to a line; use a slice");
    const double cs = std::cos(cfg.theta);
    const double sn = std::sin(cfg.theta);
    if (!(cs + sn > 1e-6))
        throw ValidationError(
            "build_jsa: theta at or below -45 deg leaves the amplitude unbounded along the "
            "pump stripe");

    const AuxParams aux = aux_params(cfg);
    const double xi = aux.xi_agg;
    const double c_used = use_exact_c ? (std::isnan(c) ? aux.c_param : c) : 0.0;
    const double beta = cfg.pump_bw_scaled;
    const double kappa = 1.0 / (cs + sn);
    const double pk = f_peak_phi(xi, c_used).first;

    const double pump_gate = 1e-4;
    const double tail_gate = 5e-3;
    const double total = f_norm2_total(xi, c_used);
    const double coef = f_tail_coefficient(xi, c_used);

    double u_half = std::max(extent_sigmas, 4.0) * beta;
    double m_half = detail::phase_half_extent(xi, c_used);
    for (int round = 0;; ++round) {
        const bool pump_ok = std::exp(-u_half * u_half / (4.0 * beta * beta)) <= pump_gate;
        const bool tail_ok = coef <= tail_gate * total * m_half * (1.0 + 1e-9);
        if (pump_ok && tail_ok) break;
        if (round >= 4)
            throw EdgeCriterionUnmet("build_jsa: coverage criteria unmet after 4 expansions");
        if (!pump_ok) u_half *= 1.5;
        if (!tail_ok) m_half *= 1.5;
    }

    // Parallelogram |x+y| <= u_half, |Phi - pk| <= m_half mapped to the
    // bounding rectangle; the grid is centered so that Phi = pk on the pump
    // ridge, i.e. at scaled offsets (-(pk-phi0), +(pk-phi0)).
    const double hx = u_half * std::abs(cs) * kappa + m_half;
    const double hy = u_half * std::abs(sn) * kappa + m_half;
    const int n = n_points;

    JsaGrid grid;
    grid.config = cfg;
    grid.ds_axis = Eigen::VectorXd::LinSpaced(n, -hx, hx).array() - (pk - cfg.phi0);
    grid.di_axis = Eigen::VectorXd::LinSpaced(n, -hy, hy).array() + (pk - cfg.phi0);
    grid.values.resize(n, n);

    // Sized so the tabulated range also outlasts the exponential shoulder of
    // |F| (rate gamma); corners of the bounding box can probe phases well
    // beyond the retained parallelogram, and only past ~6/gamma is the
    // endpoint asymptote a faithful stand-in.
    const auto prof =
        f_profile_cached(xi, c_used, std::max(m_half, 3.0 / f_shoulder_rate(xi, c_used)));
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        const double x = -hx + 2.0 * hx * static_cast<double>(i) / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double y = -hy + 2.0 * hy * j / (n - 1);
            const double u = x + y;
            const double pump = std::exp(-u * u / (4.0 * beta * beta));
            const double phi = pk + kappa * (y * cs - x * sn);
            grid.values(static_cast<Eigen::Index>(i), j) = pump * (*prof)(phi);
        }
    });
    return grid;
}

// Dense samples of F(xi, phi) on an explicit uniform axis; two slices built
// on the same axis are directly comparable (fidelity and friends).
inline JsaSlice build_jsa_slice(double xi, double c, double phi_lo, double phi_hi,
                                int n_points) {
    if (!(xi > 0.0)) throw ValidationError("build_jsa_slice: xi must be positive");
    if (!(phi_hi > phi_lo) || n_points < 64)
        throw ValidationError("build_jsa_slice: need phi_hi > phi_lo and n_points >= 64");
    JsaSlice s;
    s.xi = xi;
    s.c = c;
    s.phi_axis = Eigen::VectorXd::LinSpaced(n_points, phi_lo, phi_hi);
    const double h = (phi_hi - phi_lo) / (n_points - 1);
    const std::vector<double> vals = f_dense_samples(xi, c, phi_lo, h, n_points);
    s.amplitude = Eigen::Map<const Eigen::VectorXd>(vals.data(), n_points);
    return s;
}

// Auto-extent variant: the axis spans the retained phase window about the
// peak at ~0.02 rad resolution.
inline JsaSlice build_jsa_slice(double xi, double c = 0.0) {
    if (!(xi > 0.0)) throw ValidationError("build_jsa_slice: xi must be positive");
    const double pk = f_peak_phi(xi, c).first;
    const double half = detail::phase_half_extent(xi, c);
    const int n = 2 * static_cast<int>(std::ceil(half / 0.02)) + 1;
    return build_jsa_slice(xi, c, pk - half, pk + half, n);
}

}  // namespace spdc
