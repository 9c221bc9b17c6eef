#pragma once

// Schmidt spectrum of the two-photon amplitude: single-photon spectral
// purity, pump-bandwidth optimization, purity-versus-focusing curves, and
// the fidelity between amplitudes with and without the residual quadratic
// phase term.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "spdc/errors.hpp"
#include "spdc/linalg.hpp"
#include "spdc/model.hpp"
#include "spdc/optimize.hpp"
#include "spdc/overlap.hpp"
#include "spdc/spectral.hpp"
#include "spdc/threads.hpp"

namespace spdc {

// Normalized Schmidt weights of a JSA grid, largest first.
struct SchmidtResult {
    Eigen::VectorXd sigmas;        // nonincreasing, sum exactly 1
    double purity = 0.0;           // sum of squared weights
    double schmidt_number = 0.0;   // 1 / purity
    Eigen::Index n_kept = 0;       // weights above 1e-12
};

// Schmidt decomposition of the grid matrix: weights are the squared singular
// values, normalized to unit sum. Grid spacing is uniform, so the quadrature
// weight is a constant that cancels in the normalization.
inline SchmidtResult schmidt(const JsaGrid& grid) {
    if (grid.values.size() == 0)
        throw ValidationError("schmidt: grid holds no values");
    const Eigen::VectorXd sv = singular_values(grid.values);
    Eigen::VectorXd w = sv.array().square();
    const double total = w.sum();
    if (!(total > 0.0))
        throw ValidationError("schmidt: grid is identically zero");
    w /= total;

    SchmidtResult out;
    out.sigmas = w;
    out.purity = w.squaredNorm();
    out.schmidt_number = 1.0 / out.purity;
    out.n_kept = (w.array() > 1e-12).count();
    return out;
}

namespace detail {

// Purity via the Gram-trace identity: with G = A^dag A, sum sigma^2 equals
// ||G||_F^2 / tr(G)^2, so the optimizer's inner loop skips the eigensolve.
// Grids whose imaginary part is exactly zero (everything build_jsa emits)
// take the cheaper real-arithmetic product.
inline double grid_purity(const Eigen::MatrixXcd& values) {
    double fro2 = 0.0, tr = 0.0;
    if (values.imag().isZero(0.0)) {
        const Eigen::MatrixXd a = values.real();
        Eigen::MatrixXd g;
        g.noalias() = a.transpose() * a;
        fro2 = g.squaredNorm();
        tr = g.trace();
    } else {
        Eigen::MatrixXcd g;
        g.noalias() = values.adjoint() * values;
        fro2 = g.squaredNorm();
        tr = g.trace().real();
    }
    if (!(tr > 0.0))
        throw ValidationError("purity: grid is identically zero");
    return fro2 / (tr * tr);
}

}  // namespace detail

// Equal-foci degenerate configuration carrying exactly the scaled knobs the
// Schmidt spectrum depends on: aggregate focal parameter, group-velocity
// angle, and pump bandwidth over the frequency scale.
inline DimensionlessConfig scaled_config(double xi, double theta, double pump_bw) {
    DimensionlessConfig cfg;
    cfg.xi_p = cfg.xi_s = cfg.xi_i = xi;
    cfg.theta = theta;
    cfg.pump_bw_scaled = pump_bw;
    cfg.Omega = 1.0;
    return cfg;
}

// Purity of the scaled-coordinate amplitude at the given focusing, angle,
// and pump bandwidth; c keeps the quadratic phase-mismatch term when nonzero.
// The monochromatic limit is excluded (the grid degenerates to a line).
inline double purity_scaled(double xi, double theta, double pump_bw, int n_points = 512,
                            double c = 0.0) {
    const JsaGrid grid = build_jsa(scaled_config(xi, theta, pump_bw), n_points, 7.0,
                                   /*use_exact_c=*/true, c);
    return detail::grid_purity(grid.values);
}

struct PumpOptimum {
    double bw_star = 0.0;      // maximizing pump bandwidth over the scale
    double purity_star = 0.0;  // purity there
    std::vector<Warning> warnings;  // BandwidthAtBoxEdge when pinned to an edge
};

// Maximizes purity over the pump bandwidth on the log-spaced box
// [1e-2, 1e3]: a 16-point coarse scan brackets the optimum, then
// golden-section refines the bracket to 1e-4 log width. An optimum on the
// box edge is returned as-is with a warning (the true optimum may sit
// outside; as the angle approaches zero it runs away to infinity).
inline PumpOptimum optimize_pump_bandwidth(double xi, double theta, int n_points = 512,
                                           double c = 0.0) {
    if (!(xi > 0.0))
        throw ValidationError("optimize_pump_bandwidth: xi must be positive");
    const double lo = std::log(1e-2), hi = std::log(1e3);
    constexpr int coarse = 16;
    auto eval = [&](double t) { return purity_scaled(xi, theta, std::exp(t), n_points, c); };

    double ts[coarse], ps[coarse];
    int best = 0;
    for (int k = 0; k < coarse; ++k) {
        ts[k] = lo + (hi - lo) * k / (coarse - 1);
        ps[k] = eval(ts[k]);
        if (ps[k] > ps[best]) best = k;
    }

    PumpOptimum out;
    if (best == 0 || best == coarse - 1) {
        out.bw_star = std::exp(ts[best]);
        out.purity_star = ps[best];
        out.warnings.push_back(Warning::BandwidthAtBoxEdge);
        return out;
    }
    const auto [t_star, p_star] = golden_max(eval, ts[best - 1], ts[best + 1], 1e-4);
    out.bw_star = std::exp(t_star);
    out.purity_star = p_star;
    return out;
}

struct PurityPoint {
    double xi = 0.0;
    double bw_star = 0.0;
    double purity_star = 0.0;
    bool at_edge = false;
};

// Bandwidth-optimized purity across focusing values at a fixed angle.
inline std::vector<PurityPoint> purity_curve(double theta, const std::vector<double>& xi_list,
                                             int n_points = 512, double c = 0.0) {
    for (double xi : xi_list)
        if (!(xi > 0.0))
            throw ValidationError("purity_curve: focal parameters must be positive");
    std::vector<PurityPoint> out(xi_list.size());
    parallel_for(xi_list.size(), [&](std::size_t k) {
        const PumpOptimum opt = optimize_pump_bandwidth(xi_list[k], theta, n_points, c);
        out[k] = {xi_list[k], opt.bw_star, opt.purity_star, !opt.warnings.empty()};
    });
    return out;
}

// Overlap fidelity |<a|b>|^2 / (<a|a><b|b>) by discrete inner product.
// Comparable states must live on identical axes.
inline double fidelity(const JsaGrid& a, const JsaGrid& b) {
    if (a.ds_axis.size() != b.ds_axis.size() || a.di_axis.size() != b.di_axis.size() ||
        !a.ds_axis.isApprox(b.ds_axis, 0.0) || !a.di_axis.isApprox(b.di_axis, 0.0))
        throw AxisMismatch("fidelity: grids live on different axes");
    const std::complex<double> ip = a.values.conjugate().cwiseProduct(b.values).sum();
    const double na = a.values.squaredNorm();
    const double nb = b.values.squaredNorm();
    if (!(na > 0.0) || !(nb > 0.0))
        throw ValidationError("fidelity: zero-norm grid");
    return std::norm(ip) / (na * nb);
}

inline double fidelity(const JsaSlice& a, const JsaSlice& b) {
    if (a.phi_axis.size() != b.phi_axis.size() || !a.phi_axis.isApprox(b.phi_axis, 0.0))
        throw AxisMismatch("fidelity: slices live on different phase axes");
    const double ip = a.amplitude.dot(b.amplitude);
    const double na = a.amplitude.squaredNorm();
    const double nb = b.amplitude.squaredNorm();
    if (!(na > 0.0) || !(nb > 0.0))
        throw ValidationError("fidelity: zero-norm slice");
    return ip * ip / (na * nb);
}

// Re-evaluates the phase-matching factor of an existing grid with the exact
// kernel at residual c, keeping axes and pump envelope fixed, so the result
// shares axes with its source and the two are directly comparable.
inline JsaGrid with_correction(const JsaGrid& grid, double c) {
    const DimensionlessConfig& cfg = grid.config;
    cfg.validate();
    if (!(cfg.pump_bw_scaled > 0.0))
        throw MonochromaticPump("with_correction: grid carries no pump envelope");
    if (grid.values.rows() != grid.ds_axis.size() ||
        grid.values.cols() != grid.di_axis.size())
        throw ValidationError("with_correction: axes do not match value dimensions");
    const double cs = std::cos(cfg.theta);
    const double sn = std::sin(cfg.theta);
    if (!(cs + sn > 1e-6))
        throw ValidationError("with_correction: theta at or below -45 deg is unbounded");

    const AuxParams aux = aux_params(cfg);
    const double xi = aux.xi_agg;
    const double kappa = 1.0 / (cs + sn);
    const double beta = cfg.pump_bw_scaled;
    const double pk = f_peak_phi(xi, c).first;

    // Phase is linear in the offsets, so the axis corners bound the reach of
    // the table; the shoulder term keeps the spline valid past the slow
    // exponential falloff.
    double reach = 0.0;
    const Eigen::Index rows = grid.values.rows(), cols = grid.values.cols();
    for (double ds : {grid.ds_axis(0), grid.ds_axis(rows - 1)})
        for (double di : {grid.di_axis(0), grid.di_axis(cols - 1)}) {
            const double phi = cfg.phi0 + kappa * (di * cs - ds * sn);
            reach = std::max(reach, std::abs(phi - pk));
        }
    const double shoulder = 6.0 / f_shoulder_rate(xi, c);
    const auto prof = f_profile_cached(xi, c, std::max({reach, shoulder, 100.0}));

    JsaGrid out = grid;
    parallel_for(static_cast<std::size_t>(rows), [&](std::size_t i) {
        const double ds = grid.ds_axis(static_cast<Eigen::Index>(i));
        for (Eigen::Index j = 0; j < cols; ++j) {
            const double di = grid.di_axis(j);
            const double u = ds + di;
            const double pump = std::exp(-u * u / (4.0 * beta * beta));
            const double phi = cfg.phi0 + kappa * (di * cs - ds * sn);
            out.values(static_cast<Eigen::Index>(i), j) = pump * (*prof)(phi);
        }
    });
    return out;
}

// Fidelity between the zero-correction amplitude and the exact kernel at
// residual c, on a shared phase axis. The window covers both peaks plus the
// larger of the retained-mass policy extent and fourteen e-foldings of the
// slower exponential shoulder, so the excluded tails are negligible against
// the quoted digits.
inline double correction_fidelity(double xi, double c) {
    if (!(xi > 0.0))
        throw ValidationError("correction_fidelity: xi must be positive");
    const double pk0 = f_peak_phi(xi, 0.0).first;
    const double pkc = f_peak_phi(xi, c).first;
    const double ext =
        std::max({detail::phase_half_extent(xi, 0.0), detail::phase_half_extent(xi, c),
                  14.0 / std::min(f_shoulder_rate(xi, 0.0), f_shoulder_rate(xi, c))});
    const double lo = std::min(pk0, pkc) - ext;
    const double hi = std::max(pk0, pkc) + ext;
    const double h = 0.02;
    const int n = 2 * static_cast<int>(std::ceil(0.5 * (hi - lo) / h)) + 1;
    const JsaSlice base = build_jsa_slice(xi, 0.0, lo, hi, n);
    const JsaSlice corrected = build_jsa_slice(xi, c, lo, hi, n);
    return fidelity(base, corrected);
}

}  // namespace spdc
