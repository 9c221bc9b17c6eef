#pragma once

// Brightness-heralding trade-off frontier: for a ladder of pair-probability
// levels, the focal parameters that maximize the signal or symmetric
// heralding ratio subject to the pair probability sitting exactly on the
// level. All quantities come from the zero-correction closed forms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "spdc/collection.hpp"
#include "spdc/constants.hpp"
#include "spdc/errors.hpp"
#include "spdc/model.hpp"
#include "spdc/optimize.hpp"

namespace spdc {

enum class Metric { signal, symmetric };

struct ParetoPoint {
    double xi_p = 0.0, xi_s = 0.0, xi_i = 0.0;
    double p_si_rel = 0.0;  // pair probability in units of its asymptotic maximum
    double eta = 0.0;       // the optimized heralding ratio
    Metric metric = Metric::signal;
};

namespace detail {

inline void validate_ratios(double ks_over_kp, double ki_over_kp) {
    if (!(ks_over_kp > 0.0) || ks_over_kp >= 1.0 || !(ki_over_kp > 0.0) ||
        ki_over_kp >= 1.0)
        throw ValidationError("frontier: wavenumber ratios must lie in (0, 1)");
    if (std::abs(1.0 - ks_over_kp - ki_over_kp) > 1e-6)
        throw ValidationError("frontier: wavenumber ratios must sum to ~1 "
                              "(collinear mismatch is taken as negligible)");
}

inline DimensionlessConfig frontier_cfg(double a, double b, double xi_p, double xi_s,
                                        double xi_i) {
    DimensionlessConfig cfg;
    cfg.xi_p = xi_p;
    cfg.xi_s = xi_s;
    cfg.xi_i = xi_i;
    cfg.ks_over_kp = a;
    cfg.ki_over_kp = b;
    cfg.dk_over_kp = 1.0 - a - b;
    return cfg;
}

struct LevelSolution {
    ParetoPoint point;
    std::vector<double> q;  // log focal parameters of the optimum
};

// Single-level constrained maximization by exterior penalty: minimize
// -eta + w (p/level - 1)^2 over q = ln(xi_p, xi_s, xi_i), escalating w until
// the constraint residual is pinned, restarting the simplex from the corners
// and center of the log box [1e-3, 1e3]^3 plus any extra seeds supplied by
// the caller (warm starts from neighboring levels).
inline LevelSolution solve_level(Metric metric, double a, double b, double level,
                                 const std::vector<std::vector<double>>& extra_seeds) {
    validate_ratios(a, b);
    if (!(level > 0.0))
        throw ValidationError("frontier: level must be positive");
    if (level >= 1.0)
        throw ConstraintInfeasible(
            "frontier: the pair probability reaches its ceiling only asymptotically");

    const double p_max = pi / 8.0;
    auto probe = [&](const std::vector<double>& q) {
        const DimensionlessConfig cfg =
            frontier_cfg(a, b, std::exp(q[0]), std::exp(q[1]), std::exp(q[2]));
        const CollectionReport rep = pair_probability(cfg);
        const double eta = metric == Metric::signal ? rep.eta_s : rep.eta_si;
        return std::pair<double, double>{eta, rep.p_si_rel / p_max};
    };

    std::vector<std::vector<double>> seeds;
    const double edge = std::log(1e3);
    for (int mask = 0; mask < 8; ++mask)
        seeds.push_back({mask & 1 ? edge : -edge, mask & 2 ? edge : -edge,
                         mask & 4 ? edge : -edge});
    seeds.push_back({0.0, 0.0, 0.0});
    seeds.insert(seeds.end(), extra_seeds.begin(), extra_seeds.end());

    constexpr double weights[] = {1e2, 1e4, 1e6, 1e8};
    bool found = false;
    double best_eta = 0.0;
    std::vector<double> best_q;
    for (const auto& seed : seeds) {
        std::vector<double> x = seed;
        for (double w : weights) {
            auto objective = [&](const std::vector<double>& q) {
                double wall = 0.0;
                for (double v : q) {
                    const double over = std::abs(v) - 25.0;
                    if (over > 0.0) wall += over * over;
                }
                if (wall > 0.0) return 1e6 + wall;
                const auto [eta, p_hat] = probe(q);
                const double resid = p_hat / level - 1.0;
                return -eta + w * resid * resid;
            };
            x = nelder_mead_min(objective, x, {0.5, 0.5, 0.5}).first;
        }
        const auto [eta, p_hat] = probe(x);
        if (std::abs(p_hat / level - 1.0) >= 1e-4) continue;
        if (!found || eta > best_eta) {
            found = true;
            best_eta = eta;
            best_q = x;
        }
    }
    if (!found)
        throw ConstraintInfeasible(
            "frontier: no focusing met the pair-probability level at the required residual");

    const auto [eta, p_hat] = probe(best_q);
    LevelSolution sol;
    sol.point = {std::exp(best_q[0]), std::exp(best_q[1]), std::exp(best_q[2]),
                 p_hat, eta, metric};
    sol.q = best_q;
    return sol;
}

}  // namespace detail

// Best heralding attainable at one pair-probability level (in units of the
// asymptotic maximum), for degenerate or near-degenerate wavenumber ratios.
inline ParetoPoint frontier_point(Metric metric, double ks_over_kp, double ki_over_kp,
                                  double level) {
    return detail::solve_level(metric, ks_over_kp, ki_over_kp, level, {}).point;
}

// Full trade-off curve at n_points interior levels k/(n_points+1). Levels are
// processed from the brightest down, each warm-started from its predecessor;
// a repair sweep re-solves any level that ends up dominated by a brighter
// neighbor (the frontier must not reward brightness with heralding). Points
// come back sorted by p_si_rel.
inline std::vector<ParetoPoint> frontier(Metric metric, double ks_over_kp,
                                         double ki_over_kp, int n_points = 50) {
    detail::validate_ratios(ks_over_kp, ki_over_kp);
    if (n_points < 1)
        throw ValidationError("frontier: n_points must be positive");

    std::vector<ParetoPoint> pts(static_cast<std::size_t>(n_points));
    std::vector<std::vector<double>> qs(static_cast<std::size_t>(n_points));
    std::vector<std::vector<double>> warm;
    for (int k = n_points; k >= 1; --k) {
        const double level = double(k) / (n_points + 1);
        detail::LevelSolution sol =
            detail::solve_level(metric, ks_over_kp, ki_over_kp, level, warm);
        pts[k - 1] = sol.point;
        qs[k - 1] = sol.q;
        warm = {sol.q};
    }

    for (int k = 0; k + 1 < n_points; ++k) {
        if (pts[k].eta + 1e-9 >= pts[k + 1].eta) continue;
        const double level = double(k + 1) / (n_points + 1);
        detail::LevelSolution sol = detail::solve_level(metric, ks_over_kp, ki_over_kp,
                                                        level, {qs[k + 1]});
        if (sol.point.eta > pts[k].eta) {
            pts[k] = sol.point;
            qs[k] = sol.q;
        }
    }

    std::sort(pts.begin(), pts.end(),
              [](const ParetoPoint& l, const ParetoPoint& r) {
                  return l.p_si_rel < r.p_si_rel;
              });
    return pts;
}

}  // namespace spdc
