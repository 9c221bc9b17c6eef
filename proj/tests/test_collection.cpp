#include <doctest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "spdc/collection.hpp"
#include "spdc/constants.hpp"
#include "spdc/model.hpp"
#include "spdc/optimize.hpp"

using namespace spdc;
using fixtures::reference_source;
using fixtures::set_waists;

namespace {

DimensionlessConfig foci_cfg(double xi_p, double xi_s, double xi_i,
                             double a = 0.5, double b = 0.5) {
    DimensionlessConfig cfg;
    cfg.xi_p = xi_p;
    cfg.xi_s = xi_s;
    cfg.xi_i = xi_i;
    cfg.ks_over_kp = a;
    cfg.ki_over_kp = b;
    cfg.theta = pi / 4;
    cfg.Omega = 1e12;
    return cfg;
}

}  // namespace

TEST_CASE("pair_probability: closed form against its asymptote") {
    // Matched degenerate focusing: arctan(xi)/4, saturating at pi/8.
    const CollectionReport at22 = pair_probability(foci_cfg(2.2, 2.2, 2.2));
    CHECK(at22.p_si_rel == doctest::Approx(std::atan(2.2) / 4.0).epsilon(1e-12));
    CHECK(at22.p_si_rel / at22.p_si_bound == doctest::Approx(0.72840).epsilon(1e-4));

    const CollectionReport deep = pair_probability(foci_cfg(1e9, 1e9, 1e9));
    CHECK(deep.p_si_rel / (pi / 8.0) == doctest::Approx(1.0).epsilon(1e-8));

    const CollectionReport weak = pair_probability(foci_cfg(1e-10, 1e-10, 1e-10));
    CHECK(weak.p_si_rel < 1e-10);
    CHECK(weak.p_si_rel > 0.0);
}

TEST_CASE("pair_probability: physical layer and source cross-check") {
    const PhysicalSource src = reference_source();
    const DimensionlessConfig cfg = reduce(src);
    const CollectionReport rep = pair_probability(cfg, &src);

    CHECK(rep.p_si == doctest::Approx(pair_prefactor(src) * rep.p_si_rel).epsilon(1e-12));
    CHECK(rep.p_si > 0.0);
    CHECK(rep.p_si <= rep.p_si_bound);
    CHECK(rep.p_si_bound == doctest::Approx(pair_probability_bound(src)).epsilon(1e-12));
    // Representative nonlinear-crystal numbers collect more than 1e-9 pairs
    // per pump photon at the asymptote.
    CHECK(rep.p_si_bound / src.N_p > 1e-9);

    DimensionlessConfig off = cfg;
    off.xi_p *= 1.001;
    CHECK_THROWS_AS(pair_probability(off, &src), InconsistentInputs);
}

TEST_CASE("pair_probability_bound: geometry-free ceiling") {
    const PhysicalSource base = reference_source();
    const double b0 = pair_probability_bound(base);

    PhysicalSource reshaped = base;
    reshaped.L *= 10.0;
    reshaped.w_p *= 3.0;
    reshaped.w_s *= 0.2;
    reshaped.w_i *= 5.0;
    CHECK(pair_probability_bound(reshaped) == b0);

    PhysicalSource stronger = base;
    stronger.chi_eff *= 2.0;
    CHECK(pair_probability_bound(stronger) / b0 == doctest::Approx(4.0).epsilon(1e-12));

    PhysicalSource degen = base;
    degen.ni_g = degen.ns_g;
    CHECK_THROWS_AS(pair_probability_bound(degen), DegenerateDispersion);
}

TEST_CASE("pair_probability_exact: consistent with the closed form at zero correction") {
    for (const auto& cfg : {foci_cfg(0.5, 0.5, 0.5), foci_cfg(2.2, 2.2, 2.2),
                            foci_cfg(1.0, 2.0, 0.5), foci_cfg(100.0, 100.0, 100.0)}) {
        const double exact = pair_probability_exact(cfg, 0.0);
        const double closed = pair_probability(cfg).p_si_rel;
        CHECK(exact == doctest::Approx(closed).epsilon(1.5e-4));
    }
}

TEST_CASE("pair_probability_exact: worst-case correction error envelope") {
    const double c = worst_case_c();
    CHECK(c == doctest::Approx(-0.8 / 7.5).epsilon(1e-12));

    const double expected_err[] = {0.038697, 0.134533, 0.186854};
    int k = 0;
    for (double xi : {1.0, 10.0, 100.0}) {
        const DimensionlessConfig cfg = foci_cfg(xi, xi, xi);
        const double exact = pair_probability_exact(cfg, c);
        const double approx = pair_probability(cfg).p_si_rel;
        const double err = std::abs(1.0 - approx / exact);
        CHECK(err == doctest::Approx(expected_err[k++]).epsilon(5e-3));
    }

    // The corrected curve saturates near, never beyond, the asymptote.
    const double saturated = pair_probability_exact(foci_cfg(100.0, 100.0, 100.0), c);
    CHECK(saturated < pi / 8.0);
    CHECK(saturated > 0.7 * pi / 8.0);
}

TEST_CASE("signal_probability: idler independence and saturation") {
    const DimensionlessConfig base = foci_cfg(1.3, 0.8, 1.0);
    const double p0 = signal_probability(base);
    for (double xi_i : {0.1, 1.0, 17.0, 100.0}) {
        DimensionlessConfig cfg = base;
        cfg.xi_i = xi_i;
        CHECK(signal_probability(cfg) == p0);  // exactly, by construction
    }

    // Matched degenerate focusing: arctan(xi)/3.
    CHECK(signal_probability(foci_cfg(1.0, 1.0, 1.0)) ==
          doctest::Approx(std::atan(1.0) / 3.0).epsilon(1e-12));

    // Saturation at (pi/2)/(A_s B_s) for tight signal focusing.
    const double sat = signal_probability(foci_cfg(1e9, 1e9, 1e9));
    CHECK(sat * 3.0 / (pi / 2.0) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("signal_probability_lg_sum: mode-sum oracle matches the closed form") {
    const double foci[][3] = {
        {0.3, 0.3, 0.3}, {1.0, 2.0, 0.5}, {3.0, 3.0, 9.0}, {10.0, 5.0, 20.0}, {30.0, 30.0, 30.0},
    };
    for (const auto& f : foci) {
        const DimensionlessConfig cfg = foci_cfg(f[0], f[1], f[2]);
        const double oracle = signal_probability_lg_sum(cfg, 1e-10);
        const double closed = signal_probability(cfg);
        CHECK(oracle == doctest::Approx(closed).epsilon(1e-8));
    }

    // A gigantic tolerance truncates after the fundamental mode, which under-
    // counts: every mode adds positive probability.
    const DimensionlessConfig cfg = foci_cfg(1.0, 1.0, 1.0);
    const double fundamental = signal_probability_lg_sum(cfg, 1e30);
    CHECK(fundamental < signal_probability(cfg));
    CHECK(fundamental > 0.0);

    CHECK_THROWS_AS(signal_probability_lg_sum(cfg, 0.0), ValidationError);
    // A nearly vanishing idler focus makes the mode ratio approach one; the
    // 500-mode budget cannot reach the tolerance there.
    CHECK_THROWS_AS(signal_probability_lg_sum(foci_cfg(1.0, 1.0, 1e-9), 1e-10),
                    SumNotConverged);
}

TEST_CASE("heralding_ratios: closed-form values and limits") {
    for (double xi : {0.3, 1.0, 2.2, 10.0}) {
        const CollectionReport rep = heralding_ratios(foci_cfg(xi, xi, xi));
        CHECK(rep.eta_s == doctest::Approx(0.75).epsilon(1e-12));
        CHECK(rep.eta_i == doctest::Approx(0.75).epsilon(1e-12));
        CHECK(rep.eta_si == doctest::Approx(0.75).epsilon(1e-12));
    }

    const CollectionReport nondeg = heralding_ratios(foci_cfg(1.0, 1.0, 1.0, 0.6, 0.4));
    CHECK(nondeg.eta_s == doctest::Approx(0.64).epsilon(1e-12));
    CHECK(nondeg.eta_i == doctest::Approx(0.84).epsilon(1e-12));
    CHECK(nondeg.eta_si == doctest::Approx(std::sqrt(0.64 * 0.84)).epsilon(1e-12));

    // Collimated pump: with the signal/idler foci re-optimized as the pump
    // opens up (matched foci shrinking like sqrt of the pump focus), both
    // heralding directions climb to unity. At fixed signal focus the limit is
    // arctan(xi_s)/xi_s instead, which tops out below one.
    double prev_eta = 0.0;
    for (double xp : {1e-2, 1e-4, 1e-6}) {
        const CollectionReport coll =
            heralding_ratios(foci_cfg(xp, std::sqrt(xp), std::sqrt(xp)));
        CHECK(coll.eta_si > prev_eta);
        CHECK(coll.eta_si <= 1.0 + 1e-12);
        prev_eta = coll.eta_si;
    }
    CHECK(prev_eta > 0.999);
    const CollectionReport fixed_s = heralding_ratios(foci_cfg(1e-6, 1.0, 1.0));
    CHECK(fixed_s.eta_si == doctest::Approx(std::atan(1.0) / 1.0).epsilon(1e-4));
}

TEST_CASE("heralding_ratios: exchange symmetry and bounds across focusing") {
    const DimensionlessConfig cfg = foci_cfg(1.7, 0.6, 4.0, 0.45, 0.55);
    DimensionlessConfig swapped = cfg;
    std::swap(swapped.xi_s, swapped.xi_i);
    std::swap(swapped.ks_over_kp, swapped.ki_over_kp);

    const CollectionReport a = heralding_ratios(cfg);
    const CollectionReport b = heralding_ratios(swapped);
    CHECK(a.p_s_rel == doctest::Approx(b.p_i_rel).epsilon(1e-12));
    CHECK(a.p_i_rel == doctest::Approx(b.p_s_rel).epsilon(1e-12));
    CHECK(a.eta_s == doctest::Approx(b.eta_i).epsilon(1e-12));
    CHECK(a.p_si_rel == doctest::Approx(b.p_si_rel).epsilon(1e-12));
    CHECK(a.eta_si == doctest::Approx(b.eta_si).epsilon(1e-12));

    for (double xp : {0.1, 1.0, 10.0, 100.0})
        for (double xs : {0.1, 1.0, 10.0, 100.0})
            for (double xj : {0.1, 1.0, 10.0, 100.0}) {
                const CollectionReport r = heralding_ratios(foci_cfg(xp, xs, xj));
                CHECK(r.eta_s > 0.0);
                CHECK(r.eta_s <= 1.0 + 1e-12);
                CHECK(r.eta_i > 0.0);
                CHECK(r.eta_i <= 1.0 + 1e-12);
                CHECK(r.eta_si > 0.0);
                CHECK(r.eta_si <= 1.0 + 1e-12);
                CHECK(r.p_si_rel <= std::min(r.p_s_rel, r.p_i_rel) * (1.0 + 1e-12));
            }
}

TEST_CASE("pair_probability: pump focus optimal at the signal focus") {
    for (double xi_s : {1.0, 2.2}) {
        const auto r = maximize(
            [&](const std::vector<double>& q) {
                return pair_probability(foci_cfg(q[0], xi_s, xi_s)).p_si_rel;
            },
            {0.05}, {50.0}, {true});
        CHECK(r.first[0] == doctest::Approx(xi_s).epsilon(0.01));
    }
}
