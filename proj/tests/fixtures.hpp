#pragma once

#include <cmath>

#include "spdc/model.hpp"

namespace fixtures {

// Sets the three waists so reduce() lands on the requested focal parameters.
inline void set_waists(spdc::PhysicalSource& s, double xi_p, double xi_s, double xi_i) {
    s.w_p = std::sqrt(s.L / (s.k_p() * xi_p));
    s.w_s = std::sqrt(s.L / (s.k_s() * xi_s));
    s.w_i = std::sqrt(s.L / (s.k_i() * xi_i));
}

// 775 nm -> 2x1550 nm type-II-like source, poled for exact phase matching,
// group indices giving a 45-degree group-velocity angle.
inline spdc::PhysicalSource reference_source() {
    spdc::PhysicalSource s;
    s.lambda_p = 775e-9;
    s.lambda_s = 1550e-9;
    s.lambda_i = 1550e-9;
    s.n_p = 1.74;
    s.n_s = 1.745;
    s.n_i = 1.755;
    s.np_g = 1.80;
    s.ns_g = 1.83;
    s.ni_g = 1.77;
    s.L = 0.01;
    s.Lambda = 77.5e-6; // cancels the index mismatch exactly at first order
    s.m_qpm = 1;
    s.chi_eff = 1e-11;
    s.epsilon = 1.0;
    s.N_p = 1.0;
    s.pump_bw = 2.48e12;
    set_waists(s, 2.2, 2.2, 2.2);
    return s;
}

// Index-matched degenerate source: dk = 0 exactly, no poling needed,
// ks = ki = kp/2. Monochromatic pump unless a test overrides.
inline spdc::PhysicalSource degenerate_source() {
    spdc::PhysicalSource s;
    s.lambda_p = 780e-9;
    s.lambda_s = 1560e-9;
    s.lambda_i = 1560e-9;
    s.n_p = 1.60;
    s.n_s = 1.60;
    s.n_i = 1.60;
    s.np_g = 1.75;
    s.ns_g = 1.80;
    s.ni_g = 1.70;
    s.L = 0.005;
    s.chi_eff = 2e-12;
    set_waists(s, 1.0, 1.0, 1.0);
    return s;
}

} // namespace fixtures
