#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "spdc/constants.hpp"
#include "spdc/errors.hpp"

namespace spdc {

// Full dimensional description of a collinear, Gaussian-beam pair source.
// Pump spectral amplitude is Gaussian with unit L2 norm; pump_bw is the rms
// width of the spectral intensity (FWHM = pump_bw * fwhm_per_rms).
struct PhysicalSource {
    double lambda_p = 0.0, lambda_s = 0.0, lambda_i = 0.0; // vacuum wavelength [m]
    double n_p = 0.0, n_s = 0.0, n_i = 0.0;                // refractive index
    double np_g = 0.0, ns_g = 0.0, ni_g = 0.0;             // group index
    double L = 0.0;        // crystal length [m]
    double Lambda = 0.0;   // poling period [m]; 0 = unpoled
    int m_qpm = 0;         // quasi-phase-matching order; 0 = unpoled
    double chi_eff = 0.0;  // effective nonlinear coefficient [m/V]
    double epsilon = 1.0;  // efficiency factor, (0, 1]
    double N_p = 1.0;      // mean pump photon number
    double w_p = 0.0, w_s = 0.0, w_i = 0.0; // beam waist [m]
    double pump_bw = 0.0;  // pump intensity rms bandwidth [rad/s]; 0 = monochromatic

    double k_p() const { return two_pi * n_p / lambda_p; }
    double k_s() const { return two_pi * n_s / lambda_s; }
    double k_i() const { return two_pi * n_i / lambda_i; }

    void validate() const {
        auto positive = [](double v, const char* what) {
            if (!(v > 0.0)) throw ValidationError(std::string("source: ") + what + " must be positive");
        };
        positive(lambda_p, "lambda_p");
        positive(lambda_s, "lambda_s");
        positive(lambda_i, "lambda_i");
        positive(n_p, "n_p");
        positive(n_s, "n_s");
        positive(n_i, "n_i");
        positive(L, "L");
        positive(w_p, "w_p");
        positive(w_s, "w_s");
        positive(w_i, "w_i");
        if (np_g < 1.0 || ns_g < 1.0 || ni_g < 1.0)
            throw ValidationError("source: group indices must be >= 1");
        if (!(epsilon > 0.0) || epsilon > 1.0)
            throw ValidationError("source: epsilon must lie in (0, 1]");
        if (N_p < 0.0) throw ValidationError("source: N_p must be nonnegative");
        if (Lambda < 0.0) throw ValidationError("source: Lambda must be nonnegative");
        if (m_qpm < 0) throw ValidationError("source: m_qpm must be nonnegative");
        if (pump_bw < 0.0) throw ValidationError("source: pump_bw must be nonnegative");

        const double lhs = 1.0 / lambda_p;
        const double rhs = 1.0 / lambda_s + 1.0 / lambda_i;
        if (std::abs(lhs - rhs) > 1e-9 * lhs)
            throw ValidationError("source: wavelengths violate energy conservation "
                                  "(1/lambda_p != 1/lambda_s + 1/lambda_i)");
    }
};

// Reduced parameter set every core computation consumes. theta is the
// group-velocity angle, Omega the (signed) frequency scale c/((n's-n'i) L).
struct DimensionlessConfig {
    double xi_p = 0.0, xi_s = 0.0, xi_i = 0.0; // focal parameters
    double ks_over_kp = 0.5, ki_over_kp = 0.5; // wavenumber ratios
    double dk_over_kp = 0.0;                   // collinear mismatch over k_p
    double phi0 = 0.0;                         // nominal phase mismatch [rad]
    double theta = 0.0;                        // group-velocity angle, (-pi/2, pi/2]
    double Omega = 0.0;                        // frequency scale [rad/s]
    double pump_bw_scaled = 0.0;               // pump bandwidth over |Omega|

    void validate() const {
        if (!(xi_p > 0.0) || !(xi_s > 0.0) || !(xi_i > 0.0))
            throw ValidationError("config: focal parameters must be positive");
        if (std::abs(ks_over_kp + ki_over_kp - (1.0 - dk_over_kp)) > 1e-9)
            throw ValidationError("config: wavenumber bookkeeping violated "
                                  "(ks + ki != kp - dk)");
        if (!(theta > -pi / 2) || theta > pi / 2)
            throw ValidationError("config: theta must lie in (-pi/2, pi/2]");
        if (pump_bw_scaled < 0.0)
            throw ValidationError("config: pump_bw_scaled must be nonnegative");
    }
};

// Derived quantities entering the overlap, collection, and heralding formulas.
struct AuxParams {
    double a_plus = 0.0, a_minus = 0.0; // waist-sum / waist-difference terms
    double b_plus = 0.0, b_minus = 0.0; // divergence counterparts
    double c_param = 0.0;               // residual quadratic denominator term
    double xi_agg = 0.0;                // aggregate focal parameter
    double a_s = 0.0, b_s = 0.0;        // signal-arm heralding auxiliaries
    double a_i = 0.0, b_i = 0.0;        // idler-arm counterparts
    double b_confocal_over_L = 0.0;     // aggregate confocal length over L
};

inline DimensionlessConfig reduce(const PhysicalSource& src) {
    src.validate();

    const double kp = src.k_p(), ks = src.k_s(), ki = src.k_i();
    const double dk = kp - ks - ki;

    DimensionlessConfig cfg;
    cfg.xi_p = src.L / (kp * src.w_p * src.w_p);
    cfg.xi_s = src.L / (ks * src.w_s * src.w_s);
    cfg.xi_i = src.L / (ki * src.w_i * src.w_i);
    cfg.ks_over_kp = ks / kp;
    cfg.ki_over_kp = ki / kp;
    cfg.dk_over_kp = dk / kp;

    double mismatch = dk;
    if (src.Lambda > 0.0 && src.m_qpm > 0)
        mismatch += src.m_qpm * two_pi / src.Lambda;
    cfg.phi0 = mismatch * src.L;

    const double dng = src.ns_g - src.ni_g;
    if (std::abs(dng) < 1e-12)
        throw DegenerateDispersion("reduce: signal and idler group indices coincide; "
                                   "the frequency scale Omega is undefined");

    // Two-argument arctangent, folded into (-pi/2, pi/2]: the angle enters
    // only through its tangent direction, so a pi shift is immaterial.
    double theta = std::atan2(src.ns_g - src.np_g, src.np_g - src.ni_g);
    if (theta > pi / 2) theta -= pi;
    if (theta <= -pi / 2) theta += pi;
    cfg.theta = theta;

    cfg.Omega = c_light / (dng * src.L);
    cfg.pump_bw_scaled = src.pump_bw / std::abs(cfg.Omega);
    return cfg;
}

inline AuxParams aux_params(const DimensionlessConfig& cfg) {
    const double a = cfg.ks_over_kp, b = cfg.ki_over_kp, d = cfg.dk_over_kp;
    const double rs = cfg.xi_s / cfg.xi_p;
    const double ri = cfg.xi_i / cfg.xi_p;

    AuxParams x;
    x.a_plus = 1.0 + a * rs + b * ri;
    x.a_minus = 1.0 + a * rs - b * ri;
    x.b_plus = (1.0 - d) + (a + d) / rs + (b + d) / ri;
    x.b_minus = (1.0 - d) + (a + d) / rs - (b + d) / ri;
    x.c_param = d * (1.0 / (rs * ri)) * x.a_plus / (x.b_plus * x.b_plus);

    const double xi_tilde = cfg.xi_s * cfg.xi_i / cfg.xi_p;
    x.xi_agg = (x.b_plus / x.a_plus) * xi_tilde;
    x.b_confocal_over_L = 1.0 / x.xi_agg;

    x.a_s = 2.0 * std::sqrt((1.0 + a * rs) * b);
    x.b_s = 2.0 * std::sqrt(((1.0 - d) + (a + d) / rs) * (b + d));
    x.a_i = 2.0 * std::sqrt((1.0 + b * ri) * a);
    x.b_i = 2.0 * std::sqrt(((1.0 - d) + (b + d) / ri) * (a + d));
    return x;
}

inline double c_bound(const DimensionlessConfig& cfg) {
    return std::abs(cfg.dk_over_kp) / (4.0 * cfg.ks_over_kp * cfg.ki_over_kp);
}

// Flags parameter regimes outside the range where the small-C and
// frequency-independence approximations were established. Never fails.
inline std::vector<Warning> validate_typicality(const PhysicalSource& src) {
    std::vector<Warning> out;
    if (src.L < 1e-3) out.push_back(Warning::ShortCrystal);
    if (src.Lambda > 0.0 && src.m_qpm >= 1 && src.Lambda < 5e-6)
        out.push_back(Warning::FinePoling);
    if (src.m_qpm > 1) out.push_back(Warning::HighQpmOrder);
    if (std::max(src.lambda_s, src.lambda_i) > 1.6e-6)
        out.push_back(Warning::LongWavelength);
    if (src.lambda_p > 0.8e-6) out.push_back(Warning::LongPumpWavelength);
    if (std::min({src.n_p, src.n_s, src.n_i}) < 1.5)
        out.push_back(Warning::LowIndex);
    return out;
}

} // namespace spdc
