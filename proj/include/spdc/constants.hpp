#pragma once

#include <numbers>

namespace spdc {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// CODATA 2018
inline constexpr double hbar = 1.054571817e-34;     // J s
inline constexpr double eps0 = 8.8541878128e-12;    // F/m
inline constexpr double c_light = 299792458.0;      // m/s

// FWHM of |s|^2 for a Gaussian spectral amplitude with rms intensity width dw.
inline constexpr double fwhm_per_rms = 2.3548200450309493; // 2*sqrt(2*ln 2)

} // namespace spdc
