#pragma once

// Unit conventions used throughout:
//   frequencies  : ordinary frequency in MHz (never angular; 2*pi applied where phases form)
//   pulse times  : ns
//   relaxation   : us   (1 us = 1000 ns)
// A frequency f [MHz] acting for t [us] accumulates phase 2*pi*f*t; for t in ns the
// product carries an extra 1e-3.

#include <cmath>

namespace qdsim {

inline constexpr double kPi = 3.1415926535897932384626433832795;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kNsPerUs = 1000.0;

inline constexpr double ns_to_us(double t_ns) { return t_ns * 1e-3; }
inline constexpr double us_to_ns(double t_us) { return t_us * 1e3; }

// phase [rad] accumulated by f [MHz] over t [ns]
inline double phase_rad(double f_mhz, double t_ns) {
    return kTwoPi * f_mhz * ns_to_us(t_ns);
}

// Gaussian free-induction-decay convention: visibility exp(-(tau/T2*)^2) for a
// quasi-static detuning spread of width sigma [MHz] gives T2* = sqrt(2)/(2*pi*sigma).
inline double t2star_from_sigma_us(double sigma_mhz) {
    return std::sqrt(2.0) / (kTwoPi * sigma_mhz);
}
inline double sigma_from_t2star_us(double t2star_us) {
    return std::sqrt(2.0) / (kTwoPi * t2star_us);
}

} // namespace qdsim
