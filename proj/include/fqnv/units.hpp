// units.hpp -- frequency/time conventions shared by every module.
//
// All public quantities are linear frequencies in MHz (nu = omega/2pi) and
// times in ns.  The only place angular units appear is inside the dynamics
// kernel, via angular() below: 1 MHz (linear) = 2pi x 10^-3 rad/ns.
#pragma once

namespace fqnv {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// rad/ns per linear MHz.
inline constexpr double rad_ns_per_mhz = two_pi * 1.0e-3;

// NV gyromagnetic ratio, g_e mu_B / 2pi, in MHz per mT.
inline constexpr double ge_mub_mhz_per_mt = 28.0;

constexpr double angular(double mhz) { return mhz * rad_ns_per_mhz; }

}  // namespace fqnv
