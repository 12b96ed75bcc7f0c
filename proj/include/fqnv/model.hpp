// model.hpp -- parameter types and closed-form quantities of the rotating-frame
// flux-qubit / NV-ensemble model.
//
// Frequencies are linear MHz throughout (see units.hpp).  The frame rotates at
// frame_frequency; a spin's bright/dark modes sit at
//   omega_b = d - frame - E_y,   omega_d = d - frame + E_y,
// coupled to each other by J = axial Zeeman and J' = E_x, where the in-plane
// strain enters as E_x = E cos 2phi, E_y = E sin 2phi with E = hypot(e1, e2).
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fqnv/units.hpp"

namespace fqnv {

struct FluxQubitParams {
  double gap = 2878.0;   // tunnel splitting, MHz
  double bias = 0.0;     // energy bias, MHz
  double gamma_c = 0.3;  // qubit amplitude decay, MHz
};

// One sampled NV- center.  b_z_zeeman_k is the signed axial Zeeman frequency
// g_e mu_B B_z / 2pi and already contains the external-field projection, the
// static P1 field noise, and the hyperfine offset.
struct NvSpin {
  double d_k = 2878.0;
  double e1_k = 0.0;
  double e2_k = 0.0;
  double phi_k = 0.0;          // radians, [0, 2pi)
  double b_z_zeeman_k = 0.0;
  double gamma_b = 0.0;
  double gamma_d = 0.0;
};

// Bright/dark pair of one spin, expressed in the rotating frame.  Decay rates
// ride along because the equations of motion need them per spin row.
struct RotatingFrameSpin {
  double omega_b = 0.0;
  double omega_d = 0.0;
  double j = 0.0;        // axial Zeeman coupling between bright and dark
  double j_prime = 0.0;  // strain coupling E_x
  double gamma_b = 0.0;
  double gamma_d = 0.0;
};

struct RotatingFrameSystem {
  double delta_c = 0.0;          // qubit detuning from frame, MHz
  double g_eff = 0.0;            // per-spin coupling g', MHz
  double gamma_c = 0.0;
  std::vector<RotatingFrameSpin> spins;
  double frame_frequency = 0.0;  // MHz
};

struct QubitFrequencyCoupling {
  double omega_c;  // sqrt(bias^2 + gap^2)
  double g_eff;    // g * gap / omega_c
};

inline QubitFrequencyCoupling qubit_frequency_and_coupling(const FluxQubitParams& fq,
                                                           double g) {
  if (fq.gap <= 0.0) throw std::invalid_argument("qubit gap must be positive");
  if (g < 0.0) throw std::invalid_argument("coupling must be nonnegative");
  const double omega_c = std::hypot(fq.bias, fq.gap);
  return {omega_c, g * fq.gap / omega_c};
}

inline RotatingFrameSpin rotating_frame_spin(const NvSpin& spin, double frame_frequency) {
  const double e = std::hypot(spin.e1_k, spin.e2_k);
  const double ex = e * std::cos(2.0 * spin.phi_k);
  const double ey = e * std::sin(2.0 * spin.phi_k);
  const double detuning = spin.d_k - frame_frequency;
  return {detuning - ey, detuning + ey, spin.b_z_zeeman_k, ex,
          spin.gamma_b, spin.gamma_d};
}

struct NvEigenenergies {
  double e0;
  double e_plus;
  double e_minus;
};

inline NvEigenenergies single_nv_eigenenergies(double e_x, double e_y, double zeeman,
                                               double d) {
  if (d <= 0.0) throw std::invalid_argument("zero-field splitting must be positive");
  const double s = std::sqrt(e_x * e_x + e_y * e_y + zeeman * zeeman);
  return {0.0, d + s, d - s};
}

struct ExpandedSplitting {
  double plus;   // zeeman + (E_x^2 + E_y^2) / (2 zeeman)
  double minus;  // zeeman - (E_x^2 + E_y^2) / (2 zeeman)
};

// Second-order expansion of the excited-state splitting in E/zeeman; error
// relative to the exact sqrt is bounded by (E_x^2+E_y^2)^2 / (8 zeeman^3).
inline ExpandedSplitting eigenenergy_large_field_expansion(double e_x, double e_y,
                                                           double zeeman) {
  if (zeeman <= 0.0) throw std::invalid_argument("expansion requires zeeman > 0");
  const double quad = (e_x * e_x + e_y * e_y) / (2.0 * zeeman);
  return {zeeman + quad, zeeman - quad};
}

// The four NV orientation classes in the diamond lattice, up to inversion.
inline constexpr std::array<std::array<double, 3>, 4> nv_axes_unnormalized{{
    {{1.0, 1.0, 1.0}},
    {{1.0, -1.0, -1.0}},
    {{-1.0, 1.0, -1.0}},
    {{-1.0, -1.0, 1.0}},
}};

// Axial Zeeman frequency (MHz) picked up by each orientation class from a
// field of b_magnitude mT along the given crystallographic direction.  Only
// the magnitude of the projection matters; transverse components are dropped
// (suppressed by D much greater than the Zeeman energy).
inline std::array<double, 4> project_field_to_nv_axes(double b_magnitude,
                                                      const std::array<double, 3>& axis) {
  const double norm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (norm == 0.0) throw std::invalid_argument("field axis must be a nonzero vector");
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& n = nv_axes_unnormalized[i];
    const double dot = (axis[0] * n[0] + axis[1] * n[1] + axis[2] * n[2]) /
                       (norm * std::sqrt(3.0));
    out[i] = ge_mub_mhz_per_mt * b_magnitude * std::abs(dot);
  }
  return out;
}

}  // namespace fqnv
