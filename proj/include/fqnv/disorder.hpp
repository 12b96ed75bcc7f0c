// disorder.hpp -- seeded sampling of the inhomogeneous NV ensemble.
//
// Every per-spin quantity draws from its own (realization, spin, channel)
// stream, so configurations that differ only in one width consume identical
// uniforms everywhere else.  The Lorentzian rejection test is phrased on the
// raw tan variate and is therefore independent of the width being sampled;
// sweeps over a FWHM stay draw-for-draw correlated.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fqnv/model.hpp"
#include "fqnv/rng.hpp"
#include "fqnv/units.hpp"

namespace fqnv {

struct DisorderSpec {
  std::size_t n_spins = 1200;
  double d_center = 2878.0;  // MHz
  double d_fwhm = 0.08;      // MHz
  double e_fwhm = 4.4;       // MHz, applied to E1 and E2 independently, centered at 0
  double bz_fwhm = 3.1;      // MHz, FWHM of the static axial field noise
  double hyperfine = 2.3;    // MHz, three-peak separation
  double b_ext_mt = 0.0;     // external field magnitude, mT
  std::array<double, 3> b_ext_axis{{1.0, 0.0, 0.0}};
  double gamma_b = 0.44;     // MHz
  double gamma_d = 0.44;     // MHz
  double truncation = 10.0;  // reject Lorentzian draws beyond this many FWHM
  std::uint64_t master_seed = 0;
};

struct EnsembleRealization {
  std::vector<NvSpin> spins;
  std::size_t realization_index = 0;
  std::uint64_t seed_used = 0;
};

// Quantile transform of the Lorentzian with scale FWHM/2; u in (0,1).
inline double lorentzian_quantile(double center, double fwhm, double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("uniform variate must be in (0,1)");
  return center + 0.5 * fwhm * std::tan(pi * (u - 0.5));
}

// Truncated Lorentzian draw: resample until |x - center| <= truncation * fwhm.
// The acceptance test |tan(pi(u-1/2))| <= 2 * truncation does not involve fwhm,
// so streams remain aligned across width sweeps.  fwhm = 0 degenerates to a
// point mass at center.
inline double sample_lorentzian(double center, double fwhm, double truncation,
                                SplitMix64& rng) {
  if (fwhm < 0.0) throw std::invalid_argument("fwhm must be nonnegative");
  if (truncation <= 0.0) throw std::invalid_argument("truncation must be positive");
  if (fwhm == 0.0) return center;
  for (;;) {
    const double t = std::tan(pi * (rng.uniform() - 0.5));
    if (std::abs(t) <= 2.0 * truncation) return center + 0.5 * fwhm * t;
  }
}

// One of {-hyperfine, 0, +hyperfine}, equal thirds of the unit interval.
inline double sample_hyperfine_offset(double hyperfine, double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("uniform variate must be in (0,1)");
  if (u < 1.0 / 3.0) return -hyperfine;
  if (u < 2.0 / 3.0) return 0.0;
  return hyperfine;
}

// Empirical strain-to-splitting ratio: delta_E is about fifty times delta_D.
inline double strain_width_from_d_width(double d_fwhm) {
  if (d_fwhm < 0.0) throw std::invalid_argument("fwhm must be nonnegative");
  return 50.0 * d_fwhm;
}

inline EnsembleRealization sample_ensemble(const DisorderSpec& spec,
                                           std::size_t realization_index) {
  if (spec.n_spins < 1) throw std::invalid_argument("ensemble needs at least one spin");
  const auto projections = project_field_to_nv_axes(spec.b_ext_mt, spec.b_ext_axis);

  EnsembleRealization out;
  out.realization_index = realization_index;
  out.seed_used = mix_seed(spec.master_seed, realization_index);
  out.spins.resize(spec.n_spins);

  for (std::size_t k = 0; k < spec.n_spins; ++k) {
    auto stream = [&](Channel ch) {
      return SplitMix64(stream_seed(spec.master_seed, realization_index, k, ch));
    };
    NvSpin& s = out.spins[k];

    auto rng_d = stream(Channel::ZeroField);
    s.d_k = sample_lorentzian(spec.d_center, spec.d_fwhm, spec.truncation, rng_d);

    auto rng_e1 = stream(Channel::StrainE1);
    auto rng_e2 = stream(Channel::StrainE2);
    s.e1_k = sample_lorentzian(0.0, spec.e_fwhm, spec.truncation, rng_e1);
    s.e2_k = sample_lorentzian(0.0, spec.e_fwhm, spec.truncation, rng_e2);

    auto rng_phi = stream(Channel::StrainAngle);
    s.phi_k = two_pi * rng_phi.uniform();

    auto rng_bz = stream(Channel::AxialNoise);
    double bz = sample_lorentzian(0.0, spec.bz_fwhm, spec.truncation, rng_bz);

    auto rng_hf = stream(Channel::Hyperfine);
    bz += sample_hyperfine_offset(spec.hyperfine, rng_hf.uniform());

    if (spec.b_ext_mt != 0.0) {
      auto rng_axis = stream(Channel::Orientation);
      auto cls = static_cast<std::size_t>(rng_axis.uniform() * 4.0);
      if (cls > 3) cls = 3;
      bz += projections[cls];
    }
    s.b_z_zeeman_k = bz;

    s.gamma_b = spec.gamma_b;
    s.gamma_d = spec.gamma_d;
  }
  return out;
}

// Deterministic frame choice: the hyperfine-free center of the targeted
// branch.  Without external field that is d_center; with field it is d_center
// plus the orientation-averaged axial Zeeman projection (all four classes are
// equal for a [100] field, so the frame lands exactly on the upper branch).
inline double default_frame_frequency(const DisorderSpec& spec) {
  if (spec.b_ext_mt == 0.0) return spec.d_center;
  const auto projections = project_field_to_nv_axes(spec.b_ext_mt, spec.b_ext_axis);
  double mean = 0.0;
  for (double p : projections) mean += p;
  return spec.d_center + 0.25 * mean;
}

}  // namespace fqnv
