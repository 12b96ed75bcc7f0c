// analysis.hpp -- observable extraction: oscillation period, envelope
// lifetime, resolvent spectra, FFT cross-checks, and sweep spread.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "fqnv/dynamics.hpp"
#include "fqnv/errors.hpp"
#include "fqnv/fft.hpp"
#include "fqnv/model.hpp"

namespace fqnv {

struct LifetimeFit {
  double tau = 0.0;        // ns
  double amplitude = 0.0;  // envelope amplitude at t = 0
  double asymptote = 0.0;  // long-time mean the extrema decay towards
  double residual = 0.0;   // rms residual of the log-linear fit
  int extrema_used = 0;
};

struct SpectrumTrace {
  std::vector<double> nu_mhz;  // strictly increasing probe detuning grid
  std::vector<cplx> response;
  std::vector<double> abs2;
};

namespace detail {

struct Extremum {
  double t;
  double value;
};

// Strict local extrema of a sampled trace, parabolically refined.
inline std::vector<Extremum> local_extrema(const std::vector<double>& t,
                                           const std::vector<double>& y,
                                           bool minima_only = false) {
  std::vector<Extremum> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    const bool is_min = y[i] < y[i - 1] && y[i] < y[i + 1];
    const bool is_max = y[i] > y[i - 1] && y[i] > y[i + 1];
    if (!(is_min || (is_max && !minima_only))) continue;
    // Vertex of the parabola through the three nearest samples.
    const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
    double shift = 0.0;
    if (denom != 0.0) shift = 0.5 * (y[i - 1] - y[i + 1]) / denom;
    const double dt = t[i] - t[i - 1];
    const double tv = t[i] + shift * dt;
    const double yv = y[i] - 0.25 * (y[i - 1] - y[i + 1]) * shift;
    out.push_back({tv, yv});
  }
  return out;
}

}  // namespace detail

// Population-oscillation frequency (MHz) from the mean spacing of P(t)
// minima: one full Rabi period elapses between successive minima.
inline double oscillation_frequency(const Trajectory& traj) {
  const auto minima = detail::local_extrema(traj.t_ns, traj.p_qubit, /*minima_only=*/true);
  if (minima.size() < 3)
    throw NoOscillationError("need at least 3 population minima",
                             static_cast<int>(minima.size()));
  const double span = minima.back().t - minima.front().t;
  const double mean_spacing = span / static_cast<double>(minima.size() - 1);
  return 1.0e3 / mean_spacing;  // ns period -> MHz
}

// Exponential envelope decay constant of the oscillation extrema.  The
// asymptote is the mean of the final 20% of the trace; deviations below
// 1e-4 of the largest (or 1e-12 absolute) are dropped as noise before the
// log-linear least-squares fit.
inline LifetimeFit fit_envelope_lifetime(const Trajectory& traj,
                                         double residual_threshold = 2.0) {
  const auto extrema = detail::local_extrema(traj.t_ns, traj.p_qubit);
  if (extrema.size() < 4)
    throw NoOscillationError("need at least 4 extrema for an envelope fit",
                             static_cast<int>(extrema.size()));

  const std::size_t m = traj.p_qubit.size();
  const std::size_t tail_start = m - std::max<std::size_t>(1, m / 5);
  double asymptote = 0.0;
  for (std::size_t i = tail_start; i < m; ++i) asymptote += traj.p_qubit[i];
  asymptote /= static_cast<double>(m - tail_start);

  double max_dev = 0.0;
  for (const auto& e : extrema) max_dev = std::max(max_dev, std::abs(e.value - asymptote));
  const double floor = std::max(1.0e-12, 1.0e-4 * max_dev);

  std::vector<double> ts, logs;
  for (const auto& e : extrema) {
    const double dev = std::abs(e.value - asymptote);
    if (dev < floor) continue;
    ts.push_back(e.t);
    logs.push_back(std::log(dev));
  }
  if (ts.size() < 4)
    throw NoOscillationError("too few extrema above the noise floor",
                             static_cast<int>(ts.size()));

  const auto n = static_cast<double>(ts.size());
  double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sl += logs[i];
    stt += ts[i] * ts[i];
    stl += ts[i] * logs[i];
  }
  const double denom = n * stt - st * st;
  if (denom == 0.0) throw BadFitError("degenerate extrema abscissae");
  const double slope = (n * stl - st * sl) / denom;
  const double intercept = (sl - slope * st) / n;
  if (slope >= 0.0) throw BadFitError("envelope does not decay", 0.0);

  double ss = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double r = logs[i] - (intercept + slope * ts[i]);
    ss += r * r;
  }
  const double residual = std::sqrt(ss / n);
  if (residual > residual_threshold)
    throw BadFitError("envelope fit residual too large", residual);

  LifetimeFit fit;
  fit.tau = -1.0 / slope;
  fit.amplitude = std::exp(intercept);
  fit.asymptote = asymptote;
  fit.residual = residual;
  fit.extrema_used = static_cast<int>(ts.size());
  return fit;
}

// Steady-state qubit response obtained by eliminating each spin's 2x2 block
// from (nu - A/i(2pi'))x = e_c.  In linear-MHz form:
//   response(nu) = 1 / (nu - delta_c + i gamma_c
//                  - sum_k g'^2 (nu - omega_d + i gamma_d) /
//                    ((nu - omega_b + i gamma_b)(nu - omega_d + i gamma_d) - (J^2 + J'^2)))
// The bright/dark couplings (-iJ +- J') multiply to J^2 + J'^2, which is the
// Schur-complement determinant term.
inline SpectrumTrace spectrum_resolvent(const RotatingFrameSystem& system,
                                        const std::vector<double>& probe_grid) {
  if (probe_grid.empty()) throw std::invalid_argument("empty probe grid");
  for (std::size_t i = 1; i < probe_grid.size(); ++i)
    if (probe_grid[i] <= probe_grid[i - 1])
      throw std::invalid_argument("probe grid must be strictly increasing");

  const cplx i1{0.0, 1.0};
  const double g2 = system.g_eff * system.g_eff;
  SpectrumTrace out;
  out.nu_mhz = probe_grid;
  out.response.reserve(probe_grid.size());
  out.abs2.reserve(probe_grid.size());
  for (double nu : probe_grid) {
    cplx denom = nu - system.delta_c + i1 * system.gamma_c;
    for (const auto& s : system.spins) {
      const cplx zb = nu - s.omega_b + i1 * s.gamma_b;
      const cplx zd = nu - s.omega_d + i1 * s.gamma_d;
      denom -= g2 * zd / (zb * zd - (s.j * s.j + s.j_prime * s.j_prime));
    }
    const cplx r = 1.0 / denom;
    out.response.push_back(r);
    out.abs2.push_back(std::norm(r));
  }
  return out;
}

// Hann-windowed, 4x zero-padded DFT of the qubit amplitude c(t).  A mode
// evolving as exp(-i 2pi nu t) shows up at +nu on the returned axis, matching
// the resolvent pole convention.
inline SpectrumTrace fft_cross_check(const Trajectory& traj) {
  const std::size_t m = traj.qubit_amp.size();
  if (m < 2) throw std::invalid_argument("trace too short for a spectrum");
  for (std::size_t i = 1; i < m; ++i) {
    const double step = traj.t_ns[i] - traj.t_ns[i - 1];
    if (std::abs(step - traj.dt_ns) > 1e-9 * std::max(1.0, traj.dt_ns))
      throw std::invalid_argument("fft requires a uniform time grid");
  }

  const std::size_t padded = next_pow2(4 * m);
  std::vector<cplx> x(padded, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < m; ++i) {
    const double w =
        0.5 * (1.0 - std::cos(two_pi * static_cast<double>(i) / static_cast<double>(m - 1)));
    x[i] = traj.qubit_amp[i] * w;
  }
  fft_radix2(x);

  // Reorder to an ascending frequency axis in MHz.  A mode at linear
  // frequency nu evolves as exp(-2 pi i (nu 1e-3) n dt) and therefore lands
  // in forward-DFT bin (-nu dt M 1e-3) mod M, so the bin index is negated
  // relative to the usual mapping.
  const double df = 1.0e3 / (static_cast<double>(padded) * traj.dt_ns);
  SpectrumTrace out;
  out.nu_mhz.reserve(padded);
  out.response.reserve(padded);
  out.abs2.reserve(padded);
  const std::size_t half = padded / 2;
  for (std::size_t i = 0; i < padded; ++i) {
    const std::size_t k = (padded + half - i) % padded;
    const double bin = static_cast<double>(i) - static_cast<double>(half);
    out.nu_mhz.push_back(bin * df);
    out.response.push_back(x[k]);
    out.abs2.push_back(std::norm(x[k]));
  }
  return out;
}

// Frequencies of local maxima of |spectrum|^2 rising above the given fraction
// of the global maximum.
inline std::vector<double> spectrum_peaks(const SpectrumTrace& spec,
                                          double rel_threshold = 0.1) {
  double top = 0.0;
  for (double v : spec.abs2) top = std::max(top, v);
  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < spec.abs2.size(); ++i) {
    if (spec.abs2[i] > spec.abs2[i - 1] && spec.abs2[i] > spec.abs2[i + 1] &&
        spec.abs2[i] >= rel_threshold * top)
      peaks.push_back(spec.nu_mhz[i]);
  }
  return peaks;
}

// Worst-case pointwise spread across a family of traces sharing one grid.
inline double trace_spread(const std::vector<Trajectory>& trajs) {
  if (trajs.empty()) throw std::invalid_argument("empty trajectory collection");
  const auto& first = trajs.front();
  for (const auto& t : trajs) {
    if (t.t_ns.size() != first.t_ns.size())
      throw GridMismatchError("trace_spread requires identical grids");
    for (std::size_t i = 0; i < t.t_ns.size(); ++i)
      if (t.t_ns[i] != first.t_ns[i])
        throw GridMismatchError("trace_spread requires identical grids");
  }
  double spread = 0.0;
  for (std::size_t i = 0; i < first.t_ns.size(); ++i) {
    double lo = trajs[0].p_qubit[i], hi = lo;
    for (const auto& t : trajs) {
      lo = std::min(lo, t.p_qubit[i]);
      hi = std::max(hi, t.p_qubit[i]);
    }
    spread = std::max(spread, hi - lo);
  }
  return spread;
}

}  // namespace fqnv
