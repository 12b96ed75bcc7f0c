// runner.hpp -- experiment orchestration: realization fan-out, disorder
// averaging, sweeps, and CSV emission.
//
// Parallelism contract: realization i always lands in slot i and the
// reduction runs in slot order, so output bytes are identical for any thread
// count.  CSV numbers are printed with %.12g, '.' decimal separator, '\n'
// line endings; every file starts with a comment carrying the config hash.
#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "fqnv/analysis.hpp"
#include "fqnv/config.hpp"
#include "fqnv/disorder.hpp"
#include "fqnv/dynamics.hpp"
#include "fqnv/model.hpp"
#include "fqnv/oracle.hpp"

namespace fqnv {

inline RotatingFrameSystem system_from_config(const RunConfig& cfg,
                                              std::size_t realization) {
  const DisorderSpec spec = cfg.disorder();
  const EnsembleRealization ens = sample_ensemble(spec, realization);
  const double frame = std::isnan(cfg.frame_frequency_mhz)
                           ? default_frame_frequency(spec)
                           : cfg.frame_frequency_mhz;
  const double g_per_spin =
      cfg.collective_coupling_mhz / std::sqrt(static_cast<double>(cfg.n_spins));
  const auto qc = qubit_frequency_and_coupling(cfg.qubit(), g_per_spin);

  RotatingFrameSystem sys;
  sys.delta_c = cfg.delta_c_mhz;
  sys.g_eff = qc.g_eff;
  sys.gamma_c = cfg.gamma_c_mhz;
  sys.frame_frequency = frame;
  sys.spins.reserve(ens.spins.size());
  for (const auto& s : ens.spins) sys.spins.push_back(rotating_frame_spin(s, frame));
  return sys;
}

inline Trajectory run_single_realization(const RunConfig& cfg, std::size_t realization) {
  const auto sys = system_from_config(cfg, realization);
  Trajectory traj = evolve(build_generator(sys), cfg.t_max_ns, cfg.dt_ns);
  traj.config_hash = config_hash(cfg);
  traj.realization_indices = {realization};
  return traj;
}

namespace detail {

// Index-parallel map with slot-stable results.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const unsigned count = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  pool.reserve(count);
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

inline void append_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  out += buf;
}

inline std::string hash_comment(std::uint64_t hash) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "# config_hash=%016llx\n",
                static_cast<unsigned long long>(hash));
  return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError(ConfigError::Kind::Io, "cannot open " + path.string());
  os << body;
  if (!os) throw ConfigError(ConfigError::Kind::Io, "write failed for " + path.string());
}

}  // namespace detail

inline std::vector<Trajectory> evaluate_realizations(const RunConfig& cfg,
                                                     unsigned threads) {
  std::vector<Trajectory> trajs(cfg.n_realizations);
  detail::parallel_for(cfg.n_realizations, threads,
                       [&](std::size_t i) { trajs[i] = run_single_realization(cfg, i); });
  return trajs;
}

inline std::string trajectory_csv(const Trajectory& traj) {
  std::string out = detail::hash_comment(traj.config_hash);
  out += "t_ns,p_qubit,p_qubit_std,norm_total\n";
  for (std::size_t i = 0; i < traj.t_ns.size(); ++i) {
    detail::append_number(out, traj.t_ns[i]);
    out += ',';
    detail::append_number(out, traj.p_qubit[i]);
    out += ',';
    detail::append_number(out, traj.p_std.empty() ? 0.0 : traj.p_std[i]);
    out += ',';
    detail::append_number(out, traj.norm_total[i]);
    out += '\n';
  }
  return out;
}

// Averaged vacuum Rabi trace for one configuration; writes cfg.output into
// out_dir and returns the averaged trajectory.
inline Trajectory run_vro(const RunConfig& cfg, const std::filesystem::path& out_dir,
                          unsigned threads) {
  const Trajectory avg = average_trajectories(evaluate_realizations(cfg, threads));
  detail::write_file(out_dir / cfg.output, trajectory_csv(avg));
  return avg;
}

struct SweepResult {
  std::vector<double> values;
  std::vector<Trajectory> traces;  // averaged trace per value
  double spread = 0.0;
};

namespace detail {

inline std::string value_tag(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline SweepResult run_sweep(const RunConfig& base, const std::vector<double>& values,
                             const std::string& key, const std::string& column,
                             const std::filesystem::path& out_dir, unsigned threads) {
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
  SweepResult result;
  result.values = values;
  for (double v : values) {
    RunConfig cfg = base;
    if (key == "e_fwhm_mhz") cfg.e_fwhm_mhz = v;
    else cfg.b_ext_mt = v;
    validate(cfg);
    cfg.output = key == "e_fwhm_mhz" ? "strain_" + value_tag(v) + ".csv"
                                     : "field_" + value_tag(v) + ".csv";
    result.traces.push_back(run_vro(cfg, out_dir, threads));
  }
  result.spread = trace_spread(result.traces);

  std::string summary = hash_comment(config_hash(base));
  summary += column + ",tau_ns,osc_freq_mhz\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    double tau = std::numeric_limits<double>::quiet_NaN();
    double freq = std::numeric_limits<double>::quiet_NaN();
    try {
      tau = fit_envelope_lifetime(result.traces[i]).tau;
    } catch (const std::exception&) {
    }
    try {
      freq = oscillation_frequency(result.traces[i]);
    } catch (const std::exception&) {
    }
    append_number(summary, values[i]);
    summary += ',';
    append_number(summary, tau);
    summary += ',';
    append_number(summary, freq);
    summary += '\n';
  }
  summary += "# trace_spread=";
  append_number(summary, result.spread);
  summary += '\n';
  const char* name = key == "e_fwhm_mhz" ? "sweep_strain_summary.csv"
                                         : "sweep_field_summary.csv";
  write_file(out_dir / name, summary);
  return result;
}

}  // namespace detail

// Re-runs the averaged simulation for each strain width, all else fixed, and
// reports the worst-case pointwise spread across the resulting traces.
inline SweepResult run_strain_sweep(const RunConfig& cfg, const std::vector<double>& strains,
                                    const std::filesystem::path& out_dir, unsigned threads) {
  return detail::run_sweep(cfg, strains, "e_fwhm_mhz", "e_fwhm_mhz", out_dir, threads);
}

inline SweepResult run_field_sweep(const RunConfig& cfg, const std::vector<double>& fields_mt,
                                   const std::filesystem::path& out_dir, unsigned threads) {
  return detail::run_sweep(cfg, fields_mt, "b_ext_mt", "b_ext_mt", out_dir, threads);
}

// Resolvent spectrum of one sampled realization (index 0) on a uniform grid.
inline SpectrumTrace run_spectrum(const RunConfig& cfg, double nu_min, double nu_max,
                                  std::size_t n_points,
                                  const std::filesystem::path& out_dir) {
  if (n_points < 1 || (n_points == 1 && nu_max != nu_min) || nu_max < nu_min)
    throw std::invalid_argument("bad probe range");
  std::vector<double> grid(n_points);
  for (std::size_t i = 0; i < n_points; ++i)
    grid[i] = n_points == 1
                  ? nu_min
                  : nu_min + (nu_max - nu_min) * static_cast<double>(i) /
                                 static_cast<double>(n_points - 1);
  const auto sys = system_from_config(cfg, 0);
  const SpectrumTrace spec = spectrum_resolvent(sys, grid);

  std::string out = detail::hash_comment(config_hash(cfg));
  out += "nu_mhz,re_response,im_response,abs2\n";
  for (std::size_t i = 0; i < spec.nu_mhz.size(); ++i) {
    detail::append_number(out, spec.nu_mhz[i]);
    out += ',';
    detail::append_number(out, spec.response[i].real());
    out += ',';
    detail::append_number(out, spec.response[i].imag());
    out += ',';
    detail::append_number(out, spec.abs2[i]);
    out += '\n';
  }
  detail::write_file(out_dir / "spectrum.csv", out);
  return spec;
}

// Quick oracle-equivalence and norm-conservation checks; true on success.
inline bool run_selftest(std::ostream& os) {
  bool ok = true;

  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RunConfig cfg;
    cfg.seed = seed;
    cfg.n_spins = 2 + static_cast<std::size_t>(seed % 5);
    cfg.collective_coupling_mhz = 13.0;
    cfg.t_max_ns = 100.0;
    cfg.b_ext_mt = seed % 2 ? 2.6 : 0.0;
    const auto sys = system_from_config(cfg, 0);
    const auto gen = build_generator(sys);
    const auto rk4 = evolve(gen, cfg.t_max_ns, cfg.dt_ns);
    const auto exact = evolve_oracle(gen, rk4.t_ns);
    for (std::size_t i = 0; i < rk4.t_ns.size(); ++i)
      worst = std::max(worst, std::abs(rk4.p_qubit[i] - exact.p_qubit[i]));
  }
  os << "oracle equivalence: max |P_rk4 - P_oracle| = " << worst
     << (worst <= 1e-6 ? " (ok)\n" : " (FAIL)\n");
  ok = ok && worst <= 1e-6;

  RunConfig cfg;
  cfg.seed = 7;
  cfg.n_spins = 200;
  cfg.gamma_b_mhz = cfg.gamma_d_mhz = cfg.gamma_c_mhz = 0.0;
  cfg.t_max_ns = 100.0;
  const auto traj = run_single_realization(cfg, 0);
  double drift = 0.0;
  for (double n : traj.norm_total) drift = std::max(drift, std::abs(n - 1.0));
  os << "norm conservation: max |norm - 1| = " << drift
     << (drift <= 1e-9 ? " (ok)\n" : " (FAIL)\n");
  ok = ok && drift <= 1e-9;

  return ok;
}

}  // namespace fqnv
