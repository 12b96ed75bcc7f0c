// dynamics.hpp -- single-excitation equations of motion and their propagation.
//
// State ordering is (c, b_1..b_N, d_1..d_N).  The generator is the constant
// (2N+1)-dimensional arrowhead matrix of
//   dc/dt   = (-i 2pi' delta_c - 2pi' gamma_c) c - i 2pi' g' sum_k b_k
//   db_k/dt = (-i 2pi' omega_b - 2pi' gamma_b) b_k + (-i J + J') 2pi' d_k - i 2pi' g' c
//   dd_k/dt = (-i 2pi' omega_d - 2pi' gamma_d) d_k + (-i J - J') 2pi' b_k
// with 2pi' = 2pi x 10^-3 converting linear MHz to rad/ns.  Only the 2x2 spin
// blocks, the qubit diagonal, and one coupling constant are stored; a matrix-
// vector product is O(N).
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fqnv/errors.hpp"
#include "fqnv/model.hpp"
#include "fqnv/units.hpp"

namespace fqnv {

using cplx = std::complex<double>;

struct GeneratorMatrix {
  struct SpinBlock {
    cplx bb, bd, db, dd;  // rad/ns
  };
  std::size_t n_spins = 0;
  cplx qubit_diag{0.0, 0.0};      // rad/ns
  cplx qubit_coupling{0.0, 0.0};  // -i 2pi' g', same entry in both directions
  std::vector<SpinBlock> blocks;

  std::size_t dimension() const { return 2 * n_spins + 1; }

  // Stored entries that are actually nonzero: the qubit diagonal, the four
  // block entries per spin, and the two coupling entries per spin.
  std::size_t nonzero_count() const {
    std::size_t n = qubit_diag != cplx{} ? 1 : 0;
    for (const auto& blk : blocks) {
      n += (blk.bb != cplx{}) + (blk.bd != cplx{}) + (blk.db != cplx{}) +
           (blk.dd != cplx{});
      n += qubit_coupling != cplx{} ? 2 : 0;
    }
    return n;
  }
};

struct StateVector {
  std::vector<cplx> amps;  // (c, b_1..b_N, d_1..d_N)

  cplx& c() { return amps[0]; }
  const cplx& c() const { return amps[0]; }
  std::size_t n_spins() const { return (amps.size() - 1) / 2; }
  cplx& b(std::size_t k) { return amps[1 + k]; }
  cplx& d(std::size_t k) { return amps[1 + n_spins() + k]; }
};

// c^dagger |vac>: all excitation on the qubit.
inline StateVector canonical_initial_state(std::size_t n_spins) {
  StateVector s;
  s.amps.assign(2 * n_spins + 1, cplx{0.0, 0.0});
  s.amps[0] = cplx{1.0, 0.0};
  return s;
}

struct Trajectory {
  double dt_ns = 0.0;
  std::vector<double> t_ns;
  std::vector<double> p_qubit;             // |c|^2
  std::vector<cplx> qubit_amp;             // c(t), kept for spectral checks
  std::vector<double> norm_total;          // |c|^2 + sum(|b|^2 + |d|^2)
  std::vector<double> norm_bright;
  std::vector<double> norm_dark;
  std::vector<double> p_std;               // filled by average_trajectories
  std::uint64_t config_hash = 0;           // provenance
  std::vector<std::size_t> realization_indices;
};

inline GeneratorMatrix build_generator(const RotatingFrameSystem& system) {
  if (system.spins.empty()) throw std::invalid_argument("generator needs at least one spin");
  const cplx mi{0.0, -1.0};
  GeneratorMatrix gen;
  gen.n_spins = system.spins.size();
  gen.qubit_diag = rad_ns_per_mhz * (mi * system.delta_c - system.gamma_c);
  gen.qubit_coupling = rad_ns_per_mhz * mi * system.g_eff;
  gen.blocks.reserve(gen.n_spins);
  for (const auto& s : system.spins) {
    GeneratorMatrix::SpinBlock blk;
    blk.bb = rad_ns_per_mhz * (mi * s.omega_b - s.gamma_b);
    blk.bd = rad_ns_per_mhz * (mi * s.j + s.j_prime);
    blk.db = rad_ns_per_mhz * (mi * s.j - s.j_prime);
    blk.dd = rad_ns_per_mhz * (mi * s.omega_d - s.gamma_d);
    gen.blocks.push_back(blk);
  }
  return gen;
}

namespace detail {

// y <- A x, exploiting the arrowhead structure.
inline void apply_generator(const GeneratorMatrix& g, const std::vector<cplx>& x,
                            std::vector<cplx>& y) {
  const std::size_t n = g.n_spins;
  cplx bsum{0.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) bsum += x[1 + k];
  y[0] = g.qubit_diag * x[0] + g.qubit_coupling * bsum;
  const cplx c = x[0];
  for (std::size_t k = 0; k < n; ++k) {
    const cplx b = x[1 + k];
    const cplx d = x[1 + n + k];
    const auto& blk = g.blocks[k];
    y[1 + k] = blk.bb * b + blk.bd * d + g.qubit_coupling * c;
    y[1 + n + k] = blk.db * b + blk.dd * d;
  }
}

// Upper bound on the spectral radius (rad/ns): largest diagonal magnitude
// plus the collective coupling sqrt(N)|g'| plus the largest block coupling.
inline double spectral_bound(const GeneratorMatrix& g) {
  double diag = std::abs(g.qubit_diag);
  double cross = 0.0;
  for (const auto& blk : g.blocks) {
    diag = std::max({diag, std::abs(blk.bb), std::abs(blk.dd)});
    cross = std::max({cross, std::abs(blk.bd), std::abs(blk.db)});
  }
  return diag + std::sqrt(static_cast<double>(g.n_spins)) * std::abs(g.qubit_coupling) +
         cross;
}

}  // namespace detail

inline double excitation_norm(const StateVector& state) {
  double n = 0.0;
  for (const auto& a : state.amps) n += std::norm(a);
  return n;
}

// Fixed-step classical RK4 on the constant generator.  Guard: dt times the
// spectral-radius bound must stay below 0.5 so the RK4 stability region and
// the phase-error budget both hold.
inline Trajectory evolve(const GeneratorMatrix& gen, double t_max, double dt) {
  if (dt <= 0.0 || t_max <= 0.0) throw std::invalid_argument("need dt > 0 and t_max > 0");
  const double bound = detail::spectral_bound(gen);
  if (dt * bound >= 0.5) {
    const double required = 0.5 / bound;
    throw StepTooLargeError(dt, required,
                            "time step " + std::to_string(dt) + " ns exceeds stability guard; need dt < " +
                                std::to_string(required) + " ns");
  }

  const std::size_t n = gen.n_spins;
  const std::size_t dim = 2 * n + 1;
  const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));

  StateVector state = canonical_initial_state(n);
  std::vector<cplx> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);

  Trajectory traj;
  traj.dt_ns = dt;
  traj.t_ns.reserve(steps + 1);
  traj.p_qubit.reserve(steps + 1);
  traj.qubit_amp.reserve(steps + 1);
  traj.norm_total.reserve(steps + 1);
  traj.norm_bright.reserve(steps + 1);
  traj.norm_dark.reserve(steps + 1);

  auto record = [&](std::size_t step) {
    double nb = 0.0, nd = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      nb += std::norm(state.amps[1 + k]);
      nd += std::norm(state.amps[1 + n + k]);
    }
    const double pc = std::norm(state.amps[0]);
    traj.t_ns.push_back(static_cast<double>(step) * dt);
    traj.p_qubit.push_back(pc);
    traj.qubit_amp.push_back(state.amps[0]);
    traj.norm_total.push_back(pc + nb + nd);
    traj.norm_bright.push_back(nb);
    traj.norm_dark.push_back(nd);
  };

  record(0);
  for (std::size_t step = 1; step <= steps; ++step) {
    auto& x = state.amps;
    detail::apply_generator(gen, x, k1);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    detail::apply_generator(gen, tmp, k2);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    detail::apply_generator(gen, tmp, k3);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + dt * k3[i];
    detail::apply_generator(gen, tmp, k4);
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < dim; ++i)
      x[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    record(step);
  }
  return traj;
}

// Pointwise mean (and population standard deviation) over realizations, taken
// in index order so the reduction is bitwise reproducible.
inline Trajectory average_trajectories(const std::vector<Trajectory>& trajs) {
  if (trajs.empty()) throw std::invalid_argument("nothing to average");
  const auto& first = trajs.front();
  for (const auto& t : trajs) {
    if (t.t_ns.size() != first.t_ns.size() || t.dt_ns != first.dt_ns)
      throw GridMismatchError("trajectories sampled on different time grids");
    for (std::size_t i = 0; i < t.t_ns.size(); ++i)
      if (t.t_ns[i] != first.t_ns[i])
        throw GridMismatchError("trajectories sampled on different time grids");
  }

  const std::size_t m = first.t_ns.size();
  const double inv = 1.0 / static_cast<double>(trajs.size());
  Trajectory avg;
  avg.dt_ns = first.dt_ns;
  avg.t_ns = first.t_ns;
  avg.config_hash = first.config_hash;
  avg.p_qubit.assign(m, 0.0);
  avg.qubit_amp.assign(m, cplx{0.0, 0.0});
  avg.norm_total.assign(m, 0.0);
  avg.norm_bright.assign(m, 0.0);
  avg.norm_dark.assign(m, 0.0);
  avg.p_std.assign(m, 0.0);

  for (const auto& t : trajs) {
    for (std::size_t i = 0; i < m; ++i) {
      avg.p_qubit[i] += t.p_qubit[i];
      avg.qubit_amp[i] += t.qubit_amp[i];
      avg.norm_total[i] += t.norm_total[i];
      avg.norm_bright[i] += t.norm_bright[i];
      avg.norm_dark[i] += t.norm_dark[i];
    }
    avg.realization_indices.insert(avg.realization_indices.end(),
                                   t.realization_indices.begin(),
                                   t.realization_indices.end());
  }
  for (std::size_t i = 0; i < m; ++i) {
    avg.p_qubit[i] *= inv;
    avg.qubit_amp[i] *= inv;
    avg.norm_total[i] *= inv;
    avg.norm_bright[i] *= inv;
    avg.norm_dark[i] *= inv;
  }
  for (const auto& t : trajs) {
    for (std::size_t i = 0; i < m; ++i) {
      const double dev = t.p_qubit[i] - avg.p_qubit[i];
      avg.p_std[i] += dev * dev;
    }
  }
  for (std::size_t i = 0; i < m; ++i) avg.p_std[i] = std::sqrt(avg.p_std[i] * inv);
  return avg;
}

}  // namespace fqnv
