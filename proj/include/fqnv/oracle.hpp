// oracle.hpp -- dense-diagonalization cross-check for the RK4 propagator.
//
// Kept separate from dynamics.hpp so the production evolve path never touches
// Eigen.  Feasible for dimensions up to ~2000.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fqnv/dynamics.hpp"
#include "fqnv/errors.hpp"

namespace fqnv {

inline Eigen::MatrixXcd to_dense(const GeneratorMatrix& gen) {
  const std::size_t n = gen.n_spins;
  const auto dim = static_cast<Eigen::Index>(2 * n + 1);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  a(0, 0) = gen.qubit_diag;
  for (std::size_t k = 0; k < n; ++k) {
    const auto ib = static_cast<Eigen::Index>(1 + k);
    const auto id = static_cast<Eigen::Index>(1 + n + k);
    a(0, ib) = gen.qubit_coupling;
    a(ib, 0) = gen.qubit_coupling;
    a(ib, ib) = gen.blocks[k].bb;
    a(ib, id) = gen.blocks[k].bd;
    a(id, ib) = gen.blocks[k].db;
    a(id, id) = gen.blocks[k].dd;
  }
  return a;
}

// Exact propagation A(t) = V exp(Lambda t) V^-1 A(0) on an arbitrary grid.
inline Trajectory evolve_oracle(const GeneratorMatrix& gen,
                                const std::vector<double>& t_grid) {
  const std::size_t dim = gen.dimension();
  if (dim > 2001) throw std::invalid_argument("oracle limited to dimension 2001");
  if (t_grid.empty()) throw std::invalid_argument("empty time grid");

  const Eigen::MatrixXcd a = to_dense(gen);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const Eigen::MatrixXcd& v = es.eigenvectors();
  const Eigen::VectorXcd& lambda = es.eigenvalues();

  const auto lu = v.partialPivLu();
  const double rcond = lu.rcond();
  const double cond = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (cond > 1e12)
    throw IllConditionedError("eigenvector matrix condition number " + std::to_string(cond),
                              cond);

  Eigen::VectorXcd x0 = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  x0(0) = cplx{1.0, 0.0};
  const Eigen::VectorXcd w = lu.solve(x0);

  const std::size_t n = gen.n_spins;
  Trajectory traj;
  traj.dt_ns = t_grid.size() > 1 ? t_grid[1] - t_grid[0] : 0.0;
  traj.t_ns = t_grid;
  for (double t : t_grid) {
    Eigen::VectorXcd phase(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
      phase(i) = std::exp(lambda(i) * t) * w(i);
    const Eigen::VectorXcd x = v * phase;
    double nb = 0.0, nd = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      nb += std::norm(x(static_cast<Eigen::Index>(1 + k)));
      nd += std::norm(x(static_cast<Eigen::Index>(1 + n + k)));
    }
    const double pc = std::norm(x(0));
    traj.p_qubit.push_back(pc);
    traj.qubit_amp.push_back(x(0));
    traj.norm_total.push_back(pc + nb + nd);
    traj.norm_bright.push_back(nb);
    traj.norm_dark.push_back(nd);
  }
  return traj;
}

}  // namespace fqnv
