#pragma once

#include <Eigen/SparseLU>
#include <memory>

#include "tdglab/edge_flux.hpp"

namespace tdglab {

// Mean-zero Neumann Poisson solves on the grid. The finite-volume Laplacian
// is singular (constant nullspace); the solve works in the mean-zero
// subspace via a bordered system [A w; w^T 0], which keeps the operator
// symmetric and pins the weighted mean of the solution to zero exactly.
// The factorization is built once per grid and is safe to share across
// threads for concurrent solves.
class NeumannSolver {
 public:
  explicit NeumannSolver(GridPtr grid);

  const Grid& grid() const { return *grid_; }
  GridPtr grid_ptr() const { return grid_; }

  // Solves A phi = b (b in integrated/finite-volume form, one entry per
  // node) with the weighted mean of phi pinned to zero. Incompatible parts
  // of b (nonzero weighted sum) are projected out first.
  RealField solve_rhs(const Eigen::VectorXd& b) const;

  // Laplace solve for the unit-current potential: zero interior source,
  // inflow/outflow through the lead portions of x = -L / x = +L, insulating
  // elsewhere. Independent of h and I.
  RealField solve_unit_current_potential() const;

  // Solves  Delta phi = div(flux)  with homogeneous Neumann data and zero
  // mean, using conservative flux differences for the right-hand side so
  // that discrete compatibility holds exactly when the boundary-normal
  // samples vanish.
  RealField solve_divform(const RealEdgeFlux& flux) const;
  ComplexField solve_divform(const ComplexEdgeFlux& flux) const;

 private:
  GridPtr grid_;
  Eigen::VectorXd w_;
  double wsum_ = 0.0;
  Eigen::SparseLU<SparseR> lu_;
};

using NeumannSolverPtr = std::shared_ptr<const NeumannSolver>;

// Convenience wrapper used by modules that only need phi0 once.
RealField solve_phi0(const NeumannSolver& solver);

}  // namespace tdglab
