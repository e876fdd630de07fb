#include "tdglab/poisson.hpp"

#include <vector>

namespace tdglab {

NeumannSolver::NeumannSolver(GridPtr grid) : grid_(std::move(grid)) {
  const Grid& g = *grid_;
  const int n = g.size();
  w_ = weight_vector(g);
  wsum_ = w_.sum();

  SparseR a = assemble_neumann_energy(g);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(a.nonZeros() + 2 * n);
  for (int col = 0; col < a.outerSize(); ++col)
    for (SparseR::InnerIterator it(a, col); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < n; ++k) {
    t.emplace_back(n, k, w_[k]);
    t.emplace_back(k, n, w_[k]);
  }
  SparseR bordered(n + 1, n + 1);
  bordered.setFromTriplets(t.begin(), t.end());
  bordered.makeCompressed();
  lu_.compute(bordered);
  if (lu_.info() != Eigen::Success)
    throw SolverError("Neumann Poisson factorization failed");
}

RealField NeumannSolver::solve_rhs(const Eigen::VectorXd& b) const {
  const int n = grid_->size();
  Eigen::VectorXd rhs(n + 1);
  const double slack = b.sum() / wsum_;
  rhs.head(n) = b - slack * w_;
  rhs[n] = 0.0;
  Eigen::VectorXd sol = lu_.solve(rhs);
  if (lu_.info() != Eigen::Success) throw SolverError("Neumann Poisson solve failed");
  RealField phi(grid_);
  phi.v = sol.head(n);
  // bordered row enforces the zero mean; remove residual roundoff
  phi.v.array() -= w_.dot(phi.v) / wsum_;
  return phi;
}

RealField NeumannSolver::solve_unit_current_potential() const {
  const Grid& g = *grid_;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(g.size());
  for (int j = 0; j < g.ny; ++j) {
    const double overlap = g.lead_face_overlap(j);
    if (overlap <= 0.0) continue;
    b[g.idx(0, j)] += overlap;          // inflow through x = -L
    b[g.idx(g.nx - 1, j)] -= overlap;   // outflow through x = +L
  }
  return solve_rhs(b);
}

RealField NeumannSolver::solve_divform(const RealEdgeFlux& flux) const {
  const Grid& g = *grid_;
  Eigen::VectorXd b(g.size());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double div = (flux.fx_at(i + 1, j) - flux.fx_at(i, j)) * g.wy[j] +
                         (flux.fy_at(i, j + 1) - flux.fy_at(i, j)) * g.wx[i];
      b[g.idx(i, j)] = -div;
    }
  }
  return solve_rhs(b);
}

ComplexField NeumannSolver::solve_divform(const ComplexEdgeFlux& flux) const {
  RealField re = solve_divform(real_flux(flux));
  RealField im = solve_divform(imag_flux(flux));
  ComplexField out(grid_);
  out.v = re.v + cplx(0.0, 1.0) * im.v;
  return out;
}

RealField solve_phi0(const NeumannSolver& solver) { return solver.solve_unit_current_potential(); }

}  // namespace tdglab
