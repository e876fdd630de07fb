#include "tdglab/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

namespace tdglab {

namespace {

// Arnoldi factorization of OP = (A - sigma I)^{-1} with full
// reorthogonalization; returns Ritz values/vectors of A.
struct RitzPair {
  cplx lambda;
  Eigen::VectorXcd v;  // reduced coordinates
  double residual;     // ||A v - lambda v|| / ||v||
};

double matrix_residual(const SparseC& a, const cplx& lambda, const Eigen::VectorXcd& v) {
  return (a * v - lambda * v).norm() / v.norm();
}

std::vector<RitzPair> shift_invert_arnoldi(const SparseC& a, cplx sigma, int m, unsigned seed) {
  const int n = static_cast<int>(a.rows());
  m = std::min(m, n);

  SparseC shifted = a;
  {
    SparseC id(n, n);
    id.setIdentity();
    shifted = a - sigma * id;
  }
  Eigen::SparseLU<SparseC> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success) {
    // shift sits (numerically) on an eigenvalue; nudge it
    SparseC id(n, n);
    id.setIdentity();
    shifted = a - (sigma + cplx(1e-8, 1e-8)) * id;
    lu.compute(shifted);
    if (lu.info() != Eigen::Success) throw SolverError("shift-invert factorization failed");
  }

  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  Eigen::VectorXcd q(n);
  for (int i = 0; i < n; ++i) q[i] = cplx(dist(rng), dist(rng));
  q = lu.solve(q);  // purge components the inverse cannot represent
  q.normalize();

  Eigen::MatrixXcd v(n, m + 1);
  Eigen::MatrixXcd hess = Eigen::MatrixXcd::Zero(m + 1, m);
  v.col(0) = q;
  int steps = m;
  for (int jcol = 0; jcol < m; ++jcol) {
    Eigen::VectorXcd w = lu.solve(v.col(jcol));
    // modified Gram-Schmidt with one reorthogonalization pass
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= jcol; ++i) {
        const cplx hij = v.col(i).dot(w);  // conjugate-linear in first arg
        w -= hij * v.col(i);
        hess(i, jcol) += hij;
      }
    }
    const double hnorm = w.norm();
    hess(jcol + 1, jcol) = hnorm;
    if (hnorm < 1e-14) {  // invariant subspace found
      steps = jcol + 1;
      break;
    }
    v.col(jcol + 1) = w / hnorm;
  }

  const Eigen::MatrixXcd hm = hess.topLeftCorner(steps, steps);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(hm);
  if (es.info() != Eigen::Success) throw SolverError("Hessenberg eigendecomposition failed");

  std::vector<RitzPair> out;
  out.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    const cplx theta = es.eigenvalues()[i];
    if (std::abs(theta) < 1e-14) continue;
    RitzPair p;
    p.lambda = sigma + 1.0 / theta;
    p.v = v.leftCols(steps) * es.eigenvectors().col(i);
    p.v.normalize();
    p.residual = matrix_residual(a, p.lambda, p.v);
    out.push_back(std::move(p));
  }
  return out;
}

// One or more inverse-iteration steps at the Ritz value; returns the best
// residual achieved.
void refine_pair(const SparseC& a, RitzPair& p, double tol, int max_steps = 4) {
  const int n = static_cast<int>(a.rows());
  SparseC id(n, n);
  id.setIdentity();
  for (int step = 0; step < max_steps && p.residual > tol; ++step) {
    SparseC shifted = a - p.lambda * id;
    Eigen::SparseLU<SparseC> lu;
    lu.compute(shifted);
    if (lu.info() != Eigen::Success) {
      shifted = a - (p.lambda * (1.0 + 1e-12) + cplx(0.0, 1e-13)) * id;
      lu.compute(shifted);
      if (lu.info() != Eigen::Success) return;  // keep current pair
    }
    Eigen::VectorXcd w = lu.solve(p.v);
    const double nw = w.norm();
    if (!(nw > 0.0) || !std::isfinite(nw)) return;
    w /= nw;
    const cplx lam = w.dot(a * w);  // Rayleigh quotient (w normalized)
    const double res = matrix_residual(a, lam, w);
    if (res < p.residual) {
      p.v = std::move(w);
      p.lambda = lam;
      p.residual = res;
    } else {
      return;  // stagnated
    }
  }
}

bool close_pair(const cplx& a, const cplx& b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

SpectralOperator::SpectralOperator(GridPtr grid, const Params& params, RealField phi0)
    : grid_(std::move(grid)), params_(params), phi0_(std::move(phi0)) {
  const Grid& g = *grid_;
  phi0max_ = phi0_.max_abs();
  wfull_ = weight_vector(g);
  energy_ = assemble_link_energy(g, params_.h);

  red_of_.assign(g.size(), -1);
  keep_.clear();
  keep_.reserve(g.size());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (!g.is_lead(i, j)) {
        red_of_[g.idx(i, j)] = static_cast<int>(keep_.size());
        keep_.push_back(g.idx(i, j));
      }

  const int nr = static_cast<int>(keep_.size());
  dsqrt_.resize(nr);
  for (int r = 0; r < nr; ++r) dsqrt_[r] = std::sqrt(wfull_[keep_[r]]);

  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(energy_.nonZeros());
  for (int col = 0; col < energy_.outerSize(); ++col) {
    for (SparseC::InnerIterator it(energy_, col); it; ++it) {
      const int r = red_of_[it.row()], c = red_of_[it.col()];
      if (r < 0 || c < 0) continue;
      t.emplace_back(r, c, it.value() / (dsqrt_[r] * dsqrt_[c]));
    }
  }
  for (int r = 0; r < nr; ++r)
    t.emplace_back(r, r, cplx(0.0, params_.I * phi0_.v[keep_[r]]));
  at_.resize(nr, nr);
  at_.setFromTriplets(t.begin(), t.end());
  at_.makeCompressed();
}

ComplexField SpectralOperator::to_field(const Eigen::VectorXcd& v) const {
  ComplexField u(grid_);
  for (size_t r = 0; r < keep_.size(); ++r) u.v[keep_[r]] = v[r] / dsqrt_[r];
  return u;
}

Eigen::VectorXcd SpectralOperator::to_reduced(const ComplexField& u) const {
  Eigen::VectorXcd v(keep_.size());
  for (size_t r = 0; r < keep_.size(); ++r) v[r] = u.v[keep_[r]] * dsqrt_[r];
  return v;
}

cplx SpectralOperator::rayleigh_identity(const ComplexField& u) const {
  const cplx energy = u.v.dot(energy_ * u.v);  // u^H H u
  double pot = 0.0, mass = 0.0;
  for (int k = 0; k < u.size(); ++k) {
    const double m = wfull_[k] * std::norm(u.v[k]);
    mass += m;
    pot += m * phi0_.v[k];
  }
  return energy / mass + cplx(0.0, params_.I * pot / mass);
}

std::vector<EigenPair> leading_eigenpairs(const SpectralOperator& op, int k,
                                          const EigOptions& opt) {
  if (k < 1 || k > 12) throw ConfigError("leading_eigenpairs: k must be in [1, 12]");
  const SparseC& a = op.matrix();
  const int n = op.reduced_size();
  if (k > n) throw ConfigError("requested more eigenpairs than degrees of freedom");

  std::vector<RitzPair> pool;
  auto absorb = [&](std::vector<RitzPair>&& pairs) {
    for (auto& p : pairs) {
      if (p.residual > 1e-6) continue;  // unconverged Ritz junk
      bool dup = false;
      for (const auto& q : pool)
        if (close_pair(p.lambda, q.lambda, 1e-8 * (1.0 + std::abs(p.lambda)))) {
          dup = true;
          break;
        }
      if (!dup) pool.push_back(std::move(p));
    }
  };

  if (opt.dense || n <= 600) {
    Eigen::MatrixXcd dense(a);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(dense);
    if (es.info() != Eigen::Success) throw SolverError("dense eigensolve failed");
    std::vector<RitzPair> pairs(n);
    for (int i = 0; i < n; ++i) {
      pairs[i].lambda = es.eigenvalues()[i];
      pairs[i].v = es.eigenvectors().col(i);
      pairs[i].residual = matrix_residual(a, pairs[i].lambda, pairs[i].v);
    }
    absorb(std::move(pairs));
  } else {
    int ncv = opt.ncv > 0 ? opt.ncv : std::min(n, std::max(64, 4 * k + 16));
    double best_residual = 1e300;
    for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
      absorb(shift_invert_arnoldi(a, cplx(opt.shift, 0.0), ncv, opt.seed + attempt));
      // second pass targeted at the current smallest real part
      if (!pool.empty()) {
        double remin = 1e300;
        for (const auto& p : pool) remin = std::min(remin, p.lambda.real());
        if (std::abs(remin - opt.shift) > 1e-6 * (1.0 + std::abs(remin)))
          absorb(shift_invert_arnoldi(a, cplx(remin, 0.0), ncv, opt.seed + 17 * (attempt + 1)));
      }
      if (static_cast<int>(pool.size()) >= k) break;
      for (const auto& p : pool) best_residual = std::min(best_residual, p.residual);
      ncv = std::min(n, ncv + ncv / 2);
    }
    if (static_cast<int>(pool.size()) < k) {
      std::ostringstream msg;
      msg << "eigensolver did not converge: " << pool.size() << " of " << k
          << " pairs converged (best residual " << best_residual << ")";
      throw SolverError(msg.str());
    }
  }

  std::sort(pool.begin(), pool.end(), [](const RitzPair& x, const RitzPair& y) {
    if (x.lambda.real() != y.lambda.real()) return x.lambda.real() < y.lambda.real();
    return x.lambda.imag() < y.lambda.imag();
  });
  pool.resize(std::min<size_t>(pool.size(), static_cast<size_t>(k)));

  for (auto& p : pool) refine_pair(a, p, opt.tol);
  for (auto& p : pool) {
    if (p.residual > 1e-8) {
      std::ostringstream msg;
      msg << "eigenpair refinement stalled at residual " << p.residual << " for lambda "
          << p.lambda;
      throw SolverError(msg.str());
    }
  }

  // leading conjugate pair convention: position 1 carries Im lambda > 0
  const double imtol = op.im_tolerance();
  if (pool.size() >= 2 && std::abs(pool[0].lambda.imag()) > imtol &&
      close_pair(pool[0].lambda, std::conj(pool[1].lambda),
                 1e-6 * (1.0 + std::abs(pool[0].lambda))) &&
      pool[0].lambda.imag() < 0.0)
    std::swap(pool[0], pool[1]);

  std::vector<EigenPair> out;
  out.reserve(pool.size());
  for (auto& p : pool) {
    EigenPair ep;
    ep.lambda = p.lambda;
    ep.residual_norm = p.residual;
    ep.u = op.to_field(p.v);
    // bilinear normalization int u^2 = 1; defective directions keep unit
    // weighted norm instead
    const cplx s = integrate_bilinear(ep.u, ep.u);
    const double mass = inner_w(ep.u, ep.u).real();
    if (std::abs(s) > 1e-10 * mass) {
      ep.u.v *= 1.0 / std::sqrt(s);
      ep.normalized = true;
    } else {
      ep.u.v *= 1.0 / std::sqrt(mass);
      ep.normalized = false;
    }
    // residual sign freedom: pin the anchor value to positive real part
    const Grid& g = *ep.u.grid;
    cplx anchor;
    if (g.has_center_node()) {
      anchor = ep.u.v[g.center_index()];
    } else {
      int kmax = 0;
      double best = -1.0;
      for (int q = 0; q < ep.u.size(); ++q)
        if (std::abs(ep.u.v[q]) > best) {
          best = std::abs(ep.u.v[q]);
          kmax = q;
        }
      anchor = ep.u.v[kmax];
    }
    const bool flip = (anchor.real() < 0.0) ||
                      (anchor.real() == 0.0 && anchor.imag() < 0.0);
    if (flip) ep.u.v = -ep.u.v;
    out.push_back(std::move(ep));
  }
  return out;
}

Eigen::MatrixXcd biorthogonality_matrix(const std::vector<EigenPair>& pairs) {
  const int m = static_cast<int>(pairs.size());
  Eigen::MatrixXcd mat(m, m);
  std::vector<ComplexField> refl;
  refl.reserve(m);
  for (const auto& p : pairs) refl.push_back(reflect_y(p.u));
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) mat(j, k) = integrate_bilinear(refl[j], pairs[k].u);
  return mat;
}

IcResult find_Ic(const GridPtr& grid, Params base, double Ilo, double Ihi,
                 const EigOptions& opt) {
  if (!(Ihi > Ilo)) throw ConfigError("find_Ic: invalid bracket");
  NeumannSolver poisson(grid);
  const RealField phi0 = poisson.solve_unit_current_potential();

  EigOptions local = opt;
  auto nonreal = [&](double I) {
    Params p = base;
    p.I = I;
    SpectralOperator op(grid, p, phi0);
    auto pairs = leading_eigenpairs(op, 2, local);
    local.shift = std::max(0.0, pairs[0].lambda.real() - 0.5);  // warm start
    return std::abs(pairs[0].lambda.imag()) > op.im_tolerance();
  };

  bool lo = nonreal(Ilo), hi = nonreal(Ihi);
  if (lo || !hi)
    throw SolverError("find_Ic: bracket invalid (indicator equal at both ends or reversed)");
  const double target = 1e-3 * (Ihi - Ilo);
  int iters = 0;
  double a = Ilo, b = Ihi;
  while (b - a > target) {
    const double mid = 0.5 * (a + b);
    if (nonreal(mid))
      b = mid;
    else
      a = mid;
    ++iters;
  }
  return IcResult{0.5 * (a + b), a, b, iters};
}

namespace {

struct BranchPoint {
  double value;
  std::vector<EigenPair> pairs;  // in branch-label order
  double min_overlap = 1.0;
  bool refined = false;
};

double overlap(const ComplexField& a, const ComplexField& b) {
  return std::abs(inner_w(a, b)) / (norm_w(a) * norm_w(b));
}

// Greedy maximal-overlap assignment; returns permutation new_of_branch and
// the worst assigned overlap.
std::pair<std::vector<int>, double> match_branches(const std::vector<EigenPair>& prev,
                                                   const std::vector<EigenPair>& next) {
  const int k = static_cast<int>(prev.size());
  Eigen::MatrixXd ov(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) ov(a, b) = overlap(prev[a].u, next[b].u);
  std::vector<int> assign(k, -1);
  std::vector<char> used_a(k, 0), used_b(k, 0);
  double worst = 1.0;
  for (int step = 0; step < k; ++step) {
    int ba = -1, bb = -1;
    double best = -1.0;
    for (int a = 0; a < k; ++a) {
      if (used_a[a]) continue;
      for (int b = 0; b < k; ++b) {
        if (used_b[b]) continue;
        if (ov(a, b) > best) {
          best = ov(a, b);
          ba = a;
          bb = b;
        }
      }
    }
    assign[ba] = bb;
    used_a[ba] = used_b[bb] = 1;
    worst = std::min(worst, best);
  }
  return {assign, worst};
}

}  // namespace

SpectrumSweep track_branches(const Params& base, const std::string& axis,
                             const std::vector<double>& values, int k, GridPtr grid,
                             const EigOptions& opt, double overlap_min, int max_refine_depth) {
  if (axis != "I" && axis != "h") throw ConfigError("track_branches: axis must be I or h");
  if (values.size() < 2) throw ConfigError("track_branches: need at least two axis values");
  for (size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1])) throw ConfigError("track_branches: axis must be increasing");

  NeumannSolver poisson(grid);
  const RealField phi0 = poisson.solve_unit_current_potential();

  auto solve_at = [&](double v) {
    Params p = base;
    if (axis == "I")
      p.I = v;
    else
      p.h = v;
    SpectralOperator op(grid, p, phi0);
    return leading_eigenpairs(op, k, opt);
  };

  SpectrumSweep sweep;
  sweep.axis = axis;
  sweep.k = k;

  std::vector<BranchPoint> pts;
  pts.push_back({values[0], solve_at(values[0]), 1.0, false});

  // advance from the last finalized point to `target`, bisecting while the
  // eigenfunction overlap is too weak to identify branches
  std::function<void(double, bool, int)> advance = [&](double target, bool refined, int depth) {
    auto pairs = solve_at(target);
    auto [assign, worst] = match_branches(pts.back().pairs, pairs);
    if (worst < overlap_min && depth < max_refine_depth) {
      const double mid = 0.5 * (pts.back().value + target);
      advance(mid, true, depth + 1);
      advance(target, refined, depth + 1);
      return;
    }
    if (worst < overlap_min) {
      std::ostringstream msg;
      msg << "track_branches: step too coarse near " << axis << " = " << target
          << " (max overlap " << worst << " after " << depth << " refinements)";
      throw SolverError(msg.str());
    }
    BranchPoint bp;
    bp.value = target;
    bp.pairs.resize(k);
    for (int a = 0; a < k; ++a) bp.pairs[a] = std::move(pairs[assign[a]]);
    bp.min_overlap = worst;
    bp.refined = refined;
    pts.push_back(std::move(bp));
  };

  for (size_t i = 1; i < values.size(); ++i) advance(values[i], false, 0);

  // emit points and classify encounters
  const double base_imtol = 1e-9;
  auto imtol_at = [&](double v) {
    const double current = (axis == "I") ? v : base.I;
    return std::max(base_imtol, 1e-6 * phi0.max_abs() * current);
  };

  for (auto& bp : pts) {
    SweepPoint sp;
    sp.value = bp.value;
    sp.min_overlap = bp.min_overlap;
    sp.refined = bp.refined;
    for (auto& p : bp.pairs) sp.lambda.push_back(p.lambda);
    sweep.points.push_back(std::move(sp));
  }

  for (size_t s = 0; s + 1 < pts.size(); ++s) {
    const auto& p0 = sweep.points[s];
    const auto& p1 = sweep.points[s + 1];
    const double t0 = imtol_at(p0.value), t1 = imtol_at(p1.value);
    for (int a = 0; a < k; ++a) {
      for (int b = a + 1; b < k; ++b) {
        const bool real0 = std::abs(p0.lambda[a].imag()) <= t0 &&
                           std::abs(p0.lambda[b].imag()) <= t0;
        const bool nonreal1 = std::abs(p1.lambda[a].imag()) > t1 &&
                              std::abs(p1.lambda[b].imag()) > t1;
        const bool conj1 = std::abs(p1.lambda[a] - std::conj(p1.lambda[b])) <=
                           1e-6 * (1.0 + std::abs(p1.lambda[a]));
        if (real0 && nonreal1 && conj1) {
          sweep.encounters.push_back(
              {p0.value, p1.value, a + 1, b + 1, EncounterKind::Collision});
          continue;
        }
        const bool real1 = std::abs(p1.lambda[a].imag()) <= t1 &&
                           std::abs(p1.lambda[b].imag()) <= t1;
        if (real0 && real1) {
          const double d0 = p0.lambda[a].real() - p0.lambda[b].real();
          const double d1 = p1.lambda[a].real() - p1.lambda[b].real();
          if (d0 * d1 < 0.0)
            sweep.encounters.push_back(
                {p0.value, p1.value, a + 1, b + 1, EncounterKind::Passing});
        }
      }
    }
  }
  return sweep;
}

}  // namespace tdglab
