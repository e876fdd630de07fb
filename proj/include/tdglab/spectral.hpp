#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tdglab/poisson.hpp"

namespace tdglab {

// Eigenpair of the linearized order-parameter operator, posed as
//   (covariant Laplacian) u - i I phi0 u = -lambda u
// with lead Dirichlet rows eliminated. u lives on the full grid (zeros on
// the lead nodes). residual_norm is relative to the symmetrized reduced
// operator.
struct EigenPair {
  cplx lambda;
  ComplexField u;
  double residual_norm = 0.0;
  bool normalized = false;  // bilinear normalization int u^2 = 1 succeeded
};

struct EigOptions {
  int ncv = 0;             // Arnoldi subspace size; 0 = auto
  double tol = 1e-10;      // target relative residual after refinement
  double shift = 0.0;      // shift-invert target (near smallest Re lambda)
  int max_attempts = 3;    // ncv growth retries
  unsigned seed = 0x9E3779B9u;
  bool dense = false;      // dense validation path (small grids only)
};

// The symmetrized reduced operator Atilde = Htilde + i I Phi where Htilde
// is Hermitian positive definite (link energy over non-lead nodes, weight
// symmetrized) and Phi = diag(phi0). All structural facts of the continuum
// operator (Re lambda > 0, |Im lambda| <= I max|phi0|, PT closure,
// reflected-pairing biorthogonality) hold exactly for this matrix.
class SpectralOperator {
 public:
  SpectralOperator(GridPtr grid, const Params& params, RealField phi0);

  const SparseC& matrix() const { return at_; }
  int reduced_size() const { return static_cast<int>(keep_.size()); }
  const Grid& grid() const { return *grid_; }
  GridPtr grid_ptr() const { return grid_; }
  const Params& params() const { return params_; }
  const RealField& phi0() const { return phi0_; }
  double phi0_max() const { return phi0max_; }

  ComplexField to_field(const Eigen::VectorXcd& v) const;
  Eigen::VectorXcd to_reduced(const ComplexField& u) const;

  // Tolerance below which Im lambda counts as zero, scaled with the exact
  // spectral bound |Im lambda| <= max|phi0| * I.
  double im_tolerance() const { return std::max(1e-9, 1e-6 * phi0max_ * params_.I); }

  // Discrete energy identity evaluated on a field: covariant gradient
  // energy plus i * I * weighted phi0 average. Matches the eigenvalue of
  // the pair (u, lambda) to solver-residual accuracy.
  cplx rayleigh_identity(const ComplexField& u) const;

 private:
  GridPtr grid_;
  Params params_;
  RealField phi0_;
  double phi0max_ = 0.0;
  std::vector<int> keep_;     // full index per reduced index
  std::vector<int> red_of_;   // reduced index per full index, -1 for lead
  Eigen::VectorXd dsqrt_;     // sqrt(weight) at kept nodes
  SparseC at_;                // symmetrized reduced operator
  SparseC energy_;            // full-grid Hermitian link energy (unmasked)
  Eigen::VectorXd wfull_;
};

// k eigenvalues of smallest real part with refined eigenfunctions,
// ordered by (Re, Im ascending); when the leading pair is a complex
// conjugate pair, position 1 carries Im lambda > 0. Eigenfunctions are
// normalized to int u^2 = 1 (bilinear) with Re u(0,0) > 0.
std::vector<EigenPair> leading_eigenpairs(const SpectralOperator& op, int k,
                                          const EigOptions& opt = {});

// Reflected bilinear pairing M_jk = sum w u_j(x,-y) u_k(x,y).
Eigen::MatrixXcd biorthogonality_matrix(const std::vector<EigenPair>& pairs);

struct IcResult {
  double Ic = 0.0;
  double bracket_lo = 0.0, bracket_hi = 0.0;
  int iterations = 0;
};

// Bisection for the current at which the leading eigenvalue turns complex.
IcResult find_Ic(const GridPtr& grid, Params base, double Ilo, double Ihi,
                 const EigOptions& opt = {});

enum class EncounterKind { Passing, Collision };

struct Encounter {
  double param_lo = 0.0, param_hi = 0.0;
  int branch_a = 0, branch_b = 0;  // 1-based labels fixed at the sweep start
  EncounterKind kind = EncounterKind::Passing;
};

struct SweepPoint {
  double value = 0.0;
  std::vector<cplx> lambda;  // per branch label
  double min_overlap = 1.0;  // worst eigenfunction overlap with previous point
  bool refined = false;      // inserted by automatic step refinement
};

struct SpectrumSweep {
  std::string axis;  // "I" or "h"
  int k = 0;
  std::vector<SweepPoint> points;
  std::vector<Encounter> encounters;
};

// Continuation of the k leading branches over a monotone parameter axis.
// Branch identity is maintained by maximal eigenfunction overlap between
// consecutive points; intervals whose worst overlap falls below
// overlap_min are bisected automatically (up to max_refine_depth, then the
// sweep fails). Close encounters of two branches are classified as
// Passing (both stay real and simple, their order in Re swaps) or
// Collision (a real pair merges and re-emerges as a conjugate pair).
SpectrumSweep track_branches(const Params& base, const std::string& axis,
                             const std::vector<double>& values, int k, GridPtr grid,
                             const EigOptions& opt = {}, double overlap_min = 0.8,
                             int max_refine_depth = 6);

}  // namespace tdglab
