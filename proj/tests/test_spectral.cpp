#include <cmath>

#include "doctest.h"
#include "tdglab/spectral.hpp"

using namespace tdglab;

namespace {

Params canonical() {
  Params p;
  p.L = 1.0;
  p.K = 2.0 / 3.0;
  p.delta = 4.0 / 15.0;
  return p;
}

SpectralOperator make_op(const GridPtr& g, const Params& p) {
  NeumannSolver poisson(g);
  return SpectralOperator(g, p, poisson.solve_unit_current_potential());
}

}  // namespace

TEST_CASE("separable oracle: lowest eigenvalue tends to pi^2/4 at second order") {
  Params p = canonical();
  p.delta = p.K;  // Dirichlet on the full sides
  const double exact = M_PI * M_PI / 4.0;
  double prev_err = 0.0;
  for (int level = 0; level < 2; ++level) {
    const int nx = level == 0 ? 33 : 65;
    auto g = build_grid(p, nx, 17);
    auto pairs = leading_eigenpairs(make_op(g, p), 3);
    const double err = std::abs(pairs[0].lambda.real() - exact);
    CHECK(std::abs(pairs[0].lambda.imag()) < 1e-10);
    if (level == 0)
      prev_err = err;
    else {
      CHECK(err / exact < 0.01);
      CHECK(prev_err / err > 3.0);
      CHECK(prev_err / err < 5.0);
    }
  }
}

TEST_CASE("self-adjoint case: all leading eigenvalues real and positive") {
  auto g = build_grid(canonical(), 41, 31);
  auto pairs = leading_eigenpairs(make_op(g, canonical()), 6);
  for (size_t j = 0; j < pairs.size(); ++j) {
    CHECK(pairs[j].lambda.real() > 0.0);
    CHECK(std::abs(pairs[j].lambda.imag()) < 1e-9);
    CHECK(pairs[j].residual_norm < 1e-8);
    if (j > 0) CHECK(pairs[j].lambda.real() >= pairs[j - 1].lambda.real() - 1e-12);
    // bilinear normalization
    if (pairs[j].normalized) {
      const cplx s = integrate_bilinear(pairs[j].u, pairs[j].u);
      CHECK(std::abs(s - 1.0) < 1e-8);
    }
  }
  // h=0: eigenfunctions even in y up to sign of the mode
  for (const auto& pr : pairs) {
    auto ry = reflect_y(pr.u);
    double deven = 0.0, dodd = 0.0;
    for (int k = 0; k < pr.u.size(); ++k) {
      deven = std::max(deven, std::abs(ry.v[k] - pr.u.v[k]));
      dodd = std::max(dodd, std::abs(ry.v[k] + pr.u.v[k]));
    }
    CHECK(std::min(deven, dodd) < 1e-7);
  }
}

TEST_CASE("arnoldi agrees with the dense validation path") {
  Params p = canonical();
  p.h = 6.0;
  p.I = 30.0;
  auto g = build_grid(p, 31, 23);  // reduced size ~700: both paths feasible
  auto op = make_op(g, p);
  EigOptions sparse_opt;
  sparse_opt.dense = false;
  sparse_opt.ncv = 60;
  EigOptions dense_opt;
  dense_opt.dense = true;
  auto a = leading_eigenpairs(op, 5, sparse_opt);
  auto b = leading_eigenpairs(op, 5, dense_opt);
  for (int j = 0; j < 5; ++j) CHECK(std::abs(a[j].lambda - b[j].lambda) < 1e-8);
}

TEST_CASE("driven operator: spectral bounds, PT closure, identity, pairing") {
  Params p = canonical();
  p.h = 20.0;
  p.I = 25.0;
  auto g = build_grid(p, 65, 49);
  NeumannSolver poisson(g);
  RealField phi0 = poisson.solve_unit_current_potential();
  SpectralOperator op(g, p, phi0);
  auto pairs = leading_eigenpairs(op, 6);

  const double bound = phi0.max_abs() * p.I + 1e-6;
  for (const auto& pr : pairs) {
    CHECK(pr.lambda.real() > 0.0);
    CHECK(std::abs(pr.lambda.imag()) <= bound);
    CHECK(pr.residual_norm < 1e-8);
    // energy identity
    const cplx lam_id = op.rayleigh_identity(pr.u);
    CHECK(std::abs(lam_id - pr.lambda) < 1e-6 * std::abs(pr.lambda));
  }

  // leading pair is a conjugate pair with Im lambda_1 > 0 (collision regime)
  CHECK(pairs[0].lambda.imag() > op.im_tolerance());
  CHECK(std::abs(pairs[0].lambda - std::conj(pairs[1].lambda)) <
        1e-7 * (1.0 + std::abs(pairs[0].lambda)));

  // spectrum closed under conjugation: each lambda has a partner lambda*
  for (const auto& pr : pairs) {
    double best = 1e300;
    for (const auto& qr : pairs) best = std::min(best, std::abs(std::conj(pr.lambda) - qr.lambda));
    CHECK(best < 1e-6 * (1.0 + std::abs(pr.lambda)));
  }

  // PT partner of an eigenfunction is an eigenfunction for lambda*
  {
    const auto& pr = pairs[0];
    ComplexField up = pt_partner(pr.u);
    const cplx lam = op.rayleigh_identity(up);
    CHECK(std::abs(lam - std::conj(pr.lambda)) < 1e-6 * std::abs(pr.lambda));
  }

  // biorthogonality: off-diagonal entries vanish for distinct eigenvalues
  Eigen::MatrixXcd m = biorthogonality_matrix(pairs);
  const int n = static_cast<int>(pairs.size());
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      if (std::abs(pairs[a].lambda - pairs[b].lambda) < 1e-6) continue;  // degenerate
      const double scale = std::max(std::abs(m(a, a)), std::abs(m(b, b)));
      CHECK(std::abs(m(a, b)) <= 1e-6 * scale);
    }
  }
}

TEST_CASE("biorthogonality diagonal equals 1 for h=0 under the bilinear normalization") {
  auto g = build_grid(canonical(), 41, 31);
  Params p = canonical();
  p.I = 10.0;
  auto pairs = leading_eigenpairs(make_op(g, p), 3);
  Eigen::MatrixXcd m = biorthogonality_matrix(pairs);
  for (int j = 0; j < 3; ++j)
    if (pairs[j].normalized) CHECK(std::abs(m(j, j) - 1.0) < 1e-7);
}

TEST_CASE("find_Ic rejects a bracket with equal indicator at both ends") {
  auto g = build_grid(canonical(), 33, 25);
  CHECK_THROWS_AS(find_Ic(g, canonical(), 0.1, 0.5), SolverError);
}

TEST_CASE("track_branches: real spectrum on a quiet axis, no encounters") {
  Params p = canonical();
  p.I = 0.0;
  auto g = build_grid(p, 33, 25);
  std::vector<double> hs = {0.0, 0.5, 1.0, 1.5, 2.0};
  auto sweep = track_branches(p, "h", hs, 3, g);
  CHECK(sweep.encounters.empty());
  for (const auto& pt : sweep.points)
    for (const auto& lam : pt.lambda) CHECK(std::abs(lam.imag()) < 1e-9);
}

TEST_CASE("track_branches detects the first collision on the h=0 current axis") {
  Params p = canonical();
  auto g = build_grid(p, 49, 37);
  std::vector<double> is;
  for (int k = 0; k <= 20; ++k) is.push_back(k * 6.0);  // I in [0, 120]
  auto sweep = track_branches(p, "I", is, 4, g);
  bool has_collision = false;
  for (const auto& e : sweep.encounters)
    if (e.kind == EncounterKind::Collision) has_collision = true;
  CHECK(has_collision);
}
