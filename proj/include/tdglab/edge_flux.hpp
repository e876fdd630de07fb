#pragma once

#include "tdglab/field.hpp"
#include "tdglab/operators.hpp"

namespace tdglab {

// Vector field sampled on cell faces, including the faces lying on the
// domain boundary (those default to zero, which encodes the no-normal-flux
// physics of the supercurrent; callers may fill them for generic data).
// fx(i,j), i = 0..nx: face at x_{i-1/2} in row j (0 and nx are on the
// boundary); fy(i,j), j = 0..ny: face at y_{j-1/2} in column i.
template <typename Scalar>
struct EdgeFluxT {
  GridPtr grid;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> fx, fy;

  explicit EdgeFluxT(GridPtr g) : grid(std::move(g)) {
    fx.setZero((grid->nx + 1) * grid->ny);
    fy.setZero(grid->nx * (grid->ny + 1));
  }
  int xidx(int i, int j) const { return j * (grid->nx + 1) + i; }
  int yidx(int i, int j) const { return j * grid->nx + i; }
  Scalar& fx_at(int i, int j) { return fx[xidx(i, j)]; }
  Scalar& fy_at(int i, int j) { return fy[yidx(i, j)]; }
  Scalar fx_at(int i, int j) const { return fx[xidx(i, j)]; }
  Scalar fy_at(int i, int j) const { return fy[yidx(i, j)]; }
};

using RealEdgeFlux = EdgeFluxT<double>;
using ComplexEdgeFlux = EdgeFluxT<cplx>;

// Covariant bilinear edge flux of the pair (v, w):
//   x-face: (i/2) (v_a U* w_b* - w_a* U v_b)/dx,   U the x-link phase,
//   y-face: (i/2) (v_a w_b* - w_a* v_b)/dy.
// For v = w = psi this is the gauge-invariant supercurrent sampled at edge
// midpoints; it is exactly bilinear in (v, conj w), which the normal-form
// bookkeeping relies on. Boundary faces stay zero.
ComplexEdgeFlux bilinear_edge_flux(const ComplexField& v, const ComplexField& w, double h);

// Supercurrent of psi (real part of the diagonal bilinear flux; the
// imaginary part vanishes identically).
RealEdgeFlux supercurrent_flux(const ComplexField& psi, double h);

// Samples a nodal vector field (fx_fn, fy_fn) at all face midpoints,
// including boundary faces. Used for manufactured-solution tests.
RealEdgeFlux sample_edge_flux(const GridPtr& g,
                              const std::function<double(double, double)>& fx_fn,
                              const std::function<double(double, double)>& fy_fn);

inline RealEdgeFlux real_flux(const ComplexEdgeFlux& f) {
  RealEdgeFlux r(f.grid);
  r.fx = f.fx.real();
  r.fy = f.fy.real();
  return r;
}

inline RealEdgeFlux imag_flux(const ComplexEdgeFlux& f) {
  RealEdgeFlux r(f.grid);
  r.fx = f.fx.imag();
  r.fy = f.fy.imag();
  return r;
}

}  // namespace tdglab
