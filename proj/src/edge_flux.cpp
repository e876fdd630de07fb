#include "tdglab/edge_flux.hpp"

namespace tdglab {

ComplexEdgeFlux bilinear_edge_flux(const ComplexField& v, const ComplexField& w, double h) {
  const Grid& g = *v.grid;
  ComplexEdgeFlux f(v.grid);
  const cplx ihalf(0.0, 0.5);
  for (int j = 0; j < g.ny; ++j) {
    const cplx u = x_link(g, h, j);
    const cplx uc = std::conj(u);
    for (int i = 0; i < g.nx - 1; ++i) {
      const int a = g.idx(i, j), b = g.idx(i + 1, j);
      f.fx_at(i + 1, j) =
          ihalf * (v.v[a] * uc * std::conj(w.v[b]) - std::conj(w.v[a]) * u * v.v[b]) / g.dx;
    }
  }
  for (int j = 0; j < g.ny - 1; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int a = g.idx(i, j), b = g.idx(i, j + 1);
      f.fy_at(i, j + 1) =
          ihalf * (v.v[a] * std::conj(w.v[b]) - std::conj(w.v[a]) * v.v[b]) / g.dy;
    }
  }
  return f;
}

RealEdgeFlux supercurrent_flux(const ComplexField& psi, double h) {
  const Grid& g = *psi.grid;
  RealEdgeFlux f(psi.grid);
  for (int j = 0; j < g.ny; ++j) {
    const cplx u = x_link(g, h, j);
    for (int i = 0; i < g.nx - 1; ++i) {
      const int a = g.idx(i, j), b = g.idx(i + 1, j);
      f.fx_at(i + 1, j) = std::imag(std::conj(psi.v[a]) * u * psi.v[b]) / g.dx;
    }
  }
  for (int j = 0; j < g.ny - 1; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int a = g.idx(i, j), b = g.idx(i, j + 1);
      f.fy_at(i, j + 1) = std::imag(std::conj(psi.v[a]) * psi.v[b]) / g.dy;
    }
  }
  return f;
}

RealEdgeFlux sample_edge_flux(const GridPtr& gp,
                              const std::function<double(double, double)>& fx_fn,
                              const std::function<double(double, double)>& fy_fn) {
  const Grid& g = *gp;
  RealEdgeFlux f(gp);
  for (int j = 0; j < g.ny; ++j) {
    f.fx_at(0, j) = fx_fn(-g.params.L, g.ys[j]);
    f.fx_at(g.nx, j) = fx_fn(g.params.L, g.ys[j]);
    for (int i = 1; i < g.nx; ++i) f.fx_at(i, j) = fx_fn(g.xs[i - 1] + 0.5 * g.dx, g.ys[j]);
  }
  for (int i = 0; i < g.nx; ++i) {
    f.fy_at(i, 0) = fy_fn(g.xs[i], -g.params.K);
    f.fy_at(i, g.ny) = fy_fn(g.xs[i], g.params.K);
    for (int j = 1; j < g.ny; ++j) f.fy_at(i, j) = fy_fn(g.xs[i], g.ys[j - 1] + 0.5 * g.dy);
  }
  return f;
}

}  // namespace tdglab
