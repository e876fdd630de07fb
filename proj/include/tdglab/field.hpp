#pragma once

#include <Eigen/Dense>
#include <complex>

#include "tdglab/grid.hpp"

namespace tdglab {

using cplx = std::complex<double>;

// Grid-sampled scalar fields, one value per node, row-major (idx = j*nx+i).
// Fields are treated as immutable snapshots once handed to solvers.
template <typename Scalar>
struct FieldT {
  GridPtr grid;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v;

  FieldT() = default;
  explicit FieldT(GridPtr g) : grid(std::move(g)) { v.setZero(grid->size()); }
  FieldT(GridPtr g, Eigen::Matrix<Scalar, Eigen::Dynamic, 1> vals)
      : grid(std::move(g)), v(std::move(vals)) {}

  Scalar& at(int i, int j) { return v[grid->idx(i, j)]; }
  Scalar at(int i, int j) const { return v[grid->idx(i, j)]; }
  int size() const { return static_cast<int>(v.size()); }

  bool finite() const {
    for (int k = 0; k < v.size(); ++k)
      if (!std::isfinite(std::abs(v[k]))) return false;
    return true;
  }
  double max_abs() const {
    double m = 0.0;
    for (int k = 0; k < v.size(); ++k) m = std::max(m, std::abs(v[k]));
    return m;
  }
};

using RealField = FieldT<double>;
using ComplexField = FieldT<cplx>;

// Trapezoid quadrature of f over the rectangle.
template <typename Scalar>
Scalar integrate(const FieldT<Scalar>& f) {
  Scalar s{};
  const Grid& g = *f.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) s += g.weight(i, j) * f.v[g.idx(i, j)];
  return s;
}

// Bilinear pairing sum w * a * b (no conjugation).
inline cplx integrate_bilinear(const ComplexField& a, const ComplexField& b) {
  cplx s{};
  const Grid& g = *a.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int k = g.idx(i, j);
      s += g.weight(i, j) * a.v[k] * b.v[k];
    }
  return s;
}

// Weighted Hermitian inner product sum w * conj(a) * b.
inline cplx inner_w(const ComplexField& a, const ComplexField& b) {
  cplx s{};
  const Grid& g = *a.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int k = g.idx(i, j);
      s += g.weight(i, j) * std::conj(a.v[k]) * b.v[k];
    }
  return s;
}

inline double norm_w(const ComplexField& a) { return std::sqrt(std::abs(inner_w(a, a))); }

template <typename Scalar>
FieldT<Scalar> reflect_x(const FieldT<Scalar>& f) {
  FieldT<Scalar> r(f.grid);
  const Grid& g = *f.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) r.v[g.idx(i, j)] = f.v[g.idx(g.nx - 1 - i, j)];
  return r;
}

template <typename Scalar>
FieldT<Scalar> reflect_y(const FieldT<Scalar>& f) {
  FieldT<Scalar> r(f.grid);
  const Grid& g = *f.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) r.v[g.idx(i, j)] = f.v[g.idx(i, g.ny - 1 - j)];
  return r;
}

// PT partner u^dag(x,y) = conj(u(-x,y)).
inline ComplexField pt_partner(const ComplexField& f) {
  ComplexField r = reflect_x(f);
  r.v = r.v.conjugate();
  return r;
}

inline RealField real_part(const ComplexField& f) {
  RealField r(f.grid);
  r.v = f.v.real();
  return r;
}

inline RealField imag_part(const ComplexField& f) {
  RealField r(f.grid);
  r.v = f.v.imag();
  return r;
}

}  // namespace tdglab
