#include "tdglab/operators.hpp"

#include <vector>

namespace tdglab {

ComplexField covariant_laplacian(const ComplexField& psi, double h) {
  const Grid& g = *psi.grid;
  ComplexField out(psi.grid);
  const double ix2 = 1.0 / (g.dx * g.dx);
  const double iy2 = 1.0 / (g.dy * g.dy);
  for (int j = 1; j < g.ny - 1; ++j) {
    const cplx u = x_link(g, h, j);
    const cplx uc = std::conj(u);
    for (int i = 1; i < g.nx - 1; ++i) {
      const int k = g.idx(i, j);
      out.v[k] = ix2 * (u * psi.v[k + 1] - 2.0 * psi.v[k] + uc * psi.v[k - 1]) +
                 iy2 * (psi.v[k + g.nx] - 2.0 * psi.v[k] + psi.v[k - g.nx]);
    }
  }
  return out;
}

ComplexField covariant_laplacian_general(const ComplexField& psi,
                                         const std::function<double(double, double)>& ax,
                                         const std::function<double(double, double)>& ay) {
  const Grid& g = *psi.grid;
  ComplexField out(psi.grid);
  const double ix2 = 1.0 / (g.dx * g.dx);
  const double iy2 = 1.0 / (g.dy * g.dy);
  auto xphase = [&](int i, int j) {  // transport factor for neighbor (i+1,j)
    return std::exp(cplx(0.0, -ax(g.xs[i] + 0.5 * g.dx, g.ys[j]) * g.dx));
  };
  auto yphase = [&](int i, int j) {  // transport factor for neighbor (i,j+1)
    return std::exp(cplx(0.0, -ay(g.xs[i], g.ys[j] + 0.5 * g.dy) * g.dy));
  };
  for (int j = 1; j < g.ny - 1; ++j) {
    for (int i = 1; i < g.nx - 1; ++i) {
      const int k = g.idx(i, j);
      const cplx uxr = xphase(i, j), uxl = std::conj(xphase(i - 1, j));
      const cplx uyu = yphase(i, j), uyd = std::conj(yphase(i, j - 1));
      out.v[k] = ix2 * (uxr * psi.v[k + 1] - 2.0 * psi.v[k] + uxl * psi.v[k - 1]) +
                 iy2 * (uyu * psi.v[k + g.nx] - 2.0 * psi.v[k] + uyd * psi.v[k - g.nx]);
    }
  }
  return out;
}

SparseC assemble_link_energy(const Grid& g, double h) {
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(8 * g.size());
  const double ix2 = 1.0 / (g.dx * g.dx);
  const double iy2 = 1.0 / (g.dy * g.dy);
  // x-edges: energy vol * |U u_b - u_a|^2 / dx^2, U the transport phase.
  for (int j = 0; j < g.ny; ++j) {
    const cplx u = x_link(g, h, j);
    const double c = g.wy[j] * g.dx * ix2;
    for (int i = 0; i < g.nx - 1; ++i) {
      const int a = g.idx(i, j), b = g.idx(i + 1, j);
      t.emplace_back(a, a, c);
      t.emplace_back(b, b, c);
      t.emplace_back(a, b, -c * u);
      t.emplace_back(b, a, -c * std::conj(u));
    }
  }
  // y-edges: unit phase.
  for (int j = 0; j < g.ny - 1; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double c = g.wx[i] * g.dy * iy2;
      const int a = g.idx(i, j), b = g.idx(i, j + 1);
      t.emplace_back(a, a, c);
      t.emplace_back(b, b, c);
      t.emplace_back(a, b, -c);
      t.emplace_back(b, a, -c);
    }
  }
  SparseC m(g.size(), g.size());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SparseR assemble_neumann_energy(const Grid& g) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(8 * g.size());
  const double ix2 = 1.0 / (g.dx * g.dx);
  const double iy2 = 1.0 / (g.dy * g.dy);
  for (int j = 0; j < g.ny; ++j) {
    const double c = g.wy[j] * g.dx * ix2;
    for (int i = 0; i < g.nx - 1; ++i) {
      const int a = g.idx(i, j), b = g.idx(i + 1, j);
      t.emplace_back(a, a, c);
      t.emplace_back(b, b, c);
      t.emplace_back(a, b, -c);
      t.emplace_back(b, a, -c);
    }
  }
  for (int j = 0; j < g.ny - 1; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double c = g.wx[i] * g.dy * iy2;
      const int a = g.idx(i, j), b = g.idx(i, j + 1);
      t.emplace_back(a, a, c);
      t.emplace_back(b, b, c);
      t.emplace_back(a, b, -c);
      t.emplace_back(b, a, -c);
    }
  }
  SparseR m(g.size(), g.size());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

void mask_lead_nodes(SparseC& m, const Grid& g) {
  std::vector<char> lead(g.size(), 0);
  for (int j = 0; j < g.ny; ++j) {
    if (!g.lead_row[j]) continue;
    lead[g.idx(0, j)] = 1;
    lead[g.idx(g.nx - 1, j)] = 1;
  }
  for (int col = 0; col < m.outerSize(); ++col) {
    for (SparseC::InnerIterator it(m, col); it; ++it) {
      if (lead[it.row()] || lead[it.col()]) it.valueRef() = (it.row() == it.col()) ? 1.0 : 0.0;
    }
  }
  m.prune([](int, int, const cplx& v) { return v != cplx(0.0, 0.0); });
}

BcResidual bc_residual(const ComplexField& psi, const Params& p) {
  const Grid& g = *psi.grid;
  BcResidual r;
  const double i2dx = 1.0 / (2.0 * g.dx), i2dy = 1.0 / (2.0 * g.dy);
  for (int j = 0; j < g.ny; ++j) {
    for (int side = 0; side < 2; ++side) {
      const int i = side == 0 ? 0 : g.nx - 1;
      const cplx u0 = psi.at(i, j);
      if (g.lead_row[j]) {
        r.lead_max = std::max(r.lead_max, std::abs(u0));
      } else if (j > 0 && j < g.ny - 1) {
        // one-sided second-order psi_x at the side
        cplx dpsi;
        if (side == 0)
          dpsi = (-3.0 * u0 + 4.0 * psi.at(1, j) - psi.at(2, j)) * i2dx;
        else
          dpsi = (3.0 * u0 - 4.0 * psi.at(g.nx - 2, j) + psi.at(g.nx - 3, j)) * i2dx;
        r.robin_max = std::max(r.robin_max, std::abs(dpsi + cplx(0, p.h * g.ys[j]) * u0));
      }
    }
  }
  for (int i = 0; i < g.nx; ++i) {
    const cplx b0 = psi.at(i, 0), t0 = psi.at(i, g.ny - 1);
    const cplx db = (-3.0 * b0 + 4.0 * psi.at(i, 1) - psi.at(i, 2)) * i2dy;
    const cplx dt = (3.0 * t0 - 4.0 * psi.at(i, g.ny - 2) + psi.at(i, g.ny - 3)) * i2dy;
    r.neumann_max = std::max({r.neumann_max, std::abs(db), std::abs(dt)});
  }
  return r;
}

Eigen::VectorXd weight_vector(const Grid& g) {
  Eigen::VectorXd w(g.size());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) w[g.idx(i, j)] = g.weight(i, j);
  return w;
}

}  // namespace tdglab
