#pragma once

#include <Eigen/Sparse>
#include <functional>

#include "tdglab/field.hpp"

namespace tdglab {

using SparseC = Eigen::SparseMatrix<cplx>;
using SparseR = Eigen::SparseMatrix<double>;

// Phase carried by the x-edge between (i,j) and (i+1,j) for the applied
// potential a = h*(-y, 0): the neighbor value psi(i+1,j) enters the stencil
// multiplied by exp(-i*h*(-y_j)*dx). y-edges carry unit phase.
inline cplx x_link(const Grid& g, double h, int j) {
  return std::exp(cplx(0.0, h * g.ys[j] * g.dx));
}

// Gauge-covariant five-point Laplacian (link variables) applied at interior
// nodes; boundary entries of the result are left at zero.
ComplexField covariant_laplacian(const ComplexField& psi, double h);

// Same operator for an arbitrary total vector potential a(x,y) (the applied
// field factor folded in), with edge phases sampled at edge midpoints.
ComplexField covariant_laplacian_general(const ComplexField& psi,
                                         const std::function<double(double, double)>& ax,
                                         const std::function<double(double, double)>& ay);

// Hermitian energy matrix H of the covariant Dirichlet form
//   E(u) = sum_edges vol_e |transport(u_head) - u_tail|^2 / d^2,
// assembled over the full grid. -W^{-1} H reproduces the link Laplacian at
// interior nodes and closes the natural (covariant Neumann) boundary
// conditions at boundary nodes; lead Dirichlet rows are masked separately.
SparseC assemble_link_energy(const Grid& g, double h);

// Real h=0 version (the Neumann Laplacian used by the potential solves).
SparseR assemble_neumann_energy(const Grid& g);

// Zeroes the rows/columns of lead nodes and puts 1 on their diagonal;
// exact for homogeneous Dirichlet data and keeps the matrix Hermitian.
void mask_lead_nodes(SparseC& m, const Grid& g);

// One-sided (3-point, second-order) residuals of the order-parameter
// boundary conditions on a given field; used to verify that computed states
// honor the continuous conditions to discretization accuracy.
struct BcResidual {
  double lead_max = 0.0;    // |psi| on lead nodes
  double robin_max = 0.0;   // |psi_x + i h y psi| on non-lead side nodes
  double neumann_max = 0.0; // |psi_y| on y = +-K
};
BcResidual bc_residual(const ComplexField& psi, const Params& p);

// Diagonal weight vector (finite-volume cell areas == trapezoid weights).
Eigen::VectorXd weight_vector(const Grid& g);

}  // namespace tdglab
