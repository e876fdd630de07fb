#pragma once

#include <memory>
#include <vector>

#include "tdglab/params.hpp"

namespace tdglab {

// Uniform tensor-product node grid on [-L,L] x [-K,K], boundary nodes
// included. Node (i,j) sits at (xs[i], ys[j]) and owns the trapezoid
// weight wx[i]*wy[j], which doubles as its finite-volume cell area.
class Grid {
 public:
  Params params;
  int nx = 0, ny = 0;
  double dx = 0.0, dy = 0.0;
  std::vector<double> xs, ys;
  std::vector<double> wx, wy;
  std::vector<char> lead_row;  // per j: node on x=+-L is a lead node (|y_j| < delta)

  int size() const { return nx * ny; }
  int idx(int i, int j) const { return j * nx + i; }
  bool is_boundary(int i, int j) const { return i == 0 || i == nx - 1 || j == 0 || j == ny - 1; }
  bool is_lead(int i, int j) const { return (i == 0 || i == nx - 1) && lead_row[j]; }
  double weight(int i, int j) const { return wx[i] * wy[j]; }
  double area() const { return 4.0 * params.L * params.K; }

  // Index of the center node (0,0); requires odd nx and ny.
  int center_index() const;
  bool has_center_node() const { return (nx % 2 == 1) && (ny % 2 == 1); }

  // Overlap of the boundary face of side node (.,j) with the lead interval
  // (-delta, delta); used by the current-injection right-hand side.
  double lead_face_overlap(int j) const;

  bool same_layout(const Grid& o) const {
    return nx == o.nx && ny == o.ny && params.L == o.params.L && params.K == o.params.K;
  }
};

using GridPtr = std::shared_ptr<const Grid>;

// Builds the grid; rejects resolutions too coarse to resolve the leads
// (fewer than 3 lead nodes per side when delta > 0).
GridPtr build_grid(const Params& params, int nx, int ny);

}  // namespace tdglab
