#include "tdglab/grid.hpp"

#include <algorithm>
#include <cmath>

namespace tdglab {

int Grid::center_index() const {
  if (!has_center_node()) throw ConfigError("grid has no exact center node (nx, ny must be odd)");
  return idx((nx - 1) / 2, (ny - 1) / 2);
}

double Grid::lead_face_overlap(int j) const {
  const double half_lo = (j == 0) ? 0.0 : 0.5 * dy;
  const double half_hi = (j == ny - 1) ? 0.0 : 0.5 * dy;
  const double lo = std::max(ys[j] - half_lo, -params.delta);
  const double hi = std::min(ys[j] + half_hi, params.delta);
  return std::max(0.0, hi - lo);
}

GridPtr build_grid(const Params& params, int nx, int ny) {
  params.validate();
  if (nx < 5 || ny < 5) throw ConfigError("grid too coarse: need nx >= 5 and ny >= 5");

  auto g = std::make_shared<Grid>();
  g->params = params;
  g->nx = nx;
  g->ny = ny;
  g->dx = 2.0 * params.L / (nx - 1);
  g->dy = 2.0 * params.K / (ny - 1);

  g->xs.resize(nx);
  g->ys.resize(ny);
  for (int i = 0; i < nx; ++i) g->xs[i] = -params.L + i * g->dx;
  for (int j = 0; j < ny; ++j) g->ys[j] = -params.K + j * g->dy;
  // pin the extreme nodes exactly
  g->xs[0] = -params.L;
  g->xs[nx - 1] = params.L;
  g->ys[0] = -params.K;
  g->ys[ny - 1] = params.K;

  g->wx.assign(nx, g->dx);
  g->wy.assign(ny, g->dy);
  g->wx[0] = g->wx[nx - 1] = 0.5 * g->dx;
  g->wy[0] = g->wy[ny - 1] = 0.5 * g->dy;

  g->lead_row.assign(ny, 0);
  int n_lead = 0;
  for (int j = 0; j < ny; ++j) {
    if (std::abs(g->ys[j]) < params.delta) {
      g->lead_row[j] = 1;
      ++n_lead;
    }
  }
  if (params.delta > 0.0 && n_lead < 3)
    throw ConfigError("grid too coarse: fewer than 3 lead nodes per side");

  return g;
}

}  // namespace tdglab
