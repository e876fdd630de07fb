#pragma once

#include <cmath>

#include "tdglab/errors.hpp"

namespace tdglab {

// Physical and geometric parameters of the driven film on [-L,L] x [-K,K].
// Current of magnitude I is fed through leads |y| < delta on the sides
// x = +-L; h is the applied transverse field; gamma is the linear gain of
// the order parameter equation. delta = 0 disables the leads entirely
// (then I must be 0); delta = K covers the full sides.
struct Params {
  double L = 1.0;
  double K = 2.0 / 3.0;
  double delta = 4.0 / 15.0;
  double h = 0.0;
  double I = 0.0;
  double gamma = 0.0;

  void validate() const {
    if (!(L > 0.0) || !(K > 0.0)) throw ConfigError("L and K must be positive");
    if (!(delta >= 0.0) || !(delta <= K)) throw ConfigError("delta must satisfy 0 <= delta <= K");
    if (!(h >= 0.0)) throw ConfigError("h must be nonnegative");
    if (!(I >= 0.0)) throw ConfigError("I must be nonnegative");
    if (delta == 0.0 && I != 0.0) throw ConfigError("I > 0 requires leads (delta > 0)");
    if (!std::isfinite(L) || !std::isfinite(K) || !std::isfinite(delta) || !std::isfinite(h) ||
        !std::isfinite(I) || !std::isfinite(gamma))
      throw ConfigError("non-finite parameter value");
  }
};

}  // namespace tdglab
