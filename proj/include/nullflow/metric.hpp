#pragma once

#include <string>

#include "nullflow/diffpoly.hpp"

namespace nullflow {

/// Signs, scale and background curvature of the Cartan frame
/// {T, W1, N, W2}: <T,N> = -1, <Wi,Wi> = eps_i, all other pairings zero.
///
/// Each entry is a constant element of the algebra, so the same code runs
/// fully symbolic (the default) or with some entries pinned to numbers.
/// `a` must be a unit: the symbol a, a power of it, or a nonzero rational.
struct FrameMetric {
  DiffPoly eps1 = param("eps1");
  DiffPoly eps2 = param("eps2");
  DiffPoly a = param("a");
  DiffPoly G = param("G");

  /// Pseudo-Euclidean background (G = 0).
  static FrameMetric flat() {
    FrameMetric m;
    m.G = DiffPoly{};
    return m;
  }

  DiffPoly eps12() const { return eps1 * eps2; }
  DiffPoly over_a(const DiffPoly& p) const { return divide(p, a); }
};

}  // namespace nullflow
