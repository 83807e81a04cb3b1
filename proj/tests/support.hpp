#pragma once

#include <random>

#include "chipencil/geom_core.hpp"

namespace chipencil::proptest {

// Hand-rolled generators for property tests; fixed seeds keep failures
// replayable.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  Point point(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi)}; }

  // Canonical apex with a moderate side ratio and |b - c| >= margin.
  TriangleFrame frame(double margin = 1e-3) {
    for (;;) {
      const Point a{uniform(-0.5, 1.5), uniform(0.3, 1.5)};
      const TriangleFrame f = frame_from_apex(a);
      if (std::abs(f.b_len - f.c_len) >= margin) return f;
    }
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace chipencil::proptest
