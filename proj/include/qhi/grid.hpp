#pragma once

#include <vector>

#include "qhi/error.hpp"

namespace qhi {

/// `count` evenly spaced points from start to stop inclusive; endpoints are exact.
inline std::vector<double> linspace(double start, double stop, int count) {
  if (count < 1) throw InvalidArgument("linspace: count must be >= 1");
  if (count == 1) return {start};
  std::vector<double> g(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) g[i] = start + (stop - start) * i / (count - 1);
  g.back() = stop;
  return g;
}

inline bool strictly_increasing(const std::vector<double>& g) {
  for (size_t i = 1; i < g.size(); ++i)
    if (!(g[i] > g[i - 1])) return false;
  return true;
}

}  // namespace qhi
