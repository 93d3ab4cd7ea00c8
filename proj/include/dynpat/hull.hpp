#pragma once

// Stroboscopic embedding of consecutive spacings.

#include <algorithm>
#include <cmath>
#include <vector>

#include "dynpat/errors.hpp"
#include "dynpat/pattern.hpp"

namespace dynpat {

struct StrobeCloud {
  int depth = 0;
  int first_index = 0;  // label i of the first tuple
  std::vector<std::vector<double>> points;
};

/// Tuples (s_i, ..., s_{i+m-1}) of longitudinal spacings s_i = p_{i+1} - p_i,
/// one per label i with i + m inside the window.
inline StrobeCloud strobe_embed(const PointPattern& pattern, int depth) {
  if (pattern.label_dim() != 1) throw ValidationError("strobe embedding needs a 1D label lattice");
  if (depth < 1) throw ValidationError("strobe depth must be >= 1");
  const Window& w = pattern.window();
  const int length = w.extent(0);
  if (length <= depth) throw ValidationError("window too short for strobe depth");
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(length));
  for (int n = w.lo[0]; n <= w.hi[0]; ++n) x.push_back(pattern.at(n)[0]);

  StrobeCloud cloud;
  cloud.depth = depth;
  cloud.first_index = w.lo[0];
  for (int i = 0; i + depth < length; ++i) {
    std::vector<double> tuple;
    for (int j = 0; j < depth; ++j) {
      const auto a = static_cast<std::size_t>(i + j);
      tuple.push_back(x[a + 1] - x[a]);
    }
    cloud.points.push_back(std::move(tuple));
  }
  return cloud;
}

/// Number of points that differ from every earlier point by more than tol in
/// some coordinate.
inline std::size_t distinct_points(const StrobeCloud& cloud, double tol = 1e-9) {
  std::vector<std::vector<double>> sorted = cloud.points;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::vector<double>> kept;
  for (const auto& p : sorted) {
    bool seen = false;
    for (const auto& q : kept) {
      bool close = true;
      for (std::size_t j = 0; j < p.size(); ++j) close = close && std::abs(p[j] - q[j]) <= tol;
      if (close) {
        seen = true;
        break;
      }
    }
    if (!seen) kept.push_back(p);
  }
  return kept.size();
}

}  // namespace dynpat
