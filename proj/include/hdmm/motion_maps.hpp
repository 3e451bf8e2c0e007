#ifndef HDMM_MOTION_MAPS_HPP
#define HDMM_MOTION_MAPS_HPP

#include <span>
#include <utility>
#include <vector>

#include "hdmm/projection.hpp"

namespace hdmm {

struct WeightParams {
  double gamma = 0.99;
  double delta = 1.0;
};

struct MotionMap {
  ViewPlane plane = ViewPlane::Front;
  int scale = 1;  // temporal stride n >= 1
  uint32_t cols = 0;
  uint32_t rows = 0;
  std::vector<double> values;  // row-major, >= 0
  int frames_used = 0;         // number of accumulated frame differences

  double at(uint32_t col, uint32_t row) const { return values[static_cast<size_t>(row) * cols + col]; }
};

/// Sub-sampled frame pairs for temporal scale n: ((t-1)n+1, (t-2)n+1) for
/// t = 2..b with b the largest integer satisfying (b-1)n+1 <= N. Indices are
/// 1-based. Requires N >= n + 1 (at least one pair).
std::vector<std::pair<int, int>> subsample_indices(int frame_count, int scale);

/// Cellwise sum of absolute frame differences over the sub-sampled pairs,
/// without thresholding.
MotionMap accumulate(std::span<const ProjectedMap> maps, int scale);

/// Weighted recursion over the same pair list, seeded with the zero map:
///   H_t = gamma * |map_t - map_{t-1}| + delta * H_{t-1}.
MotionMap accumulate_weighted(std::span<const ProjectedMap> maps, int scale, const WeightParams& w);

}  // namespace hdmm

#endif
