#include "hdmm/motion_maps.hpp"

#include <cmath>
#include <string>

#include "hdmm/errors.hpp"

namespace hdmm {

std::vector<std::pair<int, int>> subsample_indices(int frame_count, int scale) {
  if (scale < 1) throw UsageError("temporal scale must be >= 1");
  if (frame_count < scale + 1)
    throw DataError("sequence of " + std::to_string(frame_count) +
                    " frames is too short for temporal scale " + std::to_string(scale));
  const int b = (frame_count - 1) / scale + 1;
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<size_t>(b) - 1);
  for (int t = 2; t <= b; ++t) pairs.emplace_back((t - 1) * scale + 1, (t - 2) * scale + 1);
  return pairs;
}

namespace {

MotionMap prepare(std::span<const ProjectedMap> maps, int scale) {
  if (maps.empty()) throw DataError("no projected maps to accumulate");
  const ProjectedMap& first = maps.front();
  for (const ProjectedMap& m : maps) {
    if (m.plane != first.plane || m.cols != first.cols || m.rows != first.rows)
      throw DataError("projected maps disagree in plane or dimensions");
  }
  MotionMap out;
  out.plane = first.plane;
  out.scale = scale;
  out.cols = first.cols;
  out.rows = first.rows;
  out.values.assign(first.values.size(), 0.0);
  return out;
}

}  // namespace

MotionMap accumulate(std::span<const ProjectedMap> maps, int scale) {
  MotionMap out = prepare(maps, scale);
  const auto pairs = subsample_indices(static_cast<int>(maps.size()), scale);
  for (const auto& [cur, prev] : pairs) {
    const auto& a = maps[static_cast<size_t>(cur) - 1].values;
    const auto& b = maps[static_cast<size_t>(prev) - 1].values;
    for (size_t i = 0; i < out.values.size(); ++i) out.values[i] += std::abs(a[i] - b[i]);
  }
  out.frames_used = static_cast<int>(pairs.size());
  return out;
}

MotionMap accumulate_weighted(std::span<const ProjectedMap> maps, int scale, const WeightParams& w) {
  if (!(w.gamma > 0) || !(w.delta > 0) || !std::isfinite(w.gamma) || !std::isfinite(w.delta))
    throw UsageError("weight parameters must be finite and positive");
  MotionMap out = prepare(maps, scale);
  const auto pairs = subsample_indices(static_cast<int>(maps.size()), scale);
  for (const auto& [cur, prev] : pairs) {
    const auto& a = maps[static_cast<size_t>(cur) - 1].values;
    const auto& b = maps[static_cast<size_t>(prev) - 1].values;
    for (size_t i = 0; i < out.values.size(); ++i)
      out.values[i] = w.gamma * std::abs(a[i] - b[i]) + w.delta * out.values[i];
  }
  out.frames_used = static_cast<int>(pairs.size());
  return out;
}

}  // namespace hdmm
