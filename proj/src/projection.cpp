#include "hdmm/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hdmm/errors.hpp"

namespace hdmm {

char plane_tag(ViewPlane p) {
  switch (p) {
    case ViewPlane::Front: return 'f';
    case ViewPlane::Side: return 's';
    case ViewPlane::Top: return 't';
  }
  return '?';
}

ViewPlane plane_from_tag(char tag) {
  switch (tag) {
    case 'f': return ViewPlane::Front;
    case 's': return ViewPlane::Side;
    case 't': return ViewPlane::Top;
  }
  throw DataError(std::string("unknown view plane tag: ") + tag);
}

Frame segment_foreground(const Frame& frame, double z_min, double z_max) {
  if (z_min >= z_max) throw UsageError("depth band requires z_min < z_max");
  Frame out = frame;
  for (uint32_t& v : out.values)
    if (v < z_min || v > z_max) v = 0;
  return out;
}

void Bounds3::expand(double frac) {
  auto grow = [frac](double& lo, double& hi) {
    const double c = (lo + hi) / 2;
    double half = (hi - lo) / 2 * (1 + frac);
    if (half <= 0) half = 1.0;
    lo = c - half;
    hi = c + half;
  };
  grow(min.x, max.x);
  grow(min.y, max.y);
  grow(min.z, max.z);
}

Bounds3 bounds_of(std::span<const PointCloud> clouds) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Bounds3 b{{inf, inf, inf}, {-inf, -inf, -inf}};
  size_t n = 0;
  for (const PointCloud& c : clouds) {
    for (const Point3& p : c.points) {
      b.min.x = std::min(b.min.x, p.x);
      b.min.y = std::min(b.min.y, p.y);
      b.min.z = std::min(b.min.z, p.z);
      b.max.x = std::max(b.max.x, p.x);
      b.max.y = std::max(b.max.y, p.y);
      b.max.z = std::max(b.max.z, p.z);
      ++n;
    }
  }
  if (n == 0) throw DataError("cannot compute bounds of empty point clouds");
  return b;
}

namespace {

// Bin index in [0, k); coordinates exactly at the upper bound fall into the
// last bin. Returns -1 for out-of-bounds coordinates.
long bin_index(double v, double lo, double hi, uint32_t k) {
  if (v < lo || v > hi) return -1;
  if (v == hi) return static_cast<long>(k) - 1;
  long i = static_cast<long>(std::floor((v - lo) / (hi - lo) * k));
  return std::clamp(i, 0L, static_cast<long>(k) - 1);
}

}  // namespace

ProjectedMap project(const PointCloud& cloud, ViewPlane plane, const Bounds3& bounds, GridDims dims,
                     ProjectionStats* stats) {
  if (dims.cols == 0 || dims.rows == 0) throw UsageError("projection grid dimensions must be positive");
  if (!(bounds.min.x < bounds.max.x && bounds.min.y < bounds.max.y && bounds.min.z < bounds.max.z))
    throw UsageError("projection bounds are degenerate");

  ProjectedMap map{plane, dims.cols, dims.rows,
                   std::vector<double>(static_cast<size_t>(dims.cols) * dims.rows, 0)};
  std::vector<char> occupied(map.values.size(), 0);
  size_t dropped = 0;

  for (const Point3& p : cloud.points) {
    double h, v, val, hlo, hhi, vlo, vhi, val_min;
    bool y_vertical = true;
    switch (plane) {
      case ViewPlane::Front:
        h = p.x; v = p.y; val = p.z;
        hlo = bounds.min.x; hhi = bounds.max.x; vlo = bounds.min.y; vhi = bounds.max.y;
        val_min = bounds.min.z;
        break;
      case ViewPlane::Side:
        h = p.z; v = p.y; val = p.x;
        hlo = bounds.min.z; hhi = bounds.max.z; vlo = bounds.min.y; vhi = bounds.max.y;
        val_min = bounds.min.x;
        break;
      default:  // Top
        h = p.x; v = p.z; val = p.y;
        hlo = bounds.min.x; hhi = bounds.max.x; vlo = bounds.min.z; vhi = bounds.max.z;
        val_min = bounds.min.y;
        y_vertical = false;
        break;
    }
    const long col = bin_index(h, hlo, hhi, dims.cols);
    long row = bin_index(v, vlo, vhi, dims.rows);
    if (col < 0 || row < 0) {
      ++dropped;
      continue;
    }
    if (y_vertical) row = static_cast<long>(dims.rows) - 1 - row;  // Y up, rows down

    const size_t idx = static_cast<size_t>(row) * dims.cols + col;
    const double shifted = val - val_min;
    if (!occupied[idx] || shifted < map.values[idx]) {
      map.values[idx] = shifted;
      occupied[idx] = 1;
    }
  }
  if (stats) stats->dropped = dropped;
  return map;
}

}  // namespace hdmm
