#ifndef HDMM_PROJECTION_HPP
#define HDMM_PROJECTION_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hdmm/geometry.hpp"

namespace hdmm {

enum class ViewPlane { Front, Side, Top };

char plane_tag(ViewPlane p);
ViewPlane plane_from_tag(char tag);

struct Bounds3 {
  Point3 min;
  Point3 max;

  /// Grow every axis extent by `frac`; degenerate axes get a 1 mm half-width.
  void expand(double frac);
};

struct GridDims {
  uint32_t cols = 0;
  uint32_t rows = 0;
};

struct ProjectedMap {
  ViewPlane plane = ViewPlane::Front;
  uint32_t cols = 0;
  uint32_t rows = 0;
  std::vector<double> values;  // row-major, >= 0, 0 = empty cell

  double at(uint32_t col, uint32_t row) const { return values[static_cast<size_t>(row) * cols + col]; }
  double& at(uint32_t col, uint32_t row) { return values[static_cast<size_t>(row) * cols + col]; }
};

/// Depth-band thresholding: pixels outside [z_min, z_max] become 0.
Frame segment_foreground(const Frame& frame, double z_min, double z_max);

Bounds3 bounds_of(std::span<const PointCloud> clouds);

struct ProjectionStats {
  size_t dropped = 0;  // points outside the bounds
};

/// Bin a cloud onto one orthogonal plane.
///   front: cell (X, Y) holds Z;  side: cell (Z, Y) holds X;  top: cell (X, Z) holds Y.
/// Stored values are shifted by the bounds minimum of the value axis so they
/// are non-negative; within a cell the smallest raw value (nearest the
/// viewing direction) wins. Rows run top-down: larger Y maps to smaller row
/// index for front/side views, larger Z to larger row index for the top view.
ProjectedMap project(const PointCloud& cloud, ViewPlane plane, const Bounds3& bounds, GridDims dims,
                     ProjectionStats* stats = nullptr);

}  // namespace hdmm

#endif
