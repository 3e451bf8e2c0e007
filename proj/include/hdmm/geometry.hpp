#ifndef HDMM_GEOMETRY_HPP
#define HDMM_GEOMETRY_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "hdmm/depth_io.hpp"

namespace hdmm {

struct Point3 {
  double x = 0;  // camera-right, mm
  double y = 0;  // camera-up, mm
  double z = 0;  // depth along the optical axis, mm (> 0 for valid points)
};

struct PointCloud {
  std::vector<Point3> points;
  std::vector<uint32_t> pixel_index;  // source pixel (row * width + col), parallel to points
};

struct Intrinsics {
  double focal = 580.0;  // px
  double cx = 0;
  double cy = 0;
  uint32_t width = 0;
  uint32_t height = 0;

  static Intrinsics for_size(uint32_t w, uint32_t h, double focal = 580.0) {
    return {focal, w / 2.0, h / 2.0, w, h};
  }
};

/// Inclusive arithmetic progression, degrees.
struct AngleGrid {
  double start = 0;
  double step = 0;
  double stop = 0;

  std::vector<double> values() const;
};

struct RotationParams {
  AngleGrid theta{-30, 15, 30};
  AngleGrid beta{-5, 5, 5};
  double pivot_z = 0;  // mm, depth of the rotation pivot
};

/// Pinhole back-projection. X = (u - cx) * Z / f, Y = (cy - v) * Z / f.
/// Zero-depth pixels are omitted.
PointCloud depth_to_cloud(const Frame& frame, const Intrinsics& intr);

/// Camera-around-subject rotation: each point is multiplied by the composed
/// homogeneous matrix M = Ry(theta) * Rz(beta), whose translation entries use
/// the pivot depth. Angles in degrees; point order is preserved.
PointCloud rotate_cloud(const PointCloud& cloud, double theta_deg, double beta_deg, double pivot_z);

/// Forward pinhole projection with nearest-depth z-buffering. Points landing
/// outside the frame are dropped; untouched pixels stay 0.
Frame cloud_to_depth(const PointCloud& cloud, const Intrinsics& intr);

/// Cartesian product of the two angle progressions, theta outer, beta inner.
std::vector<std::pair<double, double>> rotation_grid(const RotationParams& params);

/// Median depth over nonzero pixels; the default rotation pivot.
double median_foreground_depth(const Frame& frame);

}  // namespace hdmm

#endif
