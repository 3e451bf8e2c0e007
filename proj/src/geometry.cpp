#include "hdmm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hdmm/errors.hpp"

namespace hdmm {

namespace {

struct Mat4 {
  double m[4][4] = {};
};

Mat4 mul(const Mat4& a, const Mat4& b) {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double acc = 0;
      for (int k = 0; k < 4; ++k) acc += a.m[i][k] * b.m[k][j];
      r.m[i][j] = acc;
    }
  return r;
}

Point3 apply(const Mat4& m, const Point3& p) {
  return {m.m[0][0] * p.x + m.m[0][1] * p.y + m.m[0][2] * p.z + m.m[0][3],
          m.m[1][0] * p.x + m.m[1][1] * p.y + m.m[1][2] * p.z + m.m[1][3],
          m.m[2][0] * p.x + m.m[2][1] * p.y + m.m[2][2] * p.z + m.m[2][3]};
}

// First rotation factor (theta). The translation column carries the pivot
// depth so points at (Y=0, Z=pivot) stay fixed.
Mat4 rot_theta(double theta_rad, double pivot_z) {
  const double c = std::cos(theta_rad), s = std::sin(theta_rad);
  Mat4 r;
  r.m[0][0] = 1;
  r.m[1][1] = c;
  r.m[1][2] = -s;
  r.m[1][3] = pivot_z * s;
  r.m[2][1] = s;
  r.m[2][2] = c;
  r.m[2][3] = pivot_z * (1 - c);
  r.m[3][3] = 1;
  return r;
}

// Second rotation factor (beta); fixes points at (X=0, Z=pivot).
Mat4 rot_beta(double beta_rad, double pivot_z) {
  const double c = std::cos(beta_rad), s = std::sin(beta_rad);
  Mat4 r;
  r.m[0][0] = c;
  r.m[0][2] = s;
  r.m[0][3] = -pivot_z * s;
  r.m[1][1] = 1;
  r.m[2][0] = -s;
  r.m[2][2] = c;
  r.m[2][3] = pivot_z * (1 - c);
  r.m[3][3] = 1;
  return r;
}

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

PointCloud depth_to_cloud(const Frame& frame, const Intrinsics& intr) {
  if (frame.width != intr.width || frame.height != intr.height)
    throw DataError("frame dimensions do not match intrinsics");
  PointCloud cloud;
  for (uint32_t v = 0; v < frame.height; ++v) {
    for (uint32_t u = 0; u < frame.width; ++u) {
      const uint32_t d = frame.at(u, v);
      if (d == 0) continue;
      const double z = static_cast<double>(d);
      cloud.points.push_back({(u - intr.cx) * z / intr.focal, (intr.cy - v) * z / intr.focal, z});
      cloud.pixel_index.push_back(v * frame.width + u);
    }
  }
  return cloud;
}

PointCloud rotate_cloud(const PointCloud& cloud, double theta_deg, double beta_deg, double pivot_z) {
  if (pivot_z <= 0) throw UsageError("rotation pivot depth must be positive");
  const Mat4 m = mul(rot_theta(theta_deg * kDegToRad, pivot_z), rot_beta(beta_deg * kDegToRad, pivot_z));
  PointCloud out;
  out.points.reserve(cloud.points.size());
  out.pixel_index = cloud.pixel_index;
  for (const Point3& p : cloud.points) out.points.push_back(apply(m, p));
  return out;
}

Frame cloud_to_depth(const PointCloud& cloud, const Intrinsics& intr) {
  Frame frame{intr.width, intr.height, std::vector<uint32_t>(static_cast<size_t>(intr.width) * intr.height, 0)};
  std::vector<double> zbuf(frame.values.size(), 0);
  for (const Point3& p : cloud.points) {
    if (p.z <= 0) continue;
    const long u = std::lround(intr.focal * p.x / p.z + intr.cx);
    const long v = std::lround(intr.cy - intr.focal * p.y / p.z);
    if (u < 0 || v < 0 || u >= static_cast<long>(intr.width) || v >= static_cast<long>(intr.height))
      continue;
    const size_t idx = static_cast<size_t>(v) * intr.width + u;
    if (zbuf[idx] == 0 || p.z < zbuf[idx]) {
      zbuf[idx] = p.z;
      const long d = std::lround(p.z);
      frame.values[idx] = d > 0 ? static_cast<uint32_t>(d) : 0;
    }
  }
  return frame;
}

std::vector<double> AngleGrid::values() const {
  if (step == 0) {
    if (start != stop) throw UsageError("angle grid with zero step must have start == stop");
    return {start};
  }
  const double span = stop - start;
  const double k = span / step;
  const long n = std::lround(k);
  if (n < 0 || std::abs(start + n * step - stop) > 1e-9 * std::max(1.0, std::abs(stop)))
    throw UsageError("angle grid endpoints are not reachable by the given step");
  std::vector<double> vals;
  vals.reserve(static_cast<size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) vals.push_back(start + i * step);
  return vals;
}

std::vector<std::pair<double, double>> rotation_grid(const RotationParams& params) {
  std::vector<std::pair<double, double>> grid;
  for (double th : params.theta.values())
    for (double be : params.beta.values()) grid.emplace_back(th, be);
  return grid;
}

double median_foreground_depth(const Frame& frame) {
  std::vector<uint32_t> fg;
  for (uint32_t v : frame.values)
    if (v > 0) fg.push_back(v);
  if (fg.empty()) throw DataError("frame has no foreground pixels; cannot derive rotation pivot");
  auto mid = fg.begin() + fg.size() / 2;
  std::nth_element(fg.begin(), mid, fg.end());
  return static_cast<double>(*mid);
}

}  // namespace hdmm
