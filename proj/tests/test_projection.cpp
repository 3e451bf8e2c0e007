#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hdmm/errors.hpp"
#include "hdmm/projection.hpp"

using namespace hdmm;

namespace {

// Independent binning oracle implementing the declared cell/value rules with
// a plain per-point loop.
ProjectedMap oracle_project(const PointCloud& cloud, ViewPlane plane, const Bounds3& b, GridDims dims) {
  ProjectedMap map{plane, dims.cols, dims.rows,
                   std::vector<double>(static_cast<size_t>(dims.cols) * dims.rows, 0)};
  std::vector<bool> occ(map.values.size(), false);
  auto bin = [](double v, double lo, double hi, uint32_t k) -> long {
    if (v < lo || v > hi) return -1;
    if (v == hi) return static_cast<long>(k) - 1;
    return static_cast<long>(std::floor((v - lo) / (hi - lo) * k));
  };
  for (const Point3& p : cloud.points) {
    long col = -1, row = -1;
    double stored = 0;
    if (plane == ViewPlane::Front) {
      col = bin(p.x, b.min.x, b.max.x, dims.cols);
      row = bin(p.y, b.min.y, b.max.y, dims.rows);
      if (row >= 0) row = dims.rows - 1 - row;
      stored = p.z - b.min.z;
    } else if (plane == ViewPlane::Side) {
      col = bin(p.z, b.min.z, b.max.z, dims.cols);
      row = bin(p.y, b.min.y, b.max.y, dims.rows);
      if (row >= 0) row = dims.rows - 1 - row;
      stored = p.x - b.min.x;
    } else {
      col = bin(p.x, b.min.x, b.max.x, dims.cols);
      row = bin(p.z, b.min.z, b.max.z, dims.rows);
      stored = p.y - b.min.y;
    }
    if (col < 0 || row < 0) continue;
    const size_t i = static_cast<size_t>(row) * dims.cols + col;
    if (!occ[i] || stored < map.values[i]) {
      map.values[i] = stored;
      occ[i] = true;
    }
  }
  return map;
}

PointCloud cloud_of(std::initializer_list<Point3> pts) {
  PointCloud c;
  for (const Point3& p : pts) {
    c.points.push_back(p);
    c.pixel_index.push_back(static_cast<uint32_t>(c.points.size() - 1));
  }
  return c;
}

}  // namespace

TEST_CASE("segment_foreground thresholds the depth band") {
  Frame f{3, 1, {500, 2000, 4000}};
  const Frame seg = segment_foreground(f, 400, 3000);
  CHECK(seg.values == std::vector<uint32_t>{500, 2000, 0});

  CHECK(segment_foreground(f, 1, 1e6).values == f.values);                       // identity band
  CHECK(segment_foreground(f, 4500, 5000).values == std::vector<uint32_t>{0, 0, 0});
  CHECK_THROWS_AS(segment_foreground(f, 10, 10), UsageError);
}

TEST_CASE("project basics") {
  const Bounds3 b{{-10, -10, 0}, {10, 10, 20}};
  const GridDims dims{8, 8};

  SUBCASE("single point at the bounds center hits one cell") {
    const PointCloud c = cloud_of({{0, 0, 10}});
    for (ViewPlane p : {ViewPlane::Front, ViewPlane::Side, ViewPlane::Top}) {
      const ProjectedMap m = project(c, p, b, dims);
      CHECK(std::count_if(m.values.begin(), m.values.end(), [](double v) { return v != 0; }) == 1);
    }
  }
  SUBCASE("empty cloud gives all-zero maps") {
    const PointCloud c;
    for (ViewPlane p : {ViewPlane::Front, ViewPlane::Side, ViewPlane::Top}) {
      const ProjectedMap m = project(c, p, b, dims);
      CHECK(std::all_of(m.values.begin(), m.values.end(), [](double v) { return v == 0; }));
    }
  }
  SUBCASE("three-point cloud matches the binning oracle on all planes") {
    const PointCloud c = cloud_of({{-7.5, 3.0, 4.0}, {2.0, -9.0, 19.0}, {9.9, 9.9, 0.5}});
    for (ViewPlane p : {ViewPlane::Front, ViewPlane::Side, ViewPlane::Top}) {
      const ProjectedMap got = project(c, p, b, dims);
      const ProjectedMap want = oracle_project(c, p, b, dims);
      CHECK(got.values == want.values);
    }
  }
  SUBCASE("out-of-bounds points are dropped and counted") {
    const PointCloud c = cloud_of({{0, 0, 10}, {100, 0, 10}});
    ProjectionStats stats;
    project(c, ViewPlane::Front, b, dims, &stats);
    CHECK(stats.dropped == 1);
  }
  SUBCASE("collisions keep the value nearest the viewer") {
    const PointCloud c = cloud_of({{0, 0, 15}, {0.1, 0.1, 3}});
    const ProjectedMap m = project(c, ViewPlane::Front, b, dims);
    double nonzero = 0;
    for (double v : m.values)
      if (v != 0) nonzero = v;
    CHECK(nonzero == doctest::Approx(3.0));  // z - min.z with min.z = 0
  }
}

TEST_CASE("project properties on random clouds") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> coord(-10, 10);
  std::uniform_real_distribution<double> depth(0.0, 20.0);
  const Bounds3 b{{-10, -10, 0}, {10, 10, 20}};
  const GridDims dims{8, 8};

  for (int trial = 0; trial < 50; ++trial) {
    PointCloud c;
    std::uniform_int_distribution<size_t> count(0, 30);
    const size_t n = count(rng);
    for (size_t i = 0; i < n; ++i) {
      c.points.push_back({coord(rng), coord(rng), depth(rng)});
      c.pixel_index.push_back(static_cast<uint32_t>(i));
    }
    for (ViewPlane p : {ViewPlane::Front, ViewPlane::Side, ViewPlane::Top}) {
      const ProjectedMap m = project(c, p, b, dims);
      const ProjectedMap want = oracle_project(c, p, b, dims);
      CHECK(m.values == want.values);
      const auto nonzero =
          std::count_if(m.values.begin(), m.values.end(), [](double v) { return v != 0; });
      CHECK(static_cast<size_t>(nonzero) <= c.points.size());

      // permutation invariance
      PointCloud shuffled = c;
      std::shuffle(shuffled.points.begin(), shuffled.points.end(), rng);
      CHECK(project(shuffled, p, b, dims).values == m.values);
    }
  }
}

TEST_CASE("front projection of a back-projected frame reproduces it") {
  // Unit bins, bounds aligned to the pixel frustum at the frame's depth
  // range, zero-rotation: the front map must equal the segmented frame.
  const uint32_t w = 8, h = 8;
  const Intrinsics intr{1.0, 0.0, static_cast<double>(h), w, h};  // 1 px focal keeps X = u * Z

  // constant depth keeps the frustum rectangular so bins align with pixels
  Frame f{w, h, std::vector<uint32_t>(static_cast<size_t>(w) * h, 1)};
  const PointCloud cloud = depth_to_cloud(f, intr);
  // X = u * 1, Y = (h - v) * 1 for Z = 1
  const Bounds3 b{{-0.5, 0.5, 0}, {w - 0.5, h + 0.5, 2}};
  const ProjectedMap m = project(cloud, ViewPlane::Front, b, GridDims{w, h});
  for (uint32_t v = 0; v < h; ++v)
    for (uint32_t u = 0; u < w; ++u) CHECK(m.at(u, v) == doctest::Approx(1.0));
}

TEST_CASE("bounds expansion") {
  PointCloud c = cloud_of({{0, 0, 10}, {10, 2, 30}});
  Bounds3 b = bounds_of(std::span<const PointCloud>(&c, 1));
  CHECK(b.min.x == 0);
  CHECK(b.max.z == 30);
  b.expand(0.1);
  CHECK(b.min.x == doctest::Approx(-0.5));
  CHECK(b.max.x == doctest::Approx(10.5));
  CHECK(b.min.y == doctest::Approx(-0.1));

  Bounds3 degenerate{{1, 1, 1}, {1, 1, 1}};
  degenerate.expand(0.05);
  CHECK(degenerate.max.x - degenerate.min.x == doctest::Approx(2.0));

  const PointCloud empty;
  CHECK_THROWS_AS(bounds_of(std::span<const PointCloud>(&empty, 1)), DataError);
}
