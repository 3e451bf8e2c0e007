#include "hdmm/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "hdmm/errors.hpp"
#include "hdmm/projection.hpp"

namespace hdmm {

namespace {

std::vector<PointCloud> segmented_clouds(const DepthSequence& seq, const PipelineConfig& cfg) {
  validate(seq);
  const Intrinsics intr = cfg.intrinsics_for(seq.width, seq.height);
  std::vector<PointCloud> clouds;
  clouds.reserve(seq.frames.size());
  for (const Frame& f : seq.frames)
    clouds.push_back(depth_to_cloud(segment_foreground(f, cfg.z_min, cfg.z_max), intr));
  return clouds;
}

double pivot_for(const DepthSequence& seq, const PipelineConfig& cfg) {
  if (cfg.pivot_z) return *cfg.pivot_z;
  return median_foreground_depth(segment_foreground(seq.frames.front(), cfg.z_min, cfg.z_max));
}

std::vector<PointCloud> rotate_all(const std::vector<PointCloud>& clouds,
                                   const std::pair<double, double>& angle, double pivot) {
  std::vector<PointCloud> out;
  out.reserve(clouds.size());
  for (const PointCloud& c : clouds) out.push_back(rotate_cloud(c, angle.first, angle.second, pivot));
  return out;
}

Bounds3 expanded_bounds(std::span<const PointCloud> clouds, double frac) {
  Bounds3 b = bounds_of(clouds);
  b.expand(frac);
  return b;
}

std::array<GridDims, 3> plane_dims(const DepthSequence& seq, const PipelineConfig& cfg) {
  return {GridDims{seq.width, seq.height},            // front
          GridDims{cfg.depth_bins, seq.height},       // side
          GridDims{seq.width, cfg.depth_bins}};       // top
}

std::vector<MotionMap> maps_from_clouds(const std::vector<PointCloud>& clouds, const Bounds3& bounds,
                                        const std::array<GridDims, 3>& dims,
                                        const std::vector<int>& scales, const PipelineConfig& cfg,
                                        std::vector<std::string>* diagnostics) {
  constexpr std::array<ViewPlane, 3> planes = {ViewPlane::Front, ViewPlane::Side, ViewPlane::Top};
  const int n_frames = static_cast<int>(clouds.size());

  std::vector<MotionMap> out;
  std::vector<std::vector<ProjectedMap>> projected(3);
  bool projected_ready = false;

  for (int scale : scales) {
    if (scale < 1) throw UsageError("temporal scale must be >= 1");
    if (n_frames < scale + 1) {
      if (diagnostics)
        diagnostics->push_back("scale " + std::to_string(scale) + " skipped: sequence has only " +
                               std::to_string(n_frames) + " frames");
      continue;
    }
    if (!projected_ready) {
      for (size_t p = 0; p < 3; ++p) {
        projected[p].reserve(clouds.size());
        for (const PointCloud& c : clouds) projected[p].push_back(project(c, planes[p], bounds, dims[p]));
      }
      projected_ready = true;
    }
    for (size_t p = 0; p < 3; ++p) {
      MotionMap m = cfg.weighted ? accumulate_weighted(projected[p], scale, cfg.weights)
                                 : accumulate(projected[p], scale);
      out.push_back(std::move(m));
    }
  }
  if (out.empty())
    throw DataError("sequence of " + std::to_string(n_frames) +
                    " frames is too short for every requested temporal scale");
  return out;
}

uint64_t item_seed(uint64_t base, const SampleId& id, size_t angle_idx, int scale, ViewPlane plane) {
  // splitmix64-style mixing over the item coordinates
  uint64_t h = base;
  for (uint64_t v : {static_cast<uint64_t>(id.action), static_cast<uint64_t>(id.subject),
                     static_cast<uint64_t>(id.example), static_cast<uint64_t>(angle_idx),
                     static_cast<uint64_t>(scale), static_cast<uint64_t>(plane_tag(plane))}) {
    h += 0x9e3779b97f4a7c15ULL + v;
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
    h ^= h >> 31;
  }
  return h;
}

}  // namespace

std::vector<MotionMap> extract_hdmm(const DepthSequence& seq,
                                    const std::optional<std::pair<double, double>>& angle,
                                    const std::vector<int>& scales, const PipelineConfig& cfg,
                                    const std::optional<Bounds3>& shared_bounds,
                                    std::vector<std::string>* diagnostics) {
  if (scales.empty()) throw UsageError("at least one temporal scale is required");
  std::vector<PointCloud> clouds = segmented_clouds(seq, cfg);
  if (angle) clouds = rotate_all(clouds, *angle, pivot_for(seq, cfg));
  const Bounds3 bounds = shared_bounds ? *shared_bounds : expanded_bounds(clouds, cfg.bounds_expand);
  return maps_from_clouds(clouds, bounds, plane_dims(seq, cfg), scales, cfg, diagnostics);
}

void enumerate_training_set(const DatasetManifest& manifest,
                            const std::vector<std::pair<double, double>>& grid,
                            const std::vector<int>& scales, const AugmentSpec& spec,
                            const PipelineConfig& cfg,
                            const std::function<void(TrainingItem&&)>& sink, EnumerateStats* stats) {
  if (grid.empty()) throw UsageError("rotation grid must not be empty");
  EnumerateStats local;
  EnumerateStats& st = stats ? *stats : local;

  for (const ManifestEntry& entry : manifest.entries) {
    try {
      const DepthSequence seq = read_sequence(entry.path);
      const std::vector<PointCloud> base = segmented_clouds(seq, cfg);
      const double pivot = pivot_for(seq, cfg);

      // Common bounds across the whole rotation grid keep every map of this
      // sequence registered on the same cells.
      std::vector<std::vector<PointCloud>> rotated;
      rotated.reserve(grid.size());
      std::vector<PointCloud> all;
      for (const auto& angle : grid) {
        rotated.push_back(rotate_all(base, angle, pivot));
        for (const PointCloud& c : rotated.back()) all.push_back(c);
      }
      Bounds3 bounds = bounds_of(all);
      bounds.expand(cfg.bounds_expand);
      const auto dims = plane_dims(seq, cfg);

      for (size_t ai = 0; ai < grid.size(); ++ai) {
        const auto maps = maps_from_clouds(rotated[ai], bounds, dims, scales, cfg, &st.diagnostics);
        for (const MotionMap& m : maps) {
          PseudoRgbImage img = encode(m, cfg.canvas);
          img.provenance = Provenance{entry.id, m.plane, m.scale, grid[ai].first, grid[ai].second};
          AugmentSpec item_spec = spec;
          item_spec.seed = item_seed(spec.seed, entry.id, ai, m.scale, m.plane);
          PseudoRgbImage augmented = augment(img, item_spec);
          augmented.provenance = img.provenance;
          ++st.produced;
          sink(TrainingItem{std::move(augmented), entry.label, m.plane});
        }
      }
    } catch (const std::exception& e) {
      st.failures.push_back(format_sample_id(entry.id) + ": " + e.what());
    }
  }
}

}  // namespace hdmm
