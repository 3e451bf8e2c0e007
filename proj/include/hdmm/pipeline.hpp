#ifndef HDMM_PIPELINE_HPP
#define HDMM_PIPELINE_HPP

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hdmm/depth_io.hpp"
#include "hdmm/encode.hpp"
#include "hdmm/geometry.hpp"
#include "hdmm/motion_maps.hpp"

namespace hdmm {

struct PipelineConfig {
  double focal = 580.0;              // px
  std::optional<double> cx, cy;      // default: width/2, height/2
  double z_min = 1.0;                // foreground depth band, mm
  double z_max = 1e9;
  uint32_t depth_bins = 320;         // grid cells along the depth axis (side/top views)
  double bounds_expand = 0.05;
  std::optional<double> pivot_z;     // default: median foreground depth of the first frame
  bool weighted = true;
  WeightParams weights{};
  uint32_t canvas = 256;

  Intrinsics intrinsics_for(uint32_t width, uint32_t height) const {
    return {focal, cx.value_or(width / 2.0), cy.value_or(height / 2.0), width, height};
  }
};

/// Motion maps for one sequence at one rotation setting: three planes per
/// usable temporal scale. Scales too long for the sequence are skipped with a
/// diagnostic; an error is raised only when every scale is unusable.
/// `shared_bounds`, when given, overrides the per-call bounds so maps from
/// different rotations of the same sequence stay pixel-registered.
std::vector<MotionMap> extract_hdmm(const DepthSequence& seq,
                                    const std::optional<std::pair<double, double>>& angle,
                                    const std::vector<int>& scales, const PipelineConfig& cfg,
                                    const std::optional<Bounds3>& shared_bounds = {},
                                    std::vector<std::string>* diagnostics = nullptr);

struct TrainingItem {
  PseudoRgbImage image;
  int label = 0;
  ViewPlane plane = ViewPlane::Front;
};

struct EnumerateStats {
  size_t produced = 0;
  std::vector<std::string> failures;  // per-sample extraction errors
  std::vector<std::string> diagnostics;
};

/// Stream of encoded, augmented training images: one per
/// (sample x rotation angle x usable scale x plane). Per-item augmentation
/// seeds derive from (sample id, angle, scale, plane, spec.seed). Samples
/// that fail to extract are reported and skipped.
void enumerate_training_set(const DatasetManifest& manifest,
                            const std::vector<std::pair<double, double>>& grid,
                            const std::vector<int>& scales, const AugmentSpec& spec,
                            const PipelineConfig& cfg,
                            const std::function<void(TrainingItem&&)>& sink,
                            EnumerateStats* stats = nullptr);

}  // namespace hdmm

#endif
