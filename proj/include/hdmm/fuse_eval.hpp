#ifndef HDMM_FUSE_EVAL_HPP
#define HDMM_FUSE_EVAL_HPP

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hdmm/classify.hpp"
#include "hdmm/pipeline.hpp"

namespace hdmm {

struct ConfusionMatrix {
  int class_count = 0;
  std::vector<int64_t> counts;  // row = true class, column = predicted

  explicit ConfusionMatrix(int k = 0) : class_count(k), counts(static_cast<size_t>(k) * k, 0) {}
  int64_t at(int true_label, int predicted) const {
    return counts[static_cast<size_t>(true_label - 1) * class_count + (predicted - 1)];
  }
  int64_t& at(int true_label, int predicted) {
    return counts[static_cast<size_t>(true_label - 1) * class_count + (predicted - 1)];
  }
};

struct EvalReport {
  double accuracy = 0;
  std::vector<double> per_class_accuracy;  // indexed by label - 1
  ConfusionMatrix confusion;
  int64_t evaluated = 0;
  std::vector<std::string> failures;  // samples excluded because extraction failed
};

/// Arithmetic mean of posterior vectors over temporal scales.
ScoreVector fuse_scales(const std::vector<ScoreVector>& scores);

/// Arithmetic mean of the three per-plane posteriors (front, side, top).
ScoreVector fuse_planes(const std::array<ScoreVector, 3>& scores);

/// Ties broken toward the lowest class index. Returns a 0-based index.
int argmax_class(const ScoreVector& scores);

struct PlaneModels {
  ClassifierModel front, side, top;
  const ClassifierModel& at(ViewPlane p) const {
    switch (p) {
      case ViewPlane::Front: return front;
      case ViewPlane::Side: return side;
      default: return top;
    }
  }
};

struct EvalConfig {
  PipelineConfig pipeline;
  uint32_t crop = 224;        // deterministic center crop at test time
  uint32_t feature_side = 32;
};

/// Test-time prediction: extraction without rotation, per-plane prediction on
/// every usable scale, scale fusion per plane, then plane fusion.
ScoreVector predict_sample(const DepthSequence& seq, const PlaneModels& models,
                           const std::vector<int>& scales, const EvalConfig& cfg);

/// Assemble accuracy, per-class accuracy and the confusion matrix from
/// (true label, predicted label) pairs, labels in [1, class_count].
EvalReport report_from_predictions(const std::vector<std::pair<int, int>>& true_predicted,
                                   int class_count);

EvalReport evaluate(const DatasetManifest& test_set, const PlaneModels& models,
                    const std::vector<int>& scales, const EvalConfig& cfg);

}  // namespace hdmm

#endif
