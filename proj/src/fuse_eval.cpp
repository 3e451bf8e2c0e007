#include "hdmm/fuse_eval.hpp"

#include <algorithm>
#include <map>

#include "hdmm/errors.hpp"

namespace hdmm {

namespace {

ScoreVector mean_of(std::span<const ScoreVector> scores) {
  const size_t k = scores.front().size();
  for (const ScoreVector& s : scores)
    if (s.size() != k) throw DataError("score vectors disagree in class count");
  ScoreVector out(k, 0.0);
  for (const ScoreVector& s : scores)
    for (size_t i = 0; i < k; ++i) out[i] += s[i];
  for (double& v : out) v /= static_cast<double>(scores.size());
  return out;
}

}  // namespace

ScoreVector fuse_scales(const std::vector<ScoreVector>& scores) {
  if (scores.empty()) throw DataError("cannot fuse an empty score list");
  return mean_of(scores);
}

ScoreVector fuse_planes(const std::array<ScoreVector, 3>& scores) {
  for (const ScoreVector& s : scores)
    if (s.empty()) throw DataError("missing per-plane score vector");
  return mean_of(scores);
}

int argmax_class(const ScoreVector& scores) {
  if (scores.empty()) throw DataError("empty score vector");
  int best = 0;
  for (int i = 1; i < static_cast<int>(scores.size()); ++i)
    if (scores[i] > scores[best]) best = i;
  return best;
}

ScoreVector predict_sample(const DepthSequence& seq, const PlaneModels& models,
                           const std::vector<int>& scales, const EvalConfig& cfg) {
  const auto maps = extract_hdmm(seq, std::nullopt, scales, cfg.pipeline);

  std::map<ViewPlane, std::vector<ScoreVector>> per_plane;
  for (const MotionMap& m : maps) {
    const PseudoRgbImage img = center_crop(encode(m, cfg.pipeline.canvas), cfg.crop);
    const auto features = featurize(img, cfg.feature_side);
    per_plane[m.plane].push_back(predict(models.at(m.plane), features));
  }
  std::array<ScoreVector, 3> fused;
  for (ViewPlane p : {ViewPlane::Front, ViewPlane::Side, ViewPlane::Top}) {
    auto it = per_plane.find(p);
    if (it == per_plane.end()) throw DataError("no usable scale produced a map for every plane");
    fused[static_cast<size_t>(p)] = fuse_scales(it->second);
  }
  return fuse_planes(fused);
}

EvalReport report_from_predictions(const std::vector<std::pair<int, int>>& true_predicted,
                                   int class_count) {
  if (class_count < 1) throw UsageError("class count must be positive");
  EvalReport report;
  report.confusion = ConfusionMatrix(class_count);
  for (const auto& [truth, pred] : true_predicted) {
    if (truth < 1 || truth > class_count || pred < 1 || pred > class_count)
      throw DataError("prediction pair outside [1, class_count]");
    ++report.confusion.at(truth, pred);
  }
  report.evaluated = static_cast<int64_t>(true_predicted.size());

  int64_t correct = 0;
  report.per_class_accuracy.assign(class_count, 0.0);
  for (int k = 1; k <= class_count; ++k) {
    int64_t row_total = 0;
    for (int j = 1; j <= class_count; ++j) row_total += report.confusion.at(k, j);
    correct += report.confusion.at(k, k);
    report.per_class_accuracy[k - 1] =
        row_total > 0 ? static_cast<double>(report.confusion.at(k, k)) / row_total : 0.0;
  }
  report.accuracy = report.evaluated > 0 ? static_cast<double>(correct) / report.evaluated : 0.0;
  return report;
}

EvalReport evaluate(const DatasetManifest& test_set, const PlaneModels& models,
                    const std::vector<int>& scales, const EvalConfig& cfg) {
  if (test_set.entries.empty()) throw DataError("empty test set");
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::string> failures;
  for (const ManifestEntry& e : test_set.entries) {
    try {
      const DepthSequence seq = read_sequence(e.path);
      const ScoreVector scores = predict_sample(seq, models, scales, cfg);
      pairs.emplace_back(e.label, argmax_class(scores) + 1);
    } catch (const std::exception& ex) {
      failures.push_back(format_sample_id(e.id) + ": " + ex.what());
    }
  }
  EvalReport report = report_from_predictions(pairs, test_set.class_count);
  report.failures = std::move(failures);
  return report;
}

}  // namespace hdmm
