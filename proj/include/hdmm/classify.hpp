#ifndef HDMM_CLASSIFY_HPP
#define HDMM_CLASSIFY_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hdmm/encode.hpp"

namespace hdmm {

/// Per-class posterior vector; non-negative, sums to 1.
using ScoreVector = std::vector<double>;

struct TrainConfig {
  double learning_rate = 1e-2;
  double momentum = 0.9;
  double weight_decay = 5e-4;
  int batch_size = 256;
  int epochs = 100;
  int lr_decay_every = 20;       // epochs
  double lr_decay_factor = 0.1;
  uint64_t seed = 0;
};

struct Example {
  std::vector<float> features;
  int label = 0;  // 0-based class index
};

/// Multinomial softmax regression; the desk-scale stand-in for a ConvNet.
struct ClassifierModel {
  int class_count = 0;
  int dim = 0;
  std::vector<double> weights;  // class_count x dim, row-major
  std::vector<double> bias;     // class_count
  double final_loss = 0;
};

/// Area-average downsample to side x side, channels concatenated planar
/// (R plane, then G, then B), scaled to [0, 1]. Dimension = 3 * side^2.
std::vector<float> featurize(const PseudoRgbImage& img, uint32_t side = 32);

ClassifierModel train(const std::vector<Example>& examples, int class_count, const TrainConfig& cfg);

ScoreVector predict(const ClassifierModel& model, std::span<const float> features);

/// Regularized cross-entropy over a batch: mean CE + 0.5 * wd * ||W||^2.
double batch_loss(const ClassifierModel& model, std::span<const Example> batch, double weight_decay);

/// Analytic gradient of batch_loss; gw is class_count x dim, gb class_count.
void batch_gradient(const ClassifierModel& model, std::span<const Example> batch, double weight_decay,
                    std::vector<double>& gw, std::vector<double>& gb);

// Versioned little-endian binary blob; byte-exact round trip.
void save_model(const ClassifierModel& model, const std::string& path);
ClassifierModel load_model(const std::string& path);

}  // namespace hdmm

#endif
