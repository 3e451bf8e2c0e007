#include "hdmm/classify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include "hdmm/errors.hpp"

namespace hdmm {

std::vector<float> featurize(const PseudoRgbImage& img, uint32_t side) {
  if (side == 0) throw UsageError("feature side must be positive");
  if (img.width == 0 || img.height == 0) throw DataError("cannot featurize an empty image");
  std::vector<float> out(static_cast<size_t>(side) * side * 3);
  const double sx = static_cast<double>(img.width) / side;
  const double sy = static_cast<double>(img.height) / side;
  for (uint32_t r = 0; r < side; ++r) {
    const double ys = r * sy, ye = (r + 1) * sy;
    for (uint32_t c = 0; c < side; ++c) {
      const double xs = c * sx, xe = (c + 1) * sx;
      double acc[3] = {0, 0, 0};
      double area = 0;
      for (uint32_t y = static_cast<uint32_t>(ys); y < img.height && y < ye; ++y) {
        const double wy = std::min<double>(y + 1, ye) - std::max<double>(y, ys);
        for (uint32_t x = static_cast<uint32_t>(xs); x < img.width && x < xe; ++x) {
          const double w = wy * (std::min<double>(x + 1, xe) - std::max<double>(x, xs));
          const size_t i = (static_cast<size_t>(y) * img.width + x) * 3;
          acc[0] += w * img.rgb[i];
          acc[1] += w * img.rgb[i + 1];
          acc[2] += w * img.rgb[i + 2];
          area += w;
        }
      }
      for (int ch = 0; ch < 3; ++ch)
        out[static_cast<size_t>(ch) * side * side + static_cast<size_t>(r) * side + c] =
            static_cast<float>(acc[ch] / (area * 255.0));
    }
  }
  return out;
}

namespace {

void softmax_logits(const ClassifierModel& m, std::span<const float> x, std::vector<double>& p) {
  p.assign(m.class_count, 0.0);
  for (int k = 0; k < m.class_count; ++k) {
    const double* w = &m.weights[static_cast<size_t>(k) * m.dim];
    double acc = m.bias[k];
    for (int j = 0; j < m.dim; ++j) acc += w[j] * x[j];
    p[k] = acc;
  }
  const double mx = *std::max_element(p.begin(), p.end());
  double sum = 0;
  for (double& v : p) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : p) v /= sum;
}

}  // namespace

ScoreVector predict(const ClassifierModel& model, std::span<const float> features) {
  if (static_cast<int>(features.size()) != model.dim)
    throw DataError("feature dimension does not match model");
  std::vector<double> p;
  softmax_logits(model, features, p);
  return p;
}

double batch_loss(const ClassifierModel& model, std::span<const Example> batch, double weight_decay) {
  double loss = 0;
  std::vector<double> p;
  for (const Example& ex : batch) {
    softmax_logits(model, ex.features, p);
    loss -= std::log(std::max(p[ex.label], 1e-300));
  }
  loss /= static_cast<double>(batch.size());
  double reg = 0;
  for (double w : model.weights) reg += w * w;
  return loss + 0.5 * weight_decay * reg;
}

void batch_gradient(const ClassifierModel& model, std::span<const Example> batch, double weight_decay,
                    std::vector<double>& gw, std::vector<double>& gb) {
  gw.assign(model.weights.size(), 0.0);
  gb.assign(model.bias.size(), 0.0);
  std::vector<double> p;
  for (const Example& ex : batch) {
    softmax_logits(model, ex.features, p);
    for (int k = 0; k < model.class_count; ++k) {
      const double g = p[k] - (k == ex.label ? 1.0 : 0.0);
      gb[k] += g;
      double* row = &gw[static_cast<size_t>(k) * model.dim];
      for (int j = 0; j < model.dim; ++j) row[j] += g * ex.features[j];
    }
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (double& g : gb) g *= inv;
  for (size_t i = 0; i < gw.size(); ++i) gw[i] = gw[i] * inv + weight_decay * model.weights[i];
}

ClassifierModel train(const std::vector<Example>& examples, int class_count, const TrainConfig& cfg) {
  if (class_count < 2) throw UsageError("need at least two classes");
  if (examples.empty()) throw DataError("empty training stream");
  if (cfg.learning_rate <= 0 || cfg.momentum < 0 || cfg.weight_decay < 0 || cfg.batch_size < 1 ||
      cfg.epochs < 0)
    throw UsageError("invalid training configuration");

  const int dim = static_cast<int>(examples.front().features.size());
  std::set<int> seen;
  for (const Example& ex : examples) {
    if (static_cast<int>(ex.features.size()) != dim)
      throw DataError("training examples disagree in feature dimension");
    if (ex.label < 0 || ex.label >= class_count)
      throw DataError("training label out of range: " + std::to_string(ex.label));
    seen.insert(ex.label);
  }
  for (int k = 0; k < class_count; ++k)
    if (!seen.count(k))
      throw DataError("no training example for class " + std::to_string(k + 1));

  ClassifierModel model;
  model.class_count = class_count;
  model.dim = dim;
  model.weights.assign(static_cast<size_t>(class_count) * dim, 0.0);  // convex objective, zero init
  model.bias.assign(class_count, 0.0);

  std::vector<double> vel_w(model.weights.size(), 0.0), vel_b(model.bias.size(), 0.0);
  std::vector<double> gw, gb;
  std::vector<size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(cfg.seed);

  double lr = cfg.learning_rate;
  std::vector<Example> batch;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (epoch > 0 && cfg.lr_decay_every > 0 && epoch % cfg.lr_decay_every == 0)
      lr *= cfg.lr_decay_factor;
    std::shuffle(order.begin(), order.end(), rng);

    double epoch_loss = 0;
    int batches = 0;
    for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const size_t end = std::min(order.size(), start + cfg.batch_size);
      batch.clear();
      for (size_t i = start; i < end; ++i) batch.push_back(examples[order[i]]);

      epoch_loss += batch_loss(model, batch, cfg.weight_decay);
      ++batches;
      batch_gradient(model, batch, cfg.weight_decay, gw, gb);
      for (size_t i = 0; i < model.weights.size(); ++i) {
        vel_w[i] = cfg.momentum * vel_w[i] - lr * gw[i];
        model.weights[i] += vel_w[i];
      }
      for (size_t i = 0; i < model.bias.size(); ++i) {
        vel_b[i] = cfg.momentum * vel_b[i] - lr * gb[i];
        model.bias[i] += vel_b[i];
      }
    }
    epoch_loss /= std::max(batches, 1);
    if (!std::isfinite(epoch_loss))
      throw NumericError("training diverged (non-finite loss) at epoch " + std::to_string(epoch + 1));
    model.final_loss = epoch_loss;
  }
  return model;
}

namespace {

constexpr char kMagic[8] = {'H', 'D', 'M', 'M', 'C', 'L', 'S', '1'};

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
  const uint64_t bits = std::bit_cast<uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

uint32_t get_u32(const unsigned char* p) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(p[i]) << (8 * i);
  return v;
}

double get_f64(const unsigned char* p) {
  uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

void save_model(const ClassifierModel& model, const std::string& path) {
  std::string bytes;
  bytes.append(kMagic, sizeof(kMagic));
  put_u32(bytes, 1);  // version
  put_u32(bytes, static_cast<uint32_t>(model.class_count));
  put_u32(bytes, static_cast<uint32_t>(model.dim));
  for (double w : model.weights) put_f64(bytes, w);
  for (double b : model.bias) put_f64(bytes, b);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open model path for writing: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("model write failed: " + path);
}

ClassifierModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 20 || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw DataError("not a classifier model file: " + path);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const uint32_t version = get_u32(p + 8);
  if (version != 1) throw DataError("unsupported model version " + std::to_string(version));
  ClassifierModel model;
  model.class_count = static_cast<int>(get_u32(p + 12));
  model.dim = static_cast<int>(get_u32(p + 16));
  const size_t n_w = static_cast<size_t>(model.class_count) * model.dim;
  const size_t expect = 20 + (n_w + model.class_count) * 8;
  if (bytes.size() != expect) throw DataError("model file size mismatch: " + path);
  const unsigned char* cur = p + 20;
  model.weights.resize(n_w);
  for (double& w : model.weights) {
    w = get_f64(cur);
    cur += 8;
  }
  model.bias.resize(model.class_count);
  for (double& b : model.bias) {
    b = get_f64(cur);
    cur += 8;
  }
  return model;
}

}  // namespace hdmm
