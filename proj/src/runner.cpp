#include "hdmm/runner.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include "hdmm/errors.hpp"
#include "hdmm/fuse_eval.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace hdmm {

AngleGrid parse_angle_grid(const std::string& text) {
  AngleGrid g;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &g.start, &g.step, &g.stop) != 3)
    throw UsageError("angle grid must be start:step:stop, got '" + text + "'");
  g.values();  // validates
  return g;
}

std::vector<int> parse_scales(const std::string& text) {
  std::vector<int> scales;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    try {
      scales.push_back(std::stoi(text.substr(pos, next - pos)));
    } catch (const std::exception&) {
      throw UsageError("scale list must be comma-separated integers, got '" + text + "'");
    }
    if (scales.back() < 1) throw UsageError("temporal scales must be >= 1");
    pos = next + 1;
  }
  if (scales.empty()) throw UsageError("empty scale list");
  return scales;
}

namespace {

PipelineConfig pipeline_from_json(const json& j) {
  PipelineConfig cfg;
  if (j.contains("focal")) cfg.focal = j.at("focal").get<double>();
  if (j.contains("cx") && !j.at("cx").is_null()) cfg.cx = j.at("cx").get<double>();
  if (j.contains("cy") && !j.at("cy").is_null()) cfg.cy = j.at("cy").get<double>();
  if (j.contains("z_min")) cfg.z_min = j.at("z_min").get<double>();
  if (j.contains("z_max")) cfg.z_max = j.at("z_max").get<double>();
  if (j.contains("depth_bins")) cfg.depth_bins = j.at("depth_bins").get<uint32_t>();
  if (j.contains("bounds_expand")) cfg.bounds_expand = j.at("bounds_expand").get<double>();
  if (j.contains("pivot") && !j.at("pivot").is_null()) cfg.pivot_z = j.at("pivot").get<double>();
  if (j.contains("weighted")) cfg.weighted = j.at("weighted").get<bool>();
  if (j.contains("gamma")) cfg.weights.gamma = j.at("gamma").get<double>();
  if (j.contains("delta")) cfg.weights.delta = j.at("delta").get<double>();
  if (j.contains("canvas")) cfg.canvas = j.at("canvas").get<uint32_t>();
  return cfg;
}

json pipeline_to_json(const PipelineConfig& cfg) {
  json j;
  j["focal"] = cfg.focal;
  j["cx"] = cfg.cx ? json(*cfg.cx) : json(nullptr);
  j["cy"] = cfg.cy ? json(*cfg.cy) : json(nullptr);
  j["z_min"] = cfg.z_min;
  j["z_max"] = cfg.z_max;
  j["depth_bins"] = cfg.depth_bins;
  j["bounds_expand"] = cfg.bounds_expand;
  j["pivot"] = cfg.pivot_z ? json(*cfg.pivot_z) : json(nullptr);
  j["weighted"] = cfg.weighted;
  j["gamma"] = cfg.weights.gamma;
  j["delta"] = cfg.weights.delta;
  j["canvas"] = cfg.canvas;
  return j;
}

json merged_config(const json& j) {
  json cfg = json::object();
  if (j.contains("config_file") && !j.at("config_file").is_null()) {
    std::ifstream in(j.at("config_file").get<std::string>());
    if (!in) throw DataError("cannot open config file: " + j.at("config_file").get<std::string>());
    try {
      cfg = json::parse(in);
    } catch (const json::exception& e) {
      throw DataError(std::string("malformed config file: ") + e.what());
    }
  }
  if (j.contains("config") && j.at("config").is_object())
    for (auto& [k, v] : j.at("config").items()) cfg[k] = v;
  return cfg;
}

std::vector<int> scales_from_json(const json& j, const char* key) {
  if (!j.contains(key)) return {1};
  const json& v = j.at(key);
  if (v.is_string()) return parse_scales(v.get<std::string>());
  std::vector<int> scales = v.get<std::vector<int>>();
  if (scales.empty()) throw UsageError("empty scale list");
  for (int s : scales)
    if (s < 1) throw UsageError("temporal scales must be >= 1");
  return scales;
}

SplitRule split_from_json(const json& j) {
  SplitRule rule;
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s != "odd-train") throw UsageError("unknown split rule '" + s + "'");
    return rule;
  }
  rule.kind = SplitRule::Kind::ExplicitLists;
  rule.train_subjects = j.at("train").get<std::vector<int>>();
  rule.test_subjects = j.at("test").get<std::vector<int>>();
  return rule;
}

std::string require_string(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string())
    throw UsageError(std::string("missing required option '") + key + "'");
  return j.at(key).get<std::string>();
}

}  // namespace

ExtractOptions extract_options_from_json(const json& j) {
  ExtractOptions opt;
  opt.input = require_string(j, "input");
  opt.out = require_string(j, "out");
  opt.scales = scales_from_json(j, "scales");
  if (j.contains("rotate")) opt.rotate = j.at("rotate").get<bool>();
  if (j.contains("theta")) opt.theta = parse_angle_grid(j.at("theta").get<std::string>());
  if (j.contains("beta")) opt.beta = parse_angle_grid(j.at("beta").get<std::string>());
  if (j.contains("mapping") && !j.at("mapping").is_null())
    opt.mapping = j.at("mapping").get<std::string>();
  opt.pipeline = pipeline_from_json(merged_config(j));
  // flat weighted/gamma/delta keys mirror the CLI flags
  if (j.contains("weighted")) opt.pipeline.weighted = j.at("weighted").get<bool>();
  if (j.contains("gamma")) opt.pipeline.weights.gamma = j.at("gamma").get<double>();
  if (j.contains("delta")) opt.pipeline.weights.delta = j.at("delta").get<double>();
  if (j.contains("seed")) opt.seed = j.at("seed").get<uint64_t>();
  if (j.contains("augment") && j.at("augment").is_object()) {
    const json& a = j.at("augment");
    AugmentSpec spec;
    spec.crop = a.value("crop", 224u);
    spec.flip = a.value("flip", true);
    spec.jitter = a.value("jitter", 10);
    spec.seed = opt.seed;
    opt.augment = spec;
  }
  return opt;
}

ExtractSummary run_extract(const ExtractOptions& opt) {
  LabelMapping mapping;
  if (opt.mapping) mapping = read_label_mapping(*opt.mapping);
  const DatasetManifest manifest = build_manifest(opt.input, mapping);

  std::vector<std::pair<double, double>> grid{{0.0, 0.0}};
  if (opt.rotate) grid = rotation_grid({opt.theta, opt.beta});

  AugmentSpec spec;  // identity unless augmentation was requested
  if (opt.augment) {
    spec = *opt.augment;
  } else {
    spec.crop = opt.pipeline.canvas;
    spec.flip = false;
    spec.jitter = 0;
  }
  spec.seed = opt.seed;

  fs::create_directories(opt.out);
  EnumerateStats stats;
  enumerate_training_set(manifest, grid, opt.scales, spec, opt.pipeline,
                         [&](TrainingItem&& item) {
                           const std::string name = provenance_filename(*item.image.provenance);
                           write_png(item.image, (fs::path(opt.out) / name).string());
                         },
                         &stats);
  write_manifest(manifest, (fs::path(opt.out) / "manifest.tsv").string());

  json settings;
  settings["scales"] = opt.scales;
  settings["rotate"] = opt.rotate;
  settings["grid_size"] = grid.size();
  settings["pipeline"] = pipeline_to_json(opt.pipeline);
  settings["images_written"] = stats.produced;
  settings["failures"] = stats.failures;
  settings["diagnostics"] = stats.diagnostics;
  std::ofstream(fs::path(opt.out) / "settings.json") << settings.dump(2) << '\n';

  if (stats.produced == 0) throw DataError("extraction produced no images");
  return {stats.produced, stats.failures};
}

TrainOptions train_options_from_json(const json& j) {
  TrainOptions opt;
  opt.images = require_string(j, "images");
  opt.manifest = require_string(j, "manifest");
  opt.out = require_string(j, "out");
  if (j.contains("split")) opt.split = split_from_json(j.at("split"));
  if (j.contains("seed")) opt.train.seed = j.at("seed").get<uint64_t>();
  if (j.contains("learning_rate")) opt.train.learning_rate = j.at("learning_rate").get<double>();
  if (j.contains("momentum")) opt.train.momentum = j.at("momentum").get<double>();
  if (j.contains("weight_decay")) opt.train.weight_decay = j.at("weight_decay").get<double>();
  if (j.contains("batch_size")) opt.train.batch_size = j.at("batch_size").get<int>();
  if (j.contains("epochs")) opt.train.epochs = j.at("epochs").get<int>();
  if (j.contains("crop")) opt.crop = j.at("crop").get<uint32_t>();
  if (j.contains("feature_side")) opt.feature_side = j.at("feature_side").get<uint32_t>();
  if (j.contains("flip")) opt.flip = j.at("flip").get<bool>();
  if (j.contains("jitter")) opt.jitter = j.at("jitter").get<int>();
  return opt;
}

void run_train(const TrainOptions& opt) {
  const DatasetManifest manifest = read_manifest(opt.manifest);
  std::map<SampleId, int> labels;
  for (const auto& e : manifest.entries) labels[e.id] = e.label;

  // Deterministic image order regardless of directory listing order.
  std::vector<std::string> names;
  for (const auto& de : fs::directory_iterator(opt.images)) {
    if (!de.is_regular_file() || de.path().extension() != ".png") continue;
    names.push_back(de.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  if (names.empty()) throw DataError("no PNG images under " + opt.images);

  std::array<std::vector<Example>, 3> per_plane;
  size_t used = 0;
  for (const std::string& name : names) {
    const Provenance prov = parse_provenance(name);
    auto it = labels.find(prov.id);
    if (it == labels.end())
      throw DataError("image " + name + " has no manifest entry");
    if (!subject_in_train(opt.split, prov.id.subject)) continue;

    PseudoRgbImage img = read_png((fs::path(opt.images) / name).string());
    AugmentSpec spec;
    spec.crop = opt.crop;
    spec.flip = opt.flip;
    spec.jitter = opt.jitter;
    spec.seed = opt.train.seed ^ std::hash<std::string>{}(name);
    img = augment(img, spec);

    Example ex;
    ex.features = featurize(img, opt.feature_side);
    ex.label = it->second - 1;
    per_plane[static_cast<size_t>(prov.plane)].push_back(std::move(ex));
    ++used;
  }
  if (used == 0) throw DataError("no training images on the training side of the split");

  fs::create_directories(opt.out);
  const char* names3[3] = {"model_f.bin", "model_s.bin", "model_t.bin"};
  json meta;
  for (size_t p = 0; p < 3; ++p) {
    if (per_plane[p].empty())
      throw DataError(std::string("no training images for plane ") +
                      plane_tag(static_cast<ViewPlane>(p)));
    const ClassifierModel model = train(per_plane[p], manifest.class_count, opt.train);
    save_model(model, (fs::path(opt.out) / names3[p]).string());
    meta["final_loss"][std::string(1, plane_tag(static_cast<ViewPlane>(p)))] = model.final_loss;
  }
  meta["class_count"] = manifest.class_count;
  meta["feature_side"] = opt.feature_side;
  meta["crop"] = opt.crop;
  meta["training_images"] = used;
  std::ofstream(fs::path(opt.out) / "meta.json") << meta.dump(2) << '\n';
}

EvalOptions eval_options_from_json(const json& j) {
  EvalOptions opt;
  opt.input = require_string(j, "input");
  opt.models = require_string(j, "models");
  opt.scales = scales_from_json(j, "scales");
  if (j.contains("report") && !j.at("report").is_null())
    opt.report_path = j.at("report").get<std::string>();
  if (j.contains("split") && !j.at("split").is_null()) opt.split = split_from_json(j.at("split"));
  if (j.contains("mapping") && !j.at("mapping").is_null())
    opt.mapping = j.at("mapping").get<std::string>();
  opt.pipeline = pipeline_from_json(merged_config(j));
  if (j.contains("weighted")) opt.pipeline.weighted = j.at("weighted").get<bool>();
  if (j.contains("gamma")) opt.pipeline.weights.gamma = j.at("gamma").get<double>();
  if (j.contains("delta")) opt.pipeline.weights.delta = j.at("delta").get<double>();
  return opt;
}

json run_eval(const EvalOptions& opt) {
  LabelMapping mapping;
  if (opt.mapping) mapping = read_label_mapping(*opt.mapping);
  DatasetManifest manifest = build_manifest(opt.input, mapping);
  if (opt.split) {
    SplitResult sr = split(manifest, *opt.split);
    if (sr.test.entries.empty()) throw DataError("test side of split is empty");
    manifest = std::move(sr.test);
  }

  std::ifstream meta_in(fs::path(opt.models) / "meta.json");
  if (!meta_in) throw DataError("cannot open model metadata: " + opt.models + "/meta.json");
  const json meta = json::parse(meta_in);

  PlaneModels models;
  models.front = load_model((fs::path(opt.models) / "model_f.bin").string());
  models.side = load_model((fs::path(opt.models) / "model_s.bin").string());
  models.top = load_model((fs::path(opt.models) / "model_t.bin").string());
  if (models.front.class_count != manifest.class_count)
    throw DataError("model class count does not match the dataset");

  EvalConfig cfg;
  cfg.pipeline = opt.pipeline;
  cfg.crop = meta.value("crop", 224u);
  cfg.feature_side = meta.value("feature_side", 32u);

  const EvalReport report = evaluate(manifest, models, opt.scales, cfg);

  json j;
  j["accuracy"] = report.accuracy;
  j["evaluated"] = report.evaluated;
  j["class_count"] = manifest.class_count;
  j["per_class_accuracy"] = report.per_class_accuracy;
  json rows = json::array();
  for (int t = 1; t <= manifest.class_count; ++t) {
    json row = json::array();
    for (int p = 1; p <= manifest.class_count; ++p) row.push_back(report.confusion.at(t, p));
    rows.push_back(row);
  }
  j["confusion"] = rows;
  j["failures"] = report.failures;
  j["settings"]["scales"] = opt.scales;
  j["settings"]["crop"] = cfg.crop;
  j["settings"]["feature_side"] = cfg.feature_side;
  j["settings"]["pipeline"] = pipeline_to_json(opt.pipeline);

  if (opt.report_path) {
    std::ofstream out(*opt.report_path, std::ios::trunc);
    if (!out) throw DataError("cannot open report path for writing: " + *opt.report_path);
    out << j.dump(2) << '\n';
  }
  return j;
}

json run_info(const std::string& path) {
  json j;
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw DataError("no such file: " + path);

  // Try the model container first, then the depth layout.
  try {
    const ClassifierModel m = load_model(path);
    j["type"] = "model";
    j["class_count"] = m.class_count;
    j["feature_dim"] = m.dim;
    j["version"] = 1;
    return j;
  } catch (const DataError&) {
  }
  const DepthSequence seq = read_sequence(path);
  j["type"] = "depth";
  j["frames"] = seq.frame_count();
  j["width"] = seq.width;
  j["height"] = seq.height;
  try {
    const SampleId id = parse_sample_id(fs::path(path).filename().string());
    j["action"] = id.action;
    j["subject"] = id.subject;
    j["example"] = id.example;
  } catch (const DataError&) {
    // not convention-named; header info only
  }
  return j;
}

}  // namespace hdmm
