#ifndef HDMM_RUNNER_HPP
#define HDMM_RUNNER_HPP

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hdmm/classify.hpp"
#include "hdmm/depth_io.hpp"
#include "hdmm/geometry.hpp"
#include "hdmm/pipeline.hpp"

namespace hdmm {

// Whole-subcommand runners: the surface behind the C API and the CLI.

struct ExtractOptions {
  std::string input;  // directory of convention-named .bin files
  std::string out;    // output directory for PNGs + manifest.tsv
  std::vector<int> scales{1};
  bool rotate = false;
  AngleGrid theta{-30, 15, 30};
  AngleGrid beta{-5, 5, 5};
  std::optional<std::string> mapping;  // label-mapping file
  PipelineConfig pipeline;
  std::optional<AugmentSpec> augment;  // default: no augmentation at extract time
  uint64_t seed = 0;
};

struct TrainOptions {
  std::string images;    // directory of provenance-named PNGs
  std::string manifest;  // manifest.tsv (labels per sample)
  std::string out;       // model directory
  SplitRule split;
  TrainConfig train;
  uint32_t crop = 224;
  uint32_t feature_side = 32;
  bool flip = true;
  int jitter = 10;
};

struct EvalOptions {
  std::string input;   // directory of .bin files
  std::string models;  // model directory from run_train
  std::vector<int> scales{1};
  std::optional<std::string> report_path;
  std::optional<SplitRule> split;  // when set, evaluate the test side only
  std::optional<std::string> mapping;
  PipelineConfig pipeline;
};

struct ExtractSummary {
  size_t images_written = 0;
  std::vector<std::string> failures;
};

ExtractSummary run_extract(const ExtractOptions& opt);
void run_train(const TrainOptions& opt);
nlohmann::json run_eval(const EvalOptions& opt);
nlohmann::json run_info(const std::string& path);

// JSON codecs for the options structs (the C API wire format).
ExtractOptions extract_options_from_json(const nlohmann::json& j);
TrainOptions train_options_from_json(const nlohmann::json& j);
EvalOptions eval_options_from_json(const nlohmann::json& j);

AngleGrid parse_angle_grid(const std::string& text);  // "start:step:stop"
std::vector<int> parse_scales(const std::string& text);  // "1,5,21"

}  // namespace hdmm

#endif
