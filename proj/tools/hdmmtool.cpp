// Command-line front end over the shared-library C API.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hdmm/hdmm_c.h"

using nlohmann::json;

namespace {

int report_failure(int code) {
  std::fprintf(stderr, "error: %s\n", hdmm_last_error());
  return code;
}

json split_json(const std::string& split, const std::vector<int>& train,
                const std::vector<int>& test) {
  if (!train.empty() || !test.empty()) return json{{"train", train}, {"test", test}};
  return json(split);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Depth motion map action recognition toolkit"};
  app.require_subcommand(1);

  // extract
  auto* extract = app.add_subcommand("extract", "Encode motion-map images from depth sequences");
  std::string ex_input, ex_out, ex_scales = "1", ex_theta = "-30:15:30", ex_beta = "-5:5:5";
  std::string ex_config;
  bool ex_rotate = false, ex_weighted = true, ex_augment = false;
  double ex_gamma = 0.99, ex_delta = 1.0;
  uint64_t ex_seed = 0;
  std::string ex_mapping;
  extract->add_option("--input", ex_input, "Directory of aXXX_sXXX_eXXX_depth.bin files")->required();
  extract->add_option("--out", ex_out, "Output directory for PNG images")->required();
  extract->add_option("--scales", ex_scales, "Comma-separated temporal scales (default 1)");
  extract->add_flag("--rotate,!--no-rotate", ex_rotate, "Extract over the full rotation grid");
  extract->add_option("--theta", ex_theta, "Theta grid, start:step:stop degrees");
  extract->add_option("--beta", ex_beta, "Beta grid, start:step:stop degrees");
  extract->add_flag("--weighted,!--unweighted", ex_weighted, "Weighted accumulation (default on)");
  extract->add_option("--gamma", ex_gamma, "Weighted accumulation gamma");
  extract->add_option("--delta", ex_delta, "Weighted accumulation delta");
  extract->add_option("--mapping", ex_mapping, "Label-mapping file for combined datasets");
  extract->add_option("--config", ex_config, "JSON config file (intrinsics, depth band, grids)");
  extract->add_flag("--augment", ex_augment, "Apply random crop/flip/jitter to extracted images");
  extract->add_option("--seed", ex_seed, "Augmentation seed");

  // train
  auto* train = app.add_subcommand("train", "Train the per-plane reference classifiers");
  std::string tr_images, tr_manifest, tr_out, tr_split = "odd-train";
  std::vector<int> tr_train_subj, tr_test_subj;
  uint64_t tr_seed = 0;
  int tr_epochs = -1, tr_batch = -1;
  double tr_lr = -1;
  train->add_option("--images", tr_images, "Directory of extracted PNG images")->required();
  train->add_option("--manifest", tr_manifest, "Dataset manifest (manifest.tsv)")->required();
  train->add_option("--out", tr_out, "Output model directory")->required();
  train->add_option("--split", tr_split, "Split rule (odd-train)");
  train->add_option("--train-subjects", tr_train_subj, "Explicit training subject ids");
  train->add_option("--test-subjects", tr_test_subj, "Explicit test subject ids");
  train->add_option("--seed", tr_seed, "Training seed");
  train->add_option("--epochs", tr_epochs, "Training epochs (default 100)");
  train->add_option("--batch-size", tr_batch, "Mini-batch size (default 256)");
  train->add_option("--learning-rate", tr_lr, "Initial learning rate (default 1e-2)");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate trained models on depth sequences");
  std::string ev_input, ev_models, ev_scales = "1", ev_report, ev_split, ev_mapping, ev_config;
  std::vector<int> ev_train_subj, ev_test_subj;
  eval->add_option("--input", ev_input, "Directory of .bin files to evaluate")->required();
  eval->add_option("--models", ev_models, "Model directory from `train`")->required();
  eval->add_option("--scales", ev_scales, "Comma-separated temporal scales");
  eval->add_option("--report", ev_report, "Write the JSON report to this path");
  eval->add_option("--split", ev_split, "Evaluate only the test side of this split (odd-train)");
  eval->add_option("--train-subjects", ev_train_subj, "Explicit training subject ids");
  eval->add_option("--test-subjects", ev_test_subj, "Explicit test subject ids");
  eval->add_option("--mapping", ev_mapping, "Label-mapping file");
  eval->add_option("--config", ev_config, "JSON config file");

  // info
  auto* info = app.add_subcommand("info", "Dump the header of a depth or model file");
  std::string in_path;
  info->add_option("file", in_path, "Depth .bin or model file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : HDMM_E_USAGE;
  }

  if (extract->parsed()) {
    json opt{{"input", ex_input},   {"out", ex_out},     {"scales", ex_scales},
             {"rotate", ex_rotate}, {"theta", ex_theta}, {"beta", ex_beta},
             {"weighted", ex_weighted}, {"gamma", ex_gamma}, {"delta", ex_delta},
             {"seed", ex_seed}};
    if (!ex_mapping.empty()) opt["mapping"] = ex_mapping;
    if (!ex_config.empty()) opt["config_file"] = ex_config;
    if (ex_augment) opt["augment"] = json::object();
    const int rc = hdmm_extract_run(opt.dump().c_str());
    if (rc != HDMM_OK) return report_failure(rc);
    std::printf("extracted images written to %s\n", ex_out.c_str());
    return 0;
  }

  if (train->parsed()) {
    json opt{{"images", tr_images}, {"manifest", tr_manifest}, {"out", tr_out}, {"seed", tr_seed}};
    opt["split"] = split_json(tr_split, tr_train_subj, tr_test_subj);
    if (tr_epochs >= 0) opt["epochs"] = tr_epochs;
    if (tr_batch > 0) opt["batch_size"] = tr_batch;
    if (tr_lr > 0) opt["learning_rate"] = tr_lr;
    const int rc = hdmm_train_run(opt.dump().c_str());
    if (rc != HDMM_OK) return report_failure(rc);
    std::printf("models written to %s\n", tr_out.c_str());
    return 0;
  }

  if (eval->parsed()) {
    json opt{{"input", ev_input}, {"models", ev_models}, {"scales", ev_scales}};
    if (!ev_report.empty()) opt["report"] = ev_report;
    if (!ev_split.empty() || !ev_train_subj.empty())
      opt["split"] = split_json(ev_split.empty() ? "odd-train" : ev_split, ev_train_subj, ev_test_subj);
    if (!ev_mapping.empty()) opt["mapping"] = ev_mapping;
    if (!ev_config.empty()) opt["config_file"] = ev_config;
    char* report = nullptr;
    const int rc = hdmm_eval_run(opt.dump().c_str(), &report);
    if (rc != HDMM_OK) return report_failure(rc);
    std::printf("%s\n", report);
    hdmm_string_free(report);
    return 0;
  }

  char* out = nullptr;
  const int rc = hdmm_info_run(in_path.c_str(), &out);
  if (rc != HDMM_OK) return report_failure(rc);
  std::printf("%s\n", out);
  hdmm_string_free(out);
  return 0;
}
