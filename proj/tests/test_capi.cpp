#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "hdmm/depth_io.hpp"
#include "hdmm/hdmm_c.h"
#include "support/test_util.hpp"

using nlohmann::json;

TEST_CASE("sequence handles round trip through the C boundary") {
  testutil::TempDir tmp("capi_seq");
  std::mt19937_64 rng(61);
  const hdmm::DepthSequence seq = testutil::make_blob_sequence(testutil::Motion::Expand, rng, 16, 12, 5);
  const std::string path = (tmp.path() / "a001_s001_e001_depth.bin").string();
  hdmm::write_sequence(seq, path);

  hdmm_sequence* handle = nullptr;
  REQUIRE(hdmm_sequence_read(path.c_str(), &handle) == HDMM_OK);
  REQUIRE(handle != nullptr);

  uint32_t frames = 0, w = 0, h = 0;
  CHECK(hdmm_sequence_dims(handle, &frames, &w, &h) == HDMM_OK);
  CHECK(frames == 5);
  CHECK(w == 16);
  CHECK(h == 12);

  std::vector<uint32_t> buf(static_cast<size_t>(w) * h);
  CHECK(hdmm_sequence_frame(handle, 2, buf.data()) == HDMM_OK);
  CHECK(buf == seq.frames[2].values);
  CHECK(hdmm_sequence_frame(handle, 5, buf.data()) == HDMM_E_USAGE);

  const std::string copy = (tmp.path() / "copy.bin").string();
  CHECK(hdmm_sequence_write(handle, copy.c_str()) == HDMM_OK);
  const hdmm::DepthSequence back = hdmm::read_sequence(copy);
  CHECK(back.frames[4].values == seq.frames[4].values);
  hdmm_sequence_free(handle);
}

TEST_CASE("error codes and messages cross the boundary") {
  hdmm_sequence* handle = nullptr;
  CHECK(hdmm_sequence_read("/nonexistent/nothing.bin", &handle) == HDMM_E_DATA);
  CHECK(std::strlen(hdmm_last_error()) > 0);

  CHECK(hdmm_sequence_read(nullptr, &handle) == HDMM_E_USAGE);
  CHECK(hdmm_sequence_dims(nullptr, nullptr, nullptr, nullptr) == HDMM_E_USAGE);

  CHECK(hdmm_extract_run("this is not json") == HDMM_E_USAGE);
  CHECK(hdmm_extract_run(nullptr) == HDMM_E_USAGE);
  CHECK(hdmm_extract_run("{}") == HDMM_E_USAGE);  // missing input/out
  CHECK(std::string(hdmm_last_error()).find("input") != std::string::npos);

  testutil::TempDir tmp("capi_err");
  const json empty_opts = {{"input", (tmp.path() / "none").string()},
                           {"out", (tmp.path() / "out").string()}};
  CHECK(hdmm_extract_run(empty_opts.dump().c_str()) == HDMM_E_DATA);
}

TEST_CASE("info runner describes files") {
  testutil::TempDir tmp("capi_info");
  std::mt19937_64 rng(62);
  const hdmm::DepthSequence seq = testutil::make_blob_sequence(testutil::Motion::TranslateUp, rng);
  const std::string path = (tmp.path() / "a002_s003_e001_depth.bin").string();
  hdmm::write_sequence(seq, path);

  char* out = nullptr;
  REQUIRE(hdmm_info_run(path.c_str(), &out) == HDMM_OK);
  const json j = json::parse(out);
  hdmm_string_free(out);
  CHECK(j["type"] == "depth");
  CHECK(j["frames"] == 16);
  CHECK(j["action"] == 2);
  CHECK(j["subject"] == 3);

  CHECK(hdmm_info_run((tmp.path() / "missing.bin").string().c_str(), &out) == HDMM_E_DATA);
}

TEST_CASE("extract, train and eval runners compose") {
  testutil::TempDir tmp("capi_e2e");
  const auto data = tmp.path() / "data";
  const auto images = tmp.path() / "images";
  const auto models = tmp.path() / "models";
  std::filesystem::create_directories(data);
  testutil::write_synthetic_dataset(data, 2, 71);

  const json extract_opts = {{"input", data.string()},
                             {"out", images.string()},
                             {"scales", "1"},
                             {"config", {{"focal", 30.0}, {"canvas", 64}}}};
  REQUIRE(hdmm_extract_run(extract_opts.dump().c_str()) == HDMM_OK);
  CHECK(std::filesystem::exists(images / "manifest.tsv"));
  CHECK(std::filesystem::exists(images / "settings.json"));
  size_t pngs = 0;
  for (const auto& de : std::filesystem::directory_iterator(images))
    pngs += de.path().extension() == ".png";
  CHECK(pngs == 6 * 3);  // 6 samples x 1 angle x 1 scale x 3 planes

  const json train_opts = {{"images", images.string()},
                           {"manifest", (images / "manifest.tsv").string()},
                           {"out", models.string()},
                           {"epochs", 30},
                           {"crop", 48},
                           {"feature_side", 8},
                           {"flip", false},
                           {"jitter", 0},
                           {"split", "odd-train"}};
  REQUIRE(hdmm_train_run(train_opts.dump().c_str()) == HDMM_OK);
  CHECK(std::filesystem::exists(models / "model_f.bin"));
  CHECK(std::filesystem::exists(models / "model_s.bin"));
  CHECK(std::filesystem::exists(models / "model_t.bin"));
  CHECK(std::filesystem::exists(models / "meta.json"));

  const json eval_opts = {{"input", data.string()},
                          {"models", models.string()},
                          {"scales", "1"},
                          {"config", {{"focal", 30.0}, {"canvas", 64}}}};
  char* report_text = nullptr;
  REQUIRE(hdmm_eval_run(eval_opts.dump().c_str(), &report_text) == HDMM_OK);
  REQUIRE(report_text != nullptr);
  const json report = json::parse(report_text);
  hdmm_string_free(report_text);
  CHECK(report["evaluated"] == 6);
  CHECK(report["class_count"] == 3);
  CHECK(report["confusion"].size() == 3);
  CHECK(report["accuracy"].get<double>() >= 0.0);
  CHECK(report["accuracy"].get<double>() <= 1.0);

  // mismatched models vs dataset class count is a data error
  const json bad_eval = {{"input", data.string()}, {"models", (tmp.path() / "nope").string()}};
  CHECK(hdmm_eval_run(bad_eval.dump().c_str(), nullptr) == HDMM_E_DATA);
}
