// Shared helpers for the test suites: temp directories and synthetic
// depth-blob sequences for end-to-end runs.
#ifndef HDMM_TESTS_SUPPORT_TEST_UTIL_HPP
#define HDMM_TESTS_SUPPORT_TEST_UTIL_HPP

#include <filesystem>
#include <random>
#include <string>

#include "hdmm/depth_io.hpp"

namespace testutil {

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("hdmm_" + tag + "_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

enum class Motion { TranslateUp, TranslateRight, Expand };

// Square depth blob on a zero background, moving or growing over the frames.
inline hdmm::DepthSequence make_blob_sequence(Motion motion, std::mt19937_64& rng, uint32_t width = 32,
                                              uint32_t height = 32, uint32_t frames = 16) {
  std::uniform_int_distribution<int> jitter(-2, 2);
  std::uniform_int_distribution<int> depth_dist(900, 1100);
  std::uniform_int_distribution<int> size_dist(5, 7);

  const int depth = depth_dist(rng);
  int half = size_dist(rng);
  int cx = static_cast<int>(width) / 2 + jitter(rng);
  int cy = static_cast<int>(height) / 2 + jitter(rng);
  if (motion == Motion::TranslateUp) cy = static_cast<int>(height) - half - 2;
  if (motion == Motion::TranslateRight) cx = half + 2;

  hdmm::DepthSequence seq;
  seq.width = width;
  seq.height = height;
  for (uint32_t t = 0; t < frames; ++t) {
    hdmm::Frame f{width, height, std::vector<uint32_t>(static_cast<size_t>(width) * height, 0)};
    for (int r = cy - half; r <= cy + half; ++r)
      for (int c = cx - half; c <= cx + half; ++c)
        if (r >= 0 && c >= 0 && r < static_cast<int>(height) && c < static_cast<int>(width))
          f.at(static_cast<uint32_t>(c), static_cast<uint32_t>(r)) = static_cast<uint32_t>(depth);
    seq.frames.push_back(std::move(f));

    switch (motion) {
      case Motion::TranslateUp: cy -= 1; break;
      case Motion::TranslateRight: cx += 1; break;
      case Motion::Expand:
        if (t % 2 == 1) half += 1;
        break;
    }
  }
  return seq;
}

// 3 motion classes x `per_class` sequences, subjects 1..per_class, written as
// convention-named files under dir.
inline void write_synthetic_dataset(const std::filesystem::path& dir, int per_class, uint64_t seed,
                                    uint32_t width = 32, uint32_t height = 32, uint32_t frames = 16) {
  std::mt19937_64 rng(seed);
  const Motion motions[3] = {Motion::TranslateUp, Motion::TranslateRight, Motion::Expand};
  for (int k = 0; k < 3; ++k) {
    for (int s = 1; s <= per_class; ++s) {
      const hdmm::DepthSequence seq = make_blob_sequence(motions[k], rng, width, height, frames);
      const hdmm::SampleId id{k + 1, s, 1};
      hdmm::write_sequence(seq, (dir / hdmm::format_sample_id(id)).string());
    }
  }
}

}  // namespace testutil

#endif
