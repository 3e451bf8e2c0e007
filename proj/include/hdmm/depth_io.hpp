#ifndef HDMM_DEPTH_IO_HPP
#define HDMM_DEPTH_IO_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hdmm {

/// One depth frame: row-major grid of millimeter values, 0 = no return.
struct Frame {
  uint32_t width = 0;
  uint32_t height = 0;
  std::vector<uint32_t> values;

  uint32_t at(uint32_t col, uint32_t row) const { return values[static_cast<size_t>(row) * width + col]; }
  uint32_t& at(uint32_t col, uint32_t row) { return values[static_cast<size_t>(row) * width + col]; }
};

struct DepthSequence {
  uint32_t width = 0;
  uint32_t height = 0;
  std::vector<Frame> frames;

  uint32_t frame_count() const { return static_cast<uint32_t>(frames.size()); }
};

/// Identity of one recorded sample, encoded in the filename convention
/// aXXX_sXXX_eXXX_depth.bin (three zero-padded digits per segment).
struct SampleId {
  int action = 0;
  int subject = 0;
  int example = 0;

  auto operator<=>(const SampleId&) const = default;
};

struct SplitRule {
  enum class Kind { OddSubjectsTrain, ExplicitLists };
  Kind kind = Kind::OddSubjectsTrain;
  std::vector<int> train_subjects;  // ExplicitLists only
  std::vector<int> test_subjects;
};

struct ManifestEntry {
  SampleId id;
  std::string path;
  int label = 0;  // remapped, contiguous in [1, class_count]
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;  // sorted by (action, subject, example)
  int class_count = 0;
  SplitRule split_rule;
};

/// Combined-dataset relabeling: (source_tag, original action) -> new label.
struct LabelMapping {
  std::map<std::pair<std::string, int>, int> map;
  bool identity() const { return map.empty(); }
};

// Binary depth file layout: little-endian header {N, width, height} as three
// 32-bit unsigned words, then N frames of width*height 32-bit depth words,
// row-major.
DepthSequence read_sequence(const std::string& path);
void write_sequence(const DepthSequence& seq, const std::string& path);

void validate(const DepthSequence& seq);

SampleId parse_sample_id(const std::string& filename);
std::string format_sample_id(const SampleId& id);

LabelMapping read_label_mapping(const std::string& path);

/// Scan `root` recursively for convention-named files and assemble a sorted
/// manifest. The source tag of a file is the top-level subdirectory under
/// root that contains it ("." for files directly in root); tags only matter
/// when a non-identity mapping is supplied.
DatasetManifest build_manifest(const std::string& root, const LabelMapping& mapping = {});

struct SplitResult {
  DatasetManifest train;
  DatasetManifest test;
  std::vector<std::string> diagnostics;  // e.g. an empty side
};

SplitResult split(const DatasetManifest& manifest, const SplitRule& rule);

bool subject_in_train(const SplitRule& rule, int subject);

// Manifest export: tab-separated, columns path/action/subject/example/label.
void write_manifest(const DatasetManifest& manifest, const std::string& path);
DatasetManifest read_manifest(const std::string& path);

}  // namespace hdmm

#endif
