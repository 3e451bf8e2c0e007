#include "hdmm/depth_io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "hdmm/errors.hpp"

namespace fs = std::filesystem;

namespace hdmm {

namespace {

void put_u32(std::string& out, uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

uint32_t get_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

}  // namespace

void validate(const DepthSequence& seq) {
  if (seq.frames.empty()) throw DataError("depth sequence has zero frames");
  if (seq.width == 0 || seq.height == 0) throw DataError("depth sequence has empty frame dimensions");
  const size_t expect = static_cast<size_t>(seq.width) * seq.height;
  for (const Frame& f : seq.frames) {
    if (f.width != seq.width || f.height != seq.height || f.values.size() != expect)
      throw DataError("frame dimensions do not match sequence header");
  }
}

DepthSequence read_sequence(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open depth file: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 12) throw DataError("truncated depth file (incomplete header): " + path);

  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const uint32_t n = get_u32(p);
  const uint32_t w = get_u32(p + 4);
  const uint32_t h = get_u32(p + 8);
  if (n == 0) throw DataError("depth file declares zero frames: " + path);
  if (w == 0 || h == 0) throw DataError("depth file declares empty frame dimensions: " + path);

  const uint64_t words = static_cast<uint64_t>(n) * w * h;
  const uint64_t expect = 12 + words * 4;
  if (bytes.size() < expect)
    throw DataError("truncated depth file: expected " + std::to_string(expect) + " bytes, got " +
                    std::to_string(bytes.size()) + ": " + path);
  if (bytes.size() > expect)
    throw DataError("depth file size mismatch (trailing bytes): " + path);

  DepthSequence seq;
  seq.width = w;
  seq.height = h;
  seq.frames.resize(n);
  const unsigned char* cur = p + 12;
  for (uint32_t i = 0; i < n; ++i) {
    Frame& f = seq.frames[i];
    f.width = w;
    f.height = h;
    f.values.resize(static_cast<size_t>(w) * h);
    for (auto& v : f.values) {
      v = get_u32(cur);
      cur += 4;
    }
  }
  return seq;
}

void write_sequence(const DepthSequence& seq, const std::string& path) {
  validate(seq);
  std::string bytes;
  bytes.reserve(12 + static_cast<size_t>(seq.frame_count()) * seq.width * seq.height * 4);
  put_u32(bytes, seq.frame_count());
  put_u32(bytes, seq.width);
  put_u32(bytes, seq.height);
  for (const Frame& f : seq.frames)
    for (uint32_t v : f.values) put_u32(bytes, v);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open path for writing: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed: " + path);
}

namespace {

int parse_segment(const std::string& name, size_t pos, char prefix, const char* what) {
  if (pos + 4 > name.size() || name[pos] != prefix)
    throw DataError(std::string("malformed sample filename (missing ") + what + " segment): " + name);
  int v = 0;
  for (size_t i = pos + 1; i < pos + 4; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i])))
      throw DataError(std::string("malformed sample filename (non-numeric ") + what + " segment): " + name);
    v = v * 10 + (name[i] - '0');
  }
  if (v < 1) throw DataError(std::string("sample filename ") + what + " segment must be >= 1: " + name);
  return v;
}

}  // namespace

SampleId parse_sample_id(const std::string& filename) {
  // aXXX_sXXX_eXXX_depth.bin, exactly three digits per segment
  if (filename.size() != 24 || filename.substr(14) != "_depth.bin")
    throw DataError("malformed sample filename (expected aXXX_sXXX_eXXX_depth.bin): " + filename);
  SampleId id;
  id.action = parse_segment(filename, 0, 'a', "action");
  if (filename[4] != '_') throw DataError("malformed sample filename (missing separator): " + filename);
  id.subject = parse_segment(filename, 5, 's', "subject");
  if (filename[9] != '_') throw DataError("malformed sample filename (missing separator): " + filename);
  id.example = parse_segment(filename, 10, 'e', "example");
  return id;
}

std::string format_sample_id(const SampleId& id) {
  if (id.action < 1 || id.subject < 1 || id.example < 1)
    throw UsageError("sample id fields must be >= 1");
  if (id.action > 999 || id.subject > 999 || id.example > 999)
    throw UsageError("sample id fields exceed the three-digit filename convention");
  char buf[32];
  std::snprintf(buf, sizeof(buf), "a%03d_s%03d_e%03d_depth.bin", id.action, id.subject, id.example);
  return buf;
}

LabelMapping read_label_mapping(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open label mapping file: " + path);
  LabelMapping mapping;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    int old_id = 0, new_id = 0;
    if (!(ls >> tag)) continue;  // blank line
    if (!(ls >> old_id >> new_id))
      throw DataError("malformed label mapping at " + path + ":" + std::to_string(lineno));
    std::string extra;
    if (ls >> extra)
      throw DataError("trailing tokens in label mapping at " + path + ":" + std::to_string(lineno));
    if (new_id < 1) throw DataError("mapped labels must be >= 1 at " + path + ":" + std::to_string(lineno));
    mapping.map[{tag, old_id}] = new_id;
  }
  return mapping;
}

namespace {

void check_labels_and_sort(DatasetManifest& m) {
  std::sort(m.entries.begin(), m.entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.id < b.id; });
  for (size_t i = 1; i < m.entries.size(); ++i) {
    if (m.entries[i].id == m.entries[i - 1].id)
      throw DataError("duplicate sample id across dataset: " + format_sample_id(m.entries[i].id));
  }
  std::set<int> labels;
  for (const auto& e : m.entries) labels.insert(e.label);
  if (labels.empty()) throw DataError("manifest has no entries");
  int expect = 1;
  for (int l : labels) {
    if (l != expect)
      throw DataError("remapped labels are not a contiguous range starting at 1 (missing label " +
                      std::to_string(expect) + ")");
    ++expect;
  }
  m.class_count = static_cast<int>(labels.size());
}

}  // namespace

DatasetManifest build_manifest(const std::string& root, const LabelMapping& mapping) {
  if (!fs::is_directory(root)) throw DataError("not a directory: " + root);
  DatasetManifest m;
  for (const auto& de : fs::recursive_directory_iterator(root)) {
    if (!de.is_regular_file()) continue;
    const std::string name = de.path().filename().string();
    if (name.size() != 24 || name.substr(14) != "_depth.bin") continue;
    SampleId id = parse_sample_id(name);

    std::string tag = ".";
    fs::path rel = fs::relative(de.path(), root);
    if (rel.has_parent_path() && !rel.parent_path().empty()) tag = rel.begin()->string();

    int label = id.action;
    if (!mapping.identity()) {
      auto it = mapping.map.find({tag, id.action});
      if (it == mapping.map.end())
        throw DataError("label mapping gap: no entry for source '" + tag + "' action " +
                        std::to_string(id.action));
      label = it->second;
    }
    m.entries.push_back({id, de.path().string(), label});
  }
  if (m.entries.empty()) throw DataError("no convention-named depth files under " + root);
  check_labels_and_sort(m);
  return m;
}

bool subject_in_train(const SplitRule& rule, int subject) {
  if (rule.kind == SplitRule::Kind::OddSubjectsTrain) return subject % 2 == 1;
  return std::find(rule.train_subjects.begin(), rule.train_subjects.end(), subject) !=
         rule.train_subjects.end();
}

SplitResult split(const DatasetManifest& manifest, const SplitRule& rule) {
  if (manifest.entries.empty()) throw DataError("cannot split an empty manifest");
  if (rule.kind == SplitRule::Kind::ExplicitLists) {
    for (int s : rule.train_subjects)
      if (std::find(rule.test_subjects.begin(), rule.test_subjects.end(), s) != rule.test_subjects.end())
        throw UsageError("split subject lists overlap on subject " + std::to_string(s));
  }
  SplitResult r;
  r.train.class_count = r.test.class_count = manifest.class_count;
  r.train.split_rule = r.test.split_rule = rule;
  for (const auto& e : manifest.entries) {
    if (rule.kind == SplitRule::Kind::ExplicitLists) {
      bool in_train = std::find(rule.train_subjects.begin(), rule.train_subjects.end(), e.id.subject) !=
                      rule.train_subjects.end();
      bool in_test = std::find(rule.test_subjects.begin(), rule.test_subjects.end(), e.id.subject) !=
                     rule.test_subjects.end();
      if (!in_train && !in_test)
        throw DataError("subject " + std::to_string(e.id.subject) + " not covered by explicit split lists");
      (in_train ? r.train : r.test).entries.push_back(e);
    } else {
      (e.id.subject % 2 == 1 ? r.train : r.test).entries.push_back(e);
    }
  }
  if (r.train.entries.empty()) r.diagnostics.push_back("warning: training side of split is empty");
  if (r.test.entries.empty()) r.diagnostics.push_back("warning: test side of split is empty");
  return r;
}

void write_manifest(const DatasetManifest& manifest, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot open manifest for writing: " + path);
  out << "path\taction\tsubject\texample\tlabel\n";
  for (const auto& e : manifest.entries)
    out << e.path << '\t' << e.id.action << '\t' << e.id.subject << '\t' << e.id.example << '\t'
        << e.label << '\n';
  if (!out) throw DataError("manifest write failed: " + path);
}

DatasetManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest: " + path);
  DatasetManifest m;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1 && line.rfind("path\t", 0) == 0) continue;
    std::vector<std::string> cols;
    std::istringstream ls(line);
    std::string col;
    while (std::getline(ls, col, '\t')) cols.push_back(col);
    if (cols.size() != 5)
      throw DataError("malformed manifest line " + std::to_string(lineno) + " in " + path);
    ManifestEntry e;
    e.path = cols[0];
    try {
      e.id.action = std::stoi(cols[1]);
      e.id.subject = std::stoi(cols[2]);
      e.id.example = std::stoi(cols[3]);
      e.label = std::stoi(cols[4]);
    } catch (const std::exception&) {
      throw DataError("malformed manifest line " + std::to_string(lineno) + " in " + path);
    }
    m.entries.push_back(e);
  }
  if (m.entries.empty()) throw DataError("empty manifest: " + path);
  check_labels_and_sort(m);
  return m;
}

}  // namespace hdmm
