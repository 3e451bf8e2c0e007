#include "hdmm/hdmm_c.h"

#include <cstring>
#include <new>
#include <string>

#include <nlohmann/json.hpp>

#include "hdmm/depth_io.hpp"
#include "hdmm/errors.hpp"
#include "hdmm/runner.hpp"

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename Fn>
int guard(Fn&& fn) {
  try {
    fn();
    return HDMM_OK;
  } catch (const hdmm::UsageError& e) {
    return fail(HDMM_E_USAGE, e.what());
  } catch (const hdmm::NumericError& e) {
    return fail(HDMM_E_NUMERIC, e.what());
  } catch (const hdmm::DataError& e) {
    return fail(HDMM_E_DATA, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(HDMM_E_USAGE, std::string("malformed options JSON: ") + e.what());
  } catch (const std::exception& e) {
    return fail(HDMM_E_DATA, e.what());
  }
}

nlohmann::json parse_options(const char* options_json) {
  if (!options_json) throw hdmm::UsageError("options JSON is null");
  return nlohmann::json::parse(options_json);
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct hdmm_sequence {
  hdmm::DepthSequence seq;
};

extern "C" {

const char* hdmm_last_error(void) { return g_last_error.c_str(); }

int hdmm_sequence_read(const char* path, hdmm_sequence** out) {
  return guard([&] {
    if (!path || !out) throw hdmm::UsageError("null argument");
    auto* handle = new hdmm_sequence{hdmm::read_sequence(path)};
    *out = handle;
  });
}

int hdmm_sequence_write(const hdmm_sequence* seq, const char* path) {
  return guard([&] {
    if (!seq || !path) throw hdmm::UsageError("null argument");
    hdmm::write_sequence(seq->seq, path);
  });
}

int hdmm_sequence_dims(const hdmm_sequence* seq, uint32_t* frames, uint32_t* width,
                       uint32_t* height) {
  return guard([&] {
    if (!seq) throw hdmm::UsageError("null sequence");
    if (frames) *frames = seq->seq.frame_count();
    if (width) *width = seq->seq.width;
    if (height) *height = seq->seq.height;
  });
}

int hdmm_sequence_frame(const hdmm_sequence* seq, uint32_t index, uint32_t* out) {
  return guard([&] {
    if (!seq || !out) throw hdmm::UsageError("null argument");
    if (index >= seq->seq.frame_count()) throw hdmm::UsageError("frame index out of range");
    const auto& values = seq->seq.frames[index].values;
    std::memcpy(out, values.data(), values.size() * sizeof(uint32_t));
  });
}

void hdmm_sequence_free(hdmm_sequence* seq) { delete seq; }

int hdmm_extract_run(const char* options_json) {
  return guard([&] { hdmm::run_extract(hdmm::extract_options_from_json(parse_options(options_json))); });
}

int hdmm_train_run(const char* options_json) {
  return guard([&] { hdmm::run_train(hdmm::train_options_from_json(parse_options(options_json))); });
}

int hdmm_eval_run(const char* options_json, char** report_json_out) {
  return guard([&] {
    const nlohmann::json report = hdmm::run_eval(hdmm::eval_options_from_json(parse_options(options_json)));
    if (report_json_out) *report_json_out = dup_string(report.dump(2));
  });
}

int hdmm_info_run(const char* path, char** info_json_out) {
  return guard([&] {
    if (!path) throw hdmm::UsageError("null path");
    const nlohmann::json info = hdmm::run_info(path);
    if (info_json_out) *info_json_out = dup_string(info.dump(2));
  });
}

void hdmm_string_free(char* s) { delete[] s; }

}  // extern "C"
