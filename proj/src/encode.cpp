#include "hdmm/encode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "hdmm/errors.hpp"

namespace hdmm {

std::array<double, 3> colormap(double v) {
  auto clamp01 = [](double x) { return std::clamp(x, 0.0, 1.0); };
  return {clamp01(1.5 - 4 * std::abs(v - 0.25)), clamp01(1.5 - 4 * std::abs(v - 0.5)),
          clamp01(1.5 - 4 * std::abs(v - 0.75))};
}

std::array<uint8_t, 3> colormap_byte(double v) {
  const auto c = colormap(v);
  return {static_cast<uint8_t>(std::lround(255 * c[0])), static_cast<uint8_t>(std::lround(255 * c[1])),
          static_cast<uint8_t>(std::lround(255 * c[2]))};
}

std::vector<float> resize_bilinear(const std::vector<float>& src, uint32_t src_w, uint32_t src_h,
                                   uint32_t channels, uint32_t dst_w, uint32_t dst_h) {
  if (src_w == dst_w && src_h == dst_h) return src;
  std::vector<float> dst(static_cast<size_t>(dst_w) * dst_h * channels);
  const double sx = static_cast<double>(src_w) / dst_w;
  const double sy = static_cast<double>(src_h) / dst_h;
  for (uint32_t r = 0; r < dst_h; ++r) {
    double yf = (r + 0.5) * sy - 0.5;
    yf = std::clamp(yf, 0.0, static_cast<double>(src_h - 1));
    const uint32_t y0 = static_cast<uint32_t>(yf);
    const uint32_t y1 = std::min(y0 + 1, src_h - 1);
    const double wy = yf - y0;
    for (uint32_t c = 0; c < dst_w; ++c) {
      double xf = (c + 0.5) * sx - 0.5;
      xf = std::clamp(xf, 0.0, static_cast<double>(src_w - 1));
      const uint32_t x0 = static_cast<uint32_t>(xf);
      const uint32_t x1 = std::min(x0 + 1, src_w - 1);
      const double wx = xf - x0;
      for (uint32_t ch = 0; ch < channels; ++ch) {
        const auto at = [&](uint32_t x, uint32_t y) {
          return static_cast<double>(src[(static_cast<size_t>(y) * src_w + x) * channels + ch]);
        };
        const double top = at(x0, y0) * (1 - wx) + at(x1, y0) * wx;
        const double bot = at(x0, y1) * (1 - wx) + at(x1, y1) * wx;
        dst[(static_cast<size_t>(r) * dst_w + c) * channels + ch] =
            static_cast<float>(top * (1 - wy) + bot * wy);
      }
    }
  }
  return dst;
}

PseudoRgbImage encode(const MotionMap& map, uint32_t canvas) {
  if (map.values.empty() || map.cols == 0 || map.rows == 0)
    throw DataError("cannot encode an empty motion map");
  if (canvas == 0) throw UsageError("encode canvas must be positive");

  const auto [mn_it, mx_it] = std::minmax_element(map.values.begin(), map.values.end());
  const double mn = *mn_it, mx = *mx_it;
  const double range = mx - mn;

  std::vector<float> rgb(map.values.size() * 3);
  for (size_t i = 0; i < map.values.size(); ++i) {
    const double v = range > 0 ? (map.values[i] - mn) / range : 0.0;
    const auto c = colormap(v);
    rgb[i * 3 + 0] = static_cast<float>(c[0]);
    rgb[i * 3 + 1] = static_cast<float>(c[1]);
    rgb[i * 3 + 2] = static_cast<float>(c[2]);
  }
  rgb = resize_bilinear(rgb, map.cols, map.rows, 3, canvas, canvas);

  PseudoRgbImage img;
  img.width = img.height = canvas;
  img.rgb.resize(rgb.size());
  for (size_t i = 0; i < rgb.size(); ++i)
    img.rgb[i] = static_cast<uint8_t>(std::lround(std::clamp(rgb[i], 0.0f, 1.0f) * 255));
  return img;
}

PseudoRgbImage flip_horizontal(const PseudoRgbImage& img) {
  PseudoRgbImage out = img;
  for (uint32_t r = 0; r < img.height; ++r)
    for (uint32_t c = 0; c < img.width; ++c)
      for (int ch = 0; ch < 3; ++ch)
        out.rgb[(static_cast<size_t>(r) * img.width + c) * 3 + ch] =
            img.rgb[(static_cast<size_t>(r) * img.width + (img.width - 1 - c)) * 3 + ch];
  return out;
}

namespace {

PseudoRgbImage crop_at(const PseudoRgbImage& img, uint32_t x0, uint32_t y0, uint32_t crop) {
  PseudoRgbImage out;
  out.width = out.height = crop;
  out.provenance = img.provenance;
  out.rgb.resize(static_cast<size_t>(crop) * crop * 3);
  for (uint32_t r = 0; r < crop; ++r) {
    const uint8_t* src = &img.rgb[((static_cast<size_t>(y0) + r) * img.width + x0) * 3];
    std::copy(src, src + static_cast<size_t>(crop) * 3, &out.rgb[static_cast<size_t>(r) * crop * 3]);
  }
  return out;
}

// Offsets keeping the crop window inside the image with its center in the
// middle half of the axis.
std::pair<long, long> crop_offset_range(uint32_t size, uint32_t crop) {
  const double half = crop / 2.0;
  long lo = static_cast<long>(std::ceil(size / 4.0 - half));
  long hi = static_cast<long>(std::floor(3.0 * size / 4.0 - half));
  lo = std::max(lo, 0L);
  hi = std::min(hi, static_cast<long>(size - crop));
  if (lo > hi) lo = hi = static_cast<long>(size - crop) / 2;
  return {lo, hi};
}

}  // namespace

PseudoRgbImage center_crop(const PseudoRgbImage& img, uint32_t crop) {
  if (crop > img.width || crop > img.height) throw UsageError("crop larger than image");
  return crop_at(img, (img.width - crop) / 2, (img.height - crop) / 2, crop);
}

PseudoRgbImage augment(const PseudoRgbImage& img, const AugmentSpec& spec) {
  if (spec.crop > img.width || spec.crop > img.height) throw UsageError("crop larger than image");
  if (spec.jitter < 0) throw UsageError("jitter amplitude must be >= 0");
  std::mt19937_64 rng(spec.seed);

  const auto [xlo, xhi] = crop_offset_range(img.width, spec.crop);
  const auto [ylo, yhi] = crop_offset_range(img.height, spec.crop);
  const long x0 = std::uniform_int_distribution<long>(xlo, xhi)(rng);
  const long y0 = std::uniform_int_distribution<long>(ylo, yhi)(rng);
  PseudoRgbImage out = crop_at(img, static_cast<uint32_t>(x0), static_cast<uint32_t>(y0), spec.crop);

  if (spec.flip && std::uniform_int_distribution<int>(0, 1)(rng) == 1) out = flip_horizontal(out);

  if (spec.jitter > 0) {
    std::uniform_int_distribution<int> dist(-spec.jitter, spec.jitter);
    const int off[3] = {dist(rng), dist(rng), dist(rng)};
    for (size_t i = 0; i < out.rgb.size(); ++i)
      out.rgb[i] = static_cast<uint8_t>(std::clamp(static_cast<int>(out.rgb[i]) + off[i % 3], 0, 255));
  }
  return out;
}

std::string provenance_filename(const Provenance& prov) {
  auto fmt_angle = [](double a) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", a);
    return std::string(buf);
  };
  char head[64];
  std::snprintf(head, sizeof(head), "a%03d_s%03d_e%03d_%c_n%02d", prov.id.action, prov.id.subject,
                prov.id.example, plane_tag(prov.plane), prov.scale);
  return std::string(head) + "_th" + fmt_angle(prov.theta) + "_be" + fmt_angle(prov.beta) + ".png";
}

Provenance parse_provenance(const std::string& filename) {
  // a012_s003_e001_f_n05_th-30_be5.png
  std::vector<std::string> parts;
  std::string stem = filename;
  if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".png") stem.resize(stem.size() - 4);
  std::istringstream ss(stem);
  std::string part;
  while (std::getline(ss, part, '_')) parts.push_back(part);
  if (parts.size() != 7) throw DataError("malformed provenance filename: " + filename);

  Provenance prov;
  try {
    prov.id = parse_sample_id(parts[0] + "_" + parts[1] + "_" + parts[2] + "_depth.bin");
    if (parts[3].size() != 1) throw DataError("bad plane tag");
    prov.plane = plane_from_tag(parts[3][0]);
    if (parts[4].size() < 2 || parts[4][0] != 'n') throw DataError("bad scale segment");
    prov.scale = std::stoi(parts[4].substr(1));
    if (parts[5].rfind("th", 0) != 0 || parts[6].rfind("be", 0) != 0)
      throw DataError("bad angle segment");
    prov.theta = std::stod(parts[5].substr(2));
    prov.beta = std::stod(parts[6].substr(2));
  } catch (const std::exception&) {
    throw DataError("malformed provenance filename: " + filename);
  }
  if (prov.scale < 1) throw DataError("malformed provenance filename (scale < 1): " + filename);
  return prov;
}

void write_png(const PseudoRgbImage& img, const std::string& path) {
  cv::Mat mat(static_cast<int>(img.height), static_cast<int>(img.width), CV_8UC3);
  for (uint32_t r = 0; r < img.height; ++r)
    for (uint32_t c = 0; c < img.width; ++c) {
      const size_t i = (static_cast<size_t>(r) * img.width + c) * 3;
      mat.at<cv::Vec3b>(r, c) = {img.rgb[i + 2], img.rgb[i + 1], img.rgb[i]};  // BGR
    }
  if (!cv::imwrite(path, mat)) throw DataError("failed to write PNG: " + path);
}

PseudoRgbImage read_png(const std::string& path) {
  cv::Mat mat = cv::imread(path, cv::IMREAD_COLOR);
  if (mat.empty()) throw DataError("failed to read PNG: " + path);
  PseudoRgbImage img;
  img.width = static_cast<uint32_t>(mat.cols);
  img.height = static_cast<uint32_t>(mat.rows);
  img.rgb.resize(static_cast<size_t>(img.width) * img.height * 3);
  for (uint32_t r = 0; r < img.height; ++r)
    for (uint32_t c = 0; c < img.width; ++c) {
      const auto px = mat.at<cv::Vec3b>(r, c);
      const size_t i = (static_cast<size_t>(r) * img.width + c) * 3;
      img.rgb[i] = px[2];
      img.rgb[i + 1] = px[1];
      img.rgb[i + 2] = px[0];
    }
  return img;
}

}  // namespace hdmm
