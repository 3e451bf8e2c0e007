#ifndef HDMM_ENCODE_HPP
#define HDMM_ENCODE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hdmm/depth_io.hpp"
#include "hdmm/motion_maps.hpp"

namespace hdmm {

struct Provenance {
  SampleId id;
  ViewPlane plane = ViewPlane::Front;
  int scale = 1;
  double theta = 0;
  double beta = 0;
};

struct PseudoRgbImage {
  uint32_t width = 0;
  uint32_t height = 0;
  std::vector<uint8_t> rgb;  // interleaved R,G,B, row-major
  std::optional<Provenance> provenance;
};

/// Fixed pseudo-color table, v in [0, 1]:
///   R = clamp(1.5 - 4|v - 0.25|), G = clamp(1.5 - 4|v - 0.5|),
///   B = clamp(1.5 - 4|v - 0.75|), each scaled to bytes.
/// Small values land on the red end, large values on the blue end.
std::array<uint8_t, 3> colormap_byte(double v);
std::array<double, 3> colormap(double v);

/// Min-max normalize a motion map (all-constant maps normalize to 0), apply
/// the colormap, and bilinearly resize to canvas x canvas.
PseudoRgbImage encode(const MotionMap& map, uint32_t canvas = 256);

struct AugmentSpec {
  uint32_t crop = 224;
  bool flip = true;      // horizontal, probability 0.5
  int jitter = 10;       // per-channel uniform offset in [-jitter, +jitter]
  uint64_t seed = 0;
};

/// Random crop near the center (window center constrained to the middle half
/// of each axis), optional horizontal flip, per-channel jitter. Deterministic
/// for a fixed seed.
PseudoRgbImage augment(const PseudoRgbImage& img, const AugmentSpec& spec);

PseudoRgbImage center_crop(const PseudoRgbImage& img, uint32_t crop);

PseudoRgbImage flip_horizontal(const PseudoRgbImage& img);

// Bilinear resample of an interleaved image, any channel count.
std::vector<float> resize_bilinear(const std::vector<float>& src, uint32_t src_w, uint32_t src_h,
                                   uint32_t channels, uint32_t dst_w, uint32_t dst_h);

// Provenance filename codec: aXXX_sXXX_eXXX_<plane>_nNN_thT_beB.png
std::string provenance_filename(const Provenance& prov);
Provenance parse_provenance(const std::string& filename);

void write_png(const PseudoRgbImage& img, const std::string& path);
PseudoRgbImage read_png(const std::string& path);

}  // namespace hdmm

#endif
