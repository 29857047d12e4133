// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fvdlens/clip.hpp"

namespace fvdlens {

enum class DistortionFamily { Elastic, MotionBlur };
enum class DistortionMode { Spatial, Spatiotemporal };

std::string_view to_string(DistortionFamily family);
std::string_view to_string(DistortionMode mode);
DistortionFamily parse_family(std::string_view text);
DistortionMode parse_mode(std::string_view text);

inline constexpr int kSeverityLevels = 5;

struct ElasticLevel {
  double alpha = 0.0;  // max displacement, fraction of min(H, W)
  double sigma = 0.0;  // smoothing std-dev, fraction of min(H, W)
};

struct MotionBlurLevel {
  int kernel_length = 1;  // odd
  double angle_min = 0.0;
  double angle_max = 0.0;  // angles drawn uniformly from [angle_min, angle_max)
};

/// Corruption parameters per severity level (index 0 is level 1).
struct SeverityTable {
  std::array<ElasticLevel, kSeverityLevels> elastic;
  std::array<MotionBlurLevel, kSeverityLevels> motion_blur;

  /// alpha 0.02..0.10 with sigma 0.05, blur length 5..21 with angle in [0, pi).
  static SeverityTable defaults();
  void validate() const;
};

struct DistortionSpec {
  DistortionFamily family = DistortionFamily::Elastic;
  int severity = 1;  // 1..5
  DistortionMode mode = DistortionMode::Spatial;
  std::uint64_t seed = 0;

  void validate() const;
  /// Suffix appended to clip ids, e.g. "_elastic_s3_spatiotemporal".
  std::string id_suffix() const;
};

/// Per-pixel displacement (dx, dy), row-major H x W.
struct DisplacementField {
  int height = 0;
  int width = 0;
  std::vector<double> dx;
  std::vector<double> dy;

  DisplacementField() = default;
  DisplacementField(int h, int w)
      : height(h), width(w),
        dx(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), 0.0),
        dy(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), 0.0) {}

  double max_magnitude() const;
  friend bool operator==(const DisplacementField&, const DisplacementField&) = default;
};

/// Smoothed uniform noise, normalized so the largest displacement has length
/// alpha * min(H, W). sigma is also a fraction of min(H, W).
DisplacementField elastic_field(int height, int width, double alpha, double sigma,
                                std::uint64_t seed);

/// Bilinear resampling at (x - dx, y - dy) with symmetric reflection at the
/// border, rounded half-to-even back to 8 bits.
Frame warp_frame(const Frame& frame, const DisplacementField& field);

/// Square filter kernel, row-major.
struct Kernel {
  int size = 1;
  std::vector<double> taps;

  double at(int row, int col) const {
    return taps[static_cast<std::size_t>(row) * static_cast<std::size_t>(size) +
                static_cast<std::size_t>(col)];
  }
};

/// Anti-aliased line of `length` samples through the kernel center at
/// `angle` radians, normalized to sum 1.
Kernel motion_blur_kernel(int length, double angle);

/// Filters every channel with `kernel` using symmetric reflection at the border.
Frame convolve_frame(const Frame& frame, const Kernel& kernel);

/// Spatial mode draws one field/kernel per clip and applies it to every frame;
/// spatiotemporal mode draws a fresh one per frame at the same severity.
/// Clips are processed on up to `threads` workers (0 = default) without
/// affecting the output.
ClipSet distort_clipset(const ClipSet& clips, const DistortionSpec& spec,
                        const SeverityTable& table = SeverityTable::defaults(),
                        std::size_t threads = 1);

/// Replaces every frame of every clip with the clip's first frame.
ClipSet freeze_clipset(const ClipSet& clips);

}  // namespace fvdlens
