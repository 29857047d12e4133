// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fvdlens/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fvdlens/error.hpp"
#include "fvdlens/parallel.hpp"
#include "fvdlens/rng.hpp"

namespace fvdlens {

std::string_view to_string(DistortionFamily family) {
  return family == DistortionFamily::Elastic ? "elastic" : "motion_blur";
}

std::string_view to_string(DistortionMode mode) {
  return mode == DistortionMode::Spatial ? "spatial" : "spatiotemporal";
}

DistortionFamily parse_family(std::string_view text) {
  if (text == "elastic") return DistortionFamily::Elastic;
  if (text == "motion_blur" || text == "motion-blur" || text == "blur") {
    return DistortionFamily::MotionBlur;
  }
  fail(ErrorKind::InvalidArgument, "unknown distortion family '" + std::string(text) + "'");
}

DistortionMode parse_mode(std::string_view text) {
  if (text == "spatial") return DistortionMode::Spatial;
  if (text == "spatiotemporal") return DistortionMode::Spatiotemporal;
  fail(ErrorKind::InvalidArgument, "unknown distortion mode '" + std::string(text) + "'");
}

SeverityTable SeverityTable::defaults() {
  SeverityTable table;
  const std::array<double, kSeverityLevels> alphas = {0.02, 0.04, 0.06, 0.08, 0.10};
  const std::array<int, kSeverityLevels> lengths = {5, 9, 13, 17, 21};
  for (int i = 0; i < kSeverityLevels; ++i) {
    table.elastic[i] = {alphas[i], 0.05};
    table.motion_blur[i] = {lengths[i], 0.0, std::numbers::pi};
  }
  return table;
}

void SeverityTable::validate() const {
  for (int i = 0; i < kSeverityLevels; ++i) {
    const auto& e = elastic[i];
    if (!(e.alpha >= 0.0) || !(e.sigma > 0.0)) {
      fail(ErrorKind::InvalidArgument, "elastic level needs alpha >= 0 and sigma > 0");
    }
    const auto& b = motion_blur[i];
    if (b.kernel_length < 1 || b.kernel_length % 2 == 0) {
      fail(ErrorKind::InvalidArgument, "motion blur kernel_length must be odd and >= 1");
    }
    if (!(b.angle_max >= b.angle_min)) {
      fail(ErrorKind::InvalidArgument, "motion blur angle range is empty");
    }
  }
}

void DistortionSpec::validate() const {
  if (severity < 1 || severity > kSeverityLevels) {
    fail(ErrorKind::InvalidArgument, "severity must be in 1..5");
  }
}

std::string DistortionSpec::id_suffix() const {
  std::ostringstream out;
  out << '_' << to_string(family) << "_s" << severity << '_' << to_string(mode);
  return out.str();
}

namespace {

// Symmetric (half-sample) reflection: ... c b a | a b c ... | c b a ...
int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

std::uint8_t to_pixel(double v) {
  const double r = std::nearbyint(v);  // default rounding mode: half to even
  return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

std::vector<double> gaussian_taps(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
    taps[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (double& t : taps) t /= sum;
  return taps;
}

// Separable smoothing of an H x W plane with reflected borders.
std::vector<double> smooth_plane(const std::vector<double>& plane, int h, int w,
                                 const std::vector<double>& taps) {
  const int radius = static_cast<int>(taps.size() / 2);
  std::vector<double> tmp(plane.size()), out(plane.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += taps[static_cast<std::size_t>(k + radius)] *
               plane[static_cast<std::size_t>(y * w + reflect_index(x + k, w))];
      }
      tmp[static_cast<std::size_t>(y * w + x)] = acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += taps[static_cast<std::size_t>(k + radius)] *
               tmp[static_cast<std::size_t>(reflect_index(y + k, h) * w + x)];
      }
      out[static_cast<std::size_t>(y * w + x)] = acc;
    }
  }
  return out;
}

}  // namespace

double DisplacementField::max_magnitude() const {
  double best = 0.0;
  for (std::size_t i = 0; i < dx.size(); ++i) {
    best = std::max(best, std::hypot(dx[i], dy[i]));
  }
  return best;
}

DisplacementField elastic_field(int height, int width, double alpha, double sigma,
                                std::uint64_t seed) {
  if (height < 1 || width < 1) fail(ErrorKind::InvalidArgument, "field size must be positive");
  if (!(alpha >= 0.0)) fail(ErrorKind::InvalidArgument, "alpha must be >= 0");
  if (!(sigma > 0.0)) fail(ErrorKind::InvalidArgument, "sigma must be > 0");

  DisplacementField field(height, width);
  if (alpha == 0.0) return field;

  const double scale = static_cast<double>(std::min(height, width));
  CounterRng rng(seed);
  std::vector<double> nx(field.dx.size()), ny(field.dy.size());
  for (std::size_t i = 0; i < nx.size(); ++i) {
    nx[i] = rng.uniform(-1.0, 1.0);
    ny[i] = rng.uniform(-1.0, 1.0);
  }
  const auto taps = gaussian_taps(sigma * scale);
  field.dx = smooth_plane(nx, height, width, taps);
  field.dy = smooth_plane(ny, height, width, taps);

  const double peak = field.max_magnitude();
  if (peak > 0.0) {
    const double gain = alpha * scale / peak;
    for (auto& v : field.dx) v *= gain;
    for (auto& v : field.dy) v *= gain;
  }
  return field;
}

Frame warp_frame(const Frame& frame, const DisplacementField& field) {
  if (field.height != frame.height || field.width != frame.width) {
    std::ostringstream msg;
    msg << "field is " << field.height << "x" << field.width << " but frame is " << frame.height
        << "x" << frame.width;
    fail(ErrorKind::DimensionMismatch, msg.str());
  }
  Frame out(frame.height, frame.width, frame.channels);
  for (int y = 0; y < frame.height; ++y) {
    for (int x = 0; x < frame.width; ++x) {
      const auto f = static_cast<std::size_t>(y * frame.width + x);
      const double sx = x - field.dx[f];
      const double sy = y - field.dy[f];
      const double fx0 = std::floor(sx);
      const double fy0 = std::floor(sy);
      const double ax = sx - fx0;
      const double ay = sy - fy0;
      const int x0 = static_cast<int>(fx0);
      const int y0 = static_cast<int>(fy0);
      const int xa = reflect_index(x0, frame.width);
      const int xb = reflect_index(x0 + 1, frame.width);
      const int ya = reflect_index(y0, frame.height);
      const int yb = reflect_index(y0 + 1, frame.height);
      for (int c = 0; c < frame.channels; ++c) {
        const double top = (1.0 - ax) * frame.at(ya, xa, c) + ax * frame.at(ya, xb, c);
        const double bottom = (1.0 - ax) * frame.at(yb, xa, c) + ax * frame.at(yb, xb, c);
        out.at(y, x, c) = to_pixel((1.0 - ay) * top + ay * bottom);
      }
    }
  }
  return out;
}

Kernel motion_blur_kernel(int length, double angle) {
  if (length < 1 || length % 2 == 0) {
    fail(ErrorKind::InvalidArgument, "motion blur length must be odd and >= 1");
  }
  Kernel kernel;
  kernel.size = length;
  kernel.taps.assign(static_cast<std::size_t>(length) * static_cast<std::size_t>(length), 0.0);
  const double center = (length - 1) / 2.0;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  auto splat = [&](int row, int col, double w) {
    if (w <= 0.0 || row < 0 || col < 0 || row >= length || col >= length) return;
    kernel.taps[static_cast<std::size_t>(row) * static_cast<std::size_t>(length) +
                static_cast<std::size_t>(col)] += w;
  };
  // One unit-weight sample per pixel step along the segment, bilinearly
  // splatted onto the grid.
  const int half = (length - 1) / 2;
  for (int t = -half; t <= half; ++t) {
    double px = center + t * c;
    double py = center + t * s;
    // Snap values within round-off of a grid point so axis-aligned kernels are exact.
    if (std::abs(px - std::round(px)) < 1e-12) px = std::round(px);
    if (std::abs(py - std::round(py)) < 1e-12) py = std::round(py);
    const double fx = std::floor(px);
    const double fy = std::floor(py);
    const double ax = px - fx;
    const double ay = py - fy;
    const int x0 = static_cast<int>(fx);
    const int y0 = static_cast<int>(fy);
    splat(y0, x0, (1.0 - ax) * (1.0 - ay));
    splat(y0, x0 + 1, ax * (1.0 - ay));
    splat(y0 + 1, x0, (1.0 - ax) * ay);
    splat(y0 + 1, x0 + 1, ax * ay);
  }
  double sum = 0.0;
  for (double v : kernel.taps) sum += v;
  for (double& v : kernel.taps) v /= sum;
  return kernel;
}

Frame convolve_frame(const Frame& frame, const Kernel& kernel) {
  const int radius = kernel.size / 2;
  // Skip zero taps; a motion blur kernel is mostly empty.
  struct Tap {
    int dy, dx;
    double w;
  };
  std::vector<Tap> taps;
  for (int r = 0; r < kernel.size; ++r) {
    for (int col = 0; col < kernel.size; ++col) {
      if (kernel.at(r, col) != 0.0) taps.push_back({r - radius, col - radius, kernel.at(r, col)});
    }
  }
  Frame out(frame.height, frame.width, frame.channels);
  for (int y = 0; y < frame.height; ++y) {
    for (int x = 0; x < frame.width; ++x) {
      for (int c = 0; c < frame.channels; ++c) {
        double acc = 0.0;
        for (const Tap& t : taps) {
          acc += t.w * frame.at(reflect_index(y + t.dy, frame.height),
                                reflect_index(x + t.dx, frame.width), c);
        }
        out.at(y, x, c) = to_pixel(acc);
      }
    }
  }
  return out;
}

namespace {

class FrameDistorter {
 public:
  FrameDistorter(const DistortionSpec& spec, const SeverityTable& table, int height, int width)
      : spec_(spec), height_(height), width_(width) {
    const int level = spec.severity - 1;
    elastic_ = table.elastic[static_cast<std::size_t>(level)];
    blur_ = table.motion_blur[static_cast<std::size_t>(level)];
  }

  // One parameter draw from the stream `key`, applied to `frames`.
  void apply(std::uint64_t key, std::span<const Frame> in, std::span<Frame> out) const {
    if (spec_.family == DistortionFamily::Elastic) {
      const DisplacementField field =
          elastic_field(height_, width_, elastic_.alpha, elastic_.sigma, key);
      for (std::size_t i = 0; i < in.size(); ++i) out[i] = warp_frame(in[i], field);
    } else {
      CounterRng rng(key);
      const double angle = rng.uniform(blur_.angle_min, blur_.angle_max);
      const Kernel kernel = motion_blur_kernel(blur_.kernel_length, angle);
      for (std::size_t i = 0; i < in.size(); ++i) out[i] = convolve_frame(in[i], kernel);
    }
  }

 private:
  DistortionSpec spec_;
  int height_;
  int width_;
  ElasticLevel elastic_;
  MotionBlurLevel blur_;
};

}  // namespace

ClipSet distort_clipset(const ClipSet& clips, const DistortionSpec& spec,
                        const SeverityTable& table, std::size_t threads) {
  clips.validate();
  spec.validate();
  table.validate();

  const FrameDistorter distorter(spec, table, clips.height(), clips.width());
  ClipSet out;
  out.clips.resize(clips.size());
  parallel_for(clips.size(), threads, [&](std::size_t ci) {
    const Clip& clip = clips.clips[ci];
    Clip& result = out.clips[ci];
    result.id = clip.id + spec.id_suffix();
    result.frames.resize(clip.frames.size());
    if (spec.mode == DistortionMode::Spatial) {
      distorter.apply(derive_key(spec.seed, {ci}), clip.frames, result.frames);
    } else {
      for (std::size_t t = 0; t < clip.frames.size(); ++t) {
        distorter.apply(derive_key(spec.seed, {ci, t}),
                        std::span<const Frame>(&clip.frames[t], 1),
                        std::span<Frame>(&result.frames[t], 1));
      }
    }
  });
  return out;
}

ClipSet freeze_clipset(const ClipSet& clips) {
  clips.validate();
  ClipSet out;
  out.clips.reserve(clips.size());
  for (const Clip& clip : clips.clips) {
    out.clips.push_back(Clip{clip.id, std::vector<Frame>(clip.frames.size(), clip.frames.front())});
  }
  return out;
}

}  // namespace fvdlens
