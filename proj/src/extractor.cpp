// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fvdlens/extractor.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

#include "fvdlens/error.hpp"
#include "fvdlens/feature_file.hpp"
#include "fvdlens/parallel.hpp"
#include "fvdlens/rng.hpp"

namespace fvdlens {

void Extractor::require_length(std::size_t frame_count) const {
  if (!accepts(frame_count)) {
    std::ostringstream msg;
    msg << "extractor '" << tag << "' does not accept clips of " << frame_count << " frames";
    fail(ErrorKind::ExtractorLengthUnsupported, msg.str());
  }
}

void ToyExtractorConfig::validate() const {
  if (patch_grid < 1) fail(ErrorKind::InvalidArgument, "patch_grid must be >= 1");
  if (output_dim < (include_temporal_block ? 2 : 1)) {
    fail(ErrorKind::InvalidArgument, "output_dim too small for the enabled blocks");
  }
}

std::string ToyExtractorConfig::tag() const {
  std::ostringstream out;
  out << "toy-v1-" << output_dim;
  if (patch_grid != 8) out << "-g" << patch_grid;
  if (!include_temporal_block) out << "-notemp";
  if (projection_seed != 0) out << "-p" << projection_seed;
  return out.str();
}

int ToyExtractorConfig::content_dims() const {
  return include_temporal_block ? (output_dim + 1) / 2 : output_dim;
}

int ToyExtractorConfig::temporal_dims() const {
  return include_temporal_block ? output_dim / 2 : 0;
}

void ToyFrameConfig::validate() const {
  if (patch_grid < 1) fail(ErrorKind::InvalidArgument, "patch_grid must be >= 1");
  if (output_dim < 2) fail(ErrorKind::InvalidArgument, "output_dim must be >= 2");
}

std::string ToyFrameConfig::tag() const {
  std::ostringstream out;
  out << "toy-frame-v1-" << output_dim;
  if (patch_grid != 4) out << "-g" << patch_grid;
  if (projection_seed != 0) out << "-p" << projection_seed;
  return out.str();
}

std::vector<std::uint8_t> to_grayscale(const Frame& frame) {
  const std::size_t n = static_cast<std::size_t>(frame.height) * frame.width;
  std::vector<std::uint8_t> gray(n);
  if (frame.channels == 1) {
    gray.assign(frame.pixels.begin(), frame.pixels.end());
    return gray;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned r = frame.pixels[3 * i];
    const unsigned g = frame.pixels[3 * i + 1];
    const unsigned b = frame.pixels[3 * i + 2];
    gray[i] = static_cast<std::uint8_t>((77 * r + 150 * g + 29 * b) >> 8);
  }
  return gray;
}

Vector downsample_gray(const Frame& frame, int grid) {
  if (frame.height < grid || frame.width < grid) {
    fail(ErrorKind::InvalidArgument, "frame is smaller than the toy extractor grid");
  }
  const auto gray = to_grayscale(frame);
  Vector out(static_cast<Eigen::Index>(grid) * grid);
  for (int gy = 0; gy < grid; ++gy) {
    const int y0 = gy * frame.height / grid;
    const int y1 = (gy + 1) * frame.height / grid;
    for (int gx = 0; gx < grid; ++gx) {
      const int x0 = gx * frame.width / grid;
      const int x1 = (gx + 1) * frame.width / grid;
      std::uint64_t sum = 0;
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) sum += gray[static_cast<std::size_t>(y * frame.width + x)];
      }
      const auto count = static_cast<double>((y1 - y0) * (x1 - x0));
      out[gy * grid + gx] = static_cast<double>(sum) / count / 255.0;
    }
  }
  return out;
}

Vector detail_energy(const Frame& frame, int grid) {
  if (frame.height < grid || frame.width < grid) {
    fail(ErrorKind::InvalidArgument, "frame is smaller than the toy extractor grid");
  }
  const auto gray = to_grayscale(frame);
  const int h = frame.height;
  const int w = frame.width;
  auto px = [&](int y, int x) {
    y = y < 0 ? 0 : (y >= h ? h - 1 : y);
    x = x < 0 ? 0 : (x >= w ? w - 1 : x);
    return static_cast<int>(gray[static_cast<std::size_t>(y * w + x)]);
  };
  Vector out(static_cast<Eigen::Index>(grid) * grid);
  for (int gy = 0; gy < grid; ++gy) {
    const int y0 = gy * h / grid;
    const int y1 = (gy + 1) * h / grid;
    for (int gx = 0; gx < grid; ++gx) {
      const int x0 = gx * w / grid;
      const int x1 = (gx + 1) * w / grid;
      std::int64_t sum = 0;
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
          const int lap = 4 * px(y, x) - px(y - 1, x) - px(y + 1, x) - px(y, x - 1) - px(y, x + 1);
          sum += lap < 0 ? -lap : lap;
        }
      }
      const auto count = static_cast<double>((y1 - y0) * (x1 - x0));
      out[gy * grid + gx] = static_cast<double>(sum) / count / 255.0;
    }
  }
  return out;
}

ToyBlocks toy_blocks(const Clip& clip, int grid) {
  if (clip.frames.empty()) fail(ErrorKind::InvalidArgument, "clip '" + clip.id + "' has no frames");
  const Eigen::Index cells = static_cast<Eigen::Index>(grid) * grid;
  ToyBlocks blocks{Vector::Zero(cells), Vector::Zero(cells)};
  Vector previous;
  for (std::size_t t = 0; t < clip.frames.size(); ++t) {
    Vector current = downsample_gray(clip.frames[t], grid);
    blocks.content += current;
    if (t > 0) blocks.temporal += (current - previous).cwiseAbs();
    previous = std::move(current);
  }
  blocks.content /= static_cast<double>(clip.frames.size());
  if (clip.frames.size() > 1) blocks.temporal /= static_cast<double>(clip.frames.size() - 1);
  return blocks;
}

Matrix toy_projection(int out_dim, int in_dim, std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(derive_key(seed, {0x746f79ULL, stream}));
  const int tall = std::max(out_dim, in_dim);
  const int thin = std::min(out_dim, in_dim);
  Matrix gaussian(tall, thin);
  for (Eigen::Index j = 0; j < gaussian.cols(); ++j) {
    for (Eigen::Index i = 0; i < gaussian.rows(); ++i) gaussian(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Matrix> qr(gaussian);
  // Orthonormal columns; fix signs so the result does not depend on the QR
  // implementation's sign convention.
  Matrix q = qr.householderQ() * Matrix::Identity(tall, thin);
  const Matrix r = qr.matrixQR().topRows(thin).triangularView<Eigen::Upper>();
  for (int j = 0; j < thin; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return out_dim >= in_dim ? q : Matrix(q.transpose());
}

namespace {

struct ToyProjections {
  Matrix content;
  Matrix temporal;
};

ToyProjections make_projections(const ToyExtractorConfig& config) {
  const int cells = config.patch_grid * config.patch_grid;
  ToyProjections p;
  p.content = toy_projection(config.content_dims(), cells, config.projection_seed, 0);
  if (config.include_temporal_block) {
    p.temporal = toy_projection(config.temporal_dims(), cells, config.projection_seed, 1);
  }
  return p;
}

}  // namespace

FeatureMatrix toy_extract(const ClipSet& clips, const ToyExtractorConfig& config,
                          std::size_t threads) {
  clips.validate();
  config.validate();
  const ToyProjections proj = make_projections(config);

  FeatureMatrix out;
  out.extractor_tag = config.tag();
  out.data.resize(static_cast<Eigen::Index>(clips.size()), config.output_dim);
  out.ids = clips.ids();
  parallel_for(clips.size(), threads, [&](std::size_t i) {
    const ToyBlocks blocks = toy_blocks(clips.clips[i], config.patch_grid);
    const auto row = static_cast<Eigen::Index>(i);
    out.data.row(row).head(config.content_dims()) = (proj.content * blocks.content).transpose();
    if (config.include_temporal_block) {
      out.data.row(row).tail(config.temporal_dims()) =
          (proj.temporal * blocks.temporal).transpose();
    }
  });
  return out;
}

Extractor make_toy_extractor(const ToyExtractorConfig& config, std::size_t threads) {
  config.validate();
  return Extractor{config.tag(),
                   [config, threads](const ClipSet& clips) {
                     return toy_extract(clips, config, threads);
                   },
                   1, 0};
}

FeatureMatrix toy_frame_extract(const ClipSet& frames, const ToyFrameConfig& config,
                                std::size_t threads) {
  frames.validate();
  config.validate();
  const int cells = config.patch_grid * config.patch_grid;
  const int content_dims = (config.output_dim + 1) / 2;
  const int detail_dims = config.output_dim / 2;
  const Matrix content_proj = toy_projection(content_dims, cells, config.projection_seed, 2);
  const Matrix detail_proj = toy_projection(detail_dims, cells, config.projection_seed, 3);

  FeatureMatrix out;
  out.extractor_tag = config.tag();
  out.ids = frames.ids();
  out.data.resize(static_cast<Eigen::Index>(frames.size()), config.output_dim);
  parallel_for(frames.size(), threads, [&](std::size_t i) {
    const Clip& clip = frames.clips[i];
    if (clip.frames.size() != 1) {
      fail(ErrorKind::ExtractorLengthUnsupported,
           "frame extractor expects single-frame clips, '" + clip.id + "' has " +
               std::to_string(clip.frames.size()));
    }
    const Frame& frame = clip.frames.front();
    const auto row = static_cast<Eigen::Index>(i);
    out.data.row(row).head(content_dims) =
        (content_proj * downsample_gray(frame, config.patch_grid)).transpose();
    out.data.row(row).tail(detail_dims) =
        (detail_proj * detail_energy(frame, config.patch_grid)).transpose();
  });
  return out;
}

Extractor make_toy_frame_extractor(const ToyFrameConfig& config, std::size_t threads) {
  config.validate();
  return Extractor{config.tag(),
                   [config, threads](const ClipSet& frames) {
                     return toy_frame_extract(frames, config, threads);
                   },
                   1, 1};
}

Extractor make_file_extractor(const std::string& path) {
  Extractor extractor;
  extractor.tag = "file:" + path;
  extractor.extract = [path](const ClipSet& clips) {
    const FeatureMatrix file = read_features(path);
    if (!file.has_ids()) {
      fail(ErrorKind::IdMismatch, "feature file '" + path + "' has no ids to align with clips");
    }
    std::unordered_map<std::string, Eigen::Index> row_of;
    for (std::size_t i = 0; i < file.ids.size(); ++i) {
      row_of.emplace(file.ids[i], static_cast<Eigen::Index>(i));
    }
    std::vector<std::string> missing;
    for (const Clip& clip : clips.clips) {
      if (!row_of.contains(clip.id)) missing.push_back(clip.id);
    }
    if (!missing.empty()) {
      std::ostringstream msg;
      msg << "feature file '" << path << "' lacks ids:";
      for (const auto& id : missing) msg << ' ' << id;
      fail(ErrorKind::IdMismatch, msg.str());
    }
    FeatureMatrix out;
    out.extractor_tag = file.extractor_tag;
    out.ids = clips.ids();
    out.data.resize(static_cast<Eigen::Index>(clips.size()), file.dim());
    for (std::size_t i = 0; i < clips.size(); ++i) {
      out.data.row(static_cast<Eigen::Index>(i)) = file.data.row(row_of.at(clips.clips[i].id));
    }
    return out;
  };
  return extractor;
}

ExtractorRegistry ExtractorRegistry::with_defaults(std::size_t threads) {
  ExtractorRegistry registry;
  registry.register_extractor(make_toy_extractor(ToyExtractorConfig{}, threads));
  registry.register_extractor(make_toy_frame_extractor(ToyFrameConfig{}, threads));
  return registry;
}

void ExtractorRegistry::register_extractor(Extractor extractor) {
  if (extractor.tag.empty() || extractor.tag.starts_with("file:")) {
    fail(ErrorKind::InvalidArgument, "invalid extractor tag '" + extractor.tag + "'");
  }
  if (extractors_.contains(extractor.tag)) {
    fail(ErrorKind::DuplicateTag, "extractor '" + extractor.tag + "' is already registered");
  }
  const std::string tag = extractor.tag;
  extractors_.emplace(tag, std::move(extractor));
}

void ExtractorRegistry::register_extractor(const std::string& tag,
                                           std::function<FeatureMatrix(const ClipSet&)> fn) {
  register_extractor(Extractor{tag, std::move(fn), 1, 0});
}

Extractor ExtractorRegistry::resolve(const std::string& tag) const {
  if (tag.starts_with("file:")) return make_file_extractor(tag.substr(5));
  const auto it = extractors_.find(tag);
  if (it == extractors_.end()) {
    fail(ErrorKind::ExtractorUnavailable, "no extractor registered as '" + tag + "'");
  }
  return it->second;
}

bool ExtractorRegistry::contains(const std::string& tag) const {
  return tag.starts_with("file:") || extractors_.contains(tag);
}

std::vector<std::string> ExtractorRegistry::tags() const {
  std::vector<std::string> out;
  for (const auto& [tag, _] : extractors_) out.push_back(tag);
  return out;
}

}  // namespace fvdlens
