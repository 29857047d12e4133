// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fvdlens/clip.hpp"
#include "fvdlens/frechet.hpp"

namespace fvdlens {

/// Maps a clip set to one feature row per clip, ids = clip ids.
struct Extractor {
  std::string tag;
  std::function<FeatureMatrix(const ClipSet&)> extract;
  std::size_t min_frames = 1;
  std::size_t max_frames = 0;  // 0 = no limit

  bool accepts(std::size_t frame_count) const {
    return frame_count >= min_frames && (max_frames == 0 || frame_count <= max_frames);
  }
  /// Throws ExtractorLengthUnsupported if `frame_count` is outside the range.
  void require_length(std::size_t frame_count) const;
};

// Toy extractor: a deterministic stand-in for a pretrained video network.
// Per clip it computes a content block (the G x G grayscale downsample
// averaged over frames) and a temporal block (mean absolute difference of
// consecutive downsamples), then applies a fixed random orthonormal
// projection to each block separately.
struct ToyExtractorConfig {
  int patch_grid = 8;
  bool include_temporal_block = true;
  std::uint64_t projection_seed = 0;
  int output_dim = 128;

  void validate() const;
  /// "toy-v1-<D>" for the default grid/seed with the temporal block; other
  /// settings append "-g<G>", "-notemp", "-p<seed>".
  std::string tag() const;
  /// Output dims given to the content and temporal blocks.
  int content_dims() const;
  int temporal_dims() const;
};

struct ToyBlocks {
  Vector content;   // G*G, values in [0, 1]
  Vector temporal;  // G*G, zero for frozen or single-frame clips
};

/// Grayscale via (77 R + 150 G + 29 B) >> 8.
std::vector<std::uint8_t> to_grayscale(const Frame& frame);

/// Block-average of the grayscale frame on a G x G grid, scaled to [0, 1].
Vector downsample_gray(const Frame& frame, int grid);

ToyBlocks toy_blocks(const Clip& clip, int grid);

/// Projection matrix for one block: rows orthonormal when out_dim <= in_dim,
/// columns orthonormal otherwise. Deterministic in (seed, stream).
Matrix toy_projection(int out_dim, int in_dim, std::uint64_t seed, std::uint64_t stream);

FeatureMatrix toy_extract(const ClipSet& clips, const ToyExtractorConfig& config = {},
                          std::size_t threads = 1);

Extractor make_toy_extractor(const ToyExtractorConfig& config = {}, std::size_t threads = 1);

// Frame-level toy extractor for FID. Per frame: the G x G grayscale block
// means plus the G x G block means of |4-neighbour Laplacian| (detail
// energy), each block projected like the video extractor. Detail energy
// drops under blur and resampling, which gives frame quality a direction
// in feature space.
struct ToyFrameConfig {
  int patch_grid = 4;
  std::uint64_t projection_seed = 0;
  int output_dim = 32;

  void validate() const;
  /// "toy-frame-v1-<D>", with "-g<G>" / "-p<seed>" for non-default settings.
  std::string tag() const;
};

/// Block-mean |Laplacian| of the grayscale frame (reflected border), in [0, 4].
Vector detail_energy(const Frame& frame, int grid);

/// One row per input clip; each clip must hold exactly one frame.
FeatureMatrix toy_frame_extract(const ClipSet& frames, const ToyFrameConfig& config = {},
                                std::size_t threads = 1);

Extractor make_toy_frame_extractor(const ToyFrameConfig& config = {}, std::size_t threads = 1);

/// Extractor backed by a feature file; rows are returned in clip-set order,
/// matched by id. Throws IdMismatch listing ids absent from the file.
Extractor make_file_extractor(const std::string& path);

class ExtractorRegistry {
 public:
  /// Registry holding toy-v1-128 (video) and toy-frame-v1-32 (frames).
  static ExtractorRegistry with_defaults(std::size_t threads = 1);

  /// Throws DuplicateTag.
  void register_extractor(Extractor extractor);
  void register_extractor(const std::string& tag,
                          std::function<FeatureMatrix(const ClipSet&)> fn);

  /// Tags starting with "file:" resolve to make_file_extractor(rest).
  /// Throws ExtractorUnavailable for unknown tags.
  Extractor resolve(const std::string& tag) const;
  bool contains(const std::string& tag) const;
  std::vector<std::string> tags() const;

 private:
  std::map<std::string, Extractor> extractors_;
};

}  // namespace fvdlens
