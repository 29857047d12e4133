// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fvdlens/clip.hpp"
#include "fvdlens/distortion.hpp"
#include "fvdlens/extractor.hpp"
#include "fvdlens/frechet.hpp"
#include "fvdlens/resampler.hpp"
#include "json.hpp"

namespace fvdlens {

// ---- temporal sensitivity ------------------------------------------------

struct SensitivityLevel {
  int level = 0;  // 0 marks the average row
  double fid_spatial = 0.0;
  double fid_spatiotemporal = 0.0;
  std::optional<double> fid_delta_pct;
  double fvd_spatial = 0.0;
  double fvd_spatiotemporal = 0.0;
  std::optional<double> fvd_delta_pct;
};

struct SensitivityReport {
  DistortionFamily family = DistortionFamily::Elastic;
  std::vector<SensitivityLevel> levels;
  SensitivityLevel average;
  std::string video_extractor_tag;
  std::string frame_extractor_tag;
  SeverityTable severity_table;
  std::uint64_t seed = 0;
  std::size_t clip_count = 0;
  std::size_t frame_count = 0;
};

/// For each level: spatial and spatiotemporal copies of ref_clips, video FVD
/// of each against the clean clips, and frame FID (all frames of a set
/// pooled) against the clean frames. The average row is the arithmetic mean
/// of the per-level absolute values with deltas recomputed from those means.
SensitivityReport run_sensitivity(const ClipSet& ref_clips, DistortionFamily family,
                                  const std::vector<int>& levels, std::uint64_t seed,
                                  const Extractor& video_extractor,
                                  const Extractor& frame_extractor,
                                  const SeverityTable& table = SeverityTable::defaults(),
                                  std::size_t threads = 1);

// ---- perceptual null space ------------------------------------------------

struct NullSpaceProbeReport {
  ResampleReport resample;
  bool frozen = false;
  std::string extractor_tag;
  std::size_t ref_count = 0;
  std::size_t candidate_count = 0;
  std::optional<std::string> warning;  // candidate count != multiple * sample_size
};

NullSpaceProbeReport run_null_space_probe(const ClipSet& ref_clips, const ClipSet& candidate_clips,
                                          const ResampleConfig& config,
                                          const Extractor& video_extractor, bool freeze);

/// Same pipeline from precomputed features.
NullSpaceProbeReport run_null_space_probe(const FeatureMatrix& ref, const FeatureMatrix& candidates,
                                          const ResampleConfig& config, bool frozen);

// ---- long videos -----------------------------------------------------------

struct ChunkSchedule {
  std::size_t chunk_length = 16;
  std::size_t stride = 64;
  std::vector<std::size_t> offsets;  // explicit offsets; empty = derive from stride

  /// Offsets for videos of `total_frames` frames. Throws ChunkOutOfRange if
  /// an explicit chunk does not fit or offsets are not strictly increasing.
  std::vector<std::size_t> resolve(std::size_t total_frames) const;
};

struct ChunkRecord {
  std::size_t offset = 0;
  std::size_t end = 0;
  double fvd = 0.0;
  double mean_term = 0.0;
  double trace_term = 0.0;
  std::optional<double> change_pct;  // vs chunk 0
};

struct LongVideoReport {
  std::vector<ChunkRecord> chunks;
  std::optional<double> full_length_fvd;
  std::size_t total_frames = 0;
  std::string extractor_tag;
  ChunkSchedule schedule;
};

LongVideoReport run_long_video(const ClipSet& ref_clips, const ClipSet& gen_clips,
                               const ChunkSchedule& schedule, const Extractor& video_extractor,
                               bool full_length);

// ---- serialization ---------------------------------------------------------

nlohmann::json to_json(const FrechetResult& result);
nlohmann::json to_json(const SeverityTable& table);
nlohmann::json to_json(const ResampleConfig& config);
nlohmann::json to_json(const SensitivityReport& report);
nlohmann::json to_json(const NullSpaceProbeReport& report);
nlohmann::json to_json(const LongVideoReport& report);

std::vector<std::vector<std::string>> table_rows(const SensitivityReport& report);
std::vector<std::vector<std::string>> table_rows(const NullSpaceProbeReport& report);
std::vector<std::vector<std::string>> table_rows(const LongVideoReport& report);
std::vector<std::vector<std::string>> table_rows(const FrechetResult& result);

}  // namespace fvdlens
