// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fvdlens/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fvdlens/error.hpp"
#include "fvdlens/report_format.hpp"

namespace fvdlens {

namespace {

FeatureMatrix pooled_frame_features(const ClipSet& clips, const Extractor& frame_extractor) {
  frame_extractor.require_length(1);
  return frame_extractor.extract(frames_as_clips(clips));
}

FeatureMatrix video_features(const ClipSet& clips, const Extractor& extractor) {
  for (const Clip& clip : clips.clips) extractor.require_length(clip.frame_count());
  return extractor.extract(clips);
}

double mean_of(const std::vector<SensitivityLevel>& rows, double SensitivityLevel::*field) {
  double sum = 0.0;
  for (const auto& row : rows) sum += row.*field;
  return sum / static_cast<double>(rows.size());
}

}  // namespace

SensitivityReport run_sensitivity(const ClipSet& ref_clips, DistortionFamily family,
                                  const std::vector<int>& levels, std::uint64_t seed,
                                  const Extractor& video_extractor,
                                  const Extractor& frame_extractor, const SeverityTable& table,
                                  std::size_t threads) {
  ref_clips.validate();
  table.validate();
  if (levels.empty()) fail(ErrorKind::InvalidArgument, "no severity levels requested");
  if (!video_extractor.extract) {
    fail(ErrorKind::ExtractorUnavailable, "video extractor is not callable");
  }
  if (!frame_extractor.extract) {
    fail(ErrorKind::ExtractorUnavailable, "frame extractor is not callable");
  }

  SensitivityReport report;
  report.family = family;
  report.video_extractor_tag = video_extractor.tag;
  report.frame_extractor_tag = frame_extractor.tag;
  report.severity_table = table;
  report.seed = seed;
  report.clip_count = ref_clips.size();
  for (const Clip& clip : ref_clips.clips) report.frame_count += clip.frame_count();

  const GaussianStats ref_video = fit_gaussian(video_features(ref_clips, video_extractor));
  const GaussianStats ref_frames = fit_gaussian(pooled_frame_features(ref_clips, frame_extractor));

  for (int level : levels) {
    SensitivityLevel row;
    row.level = level;
    for (DistortionMode mode : {DistortionMode::Spatial, DistortionMode::Spatiotemporal}) {
      const DistortionSpec spec{family, level, mode, seed};
      const ClipSet distorted = distort_clipset(ref_clips, spec, table, threads);
      const double fvd =
          frechet_distance(ref_video, fit_gaussian(video_features(distorted, video_extractor)))
              .value;
      const double fid =
          frechet_distance(ref_frames,
                           fit_gaussian(pooled_frame_features(distorted, frame_extractor)))
              .value;
      if (mode == DistortionMode::Spatial) {
        row.fvd_spatial = fvd;
        row.fid_spatial = fid;
      } else {
        row.fvd_spatiotemporal = fvd;
        row.fid_spatiotemporal = fid;
      }
    }
    row.fvd_delta_pct = percent_change(row.fvd_spatial, row.fvd_spatiotemporal);
    row.fid_delta_pct = percent_change(row.fid_spatial, row.fid_spatiotemporal);
    report.levels.push_back(row);
  }

  SensitivityLevel& avg = report.average;
  avg.level = 0;
  avg.fid_spatial = mean_of(report.levels, &SensitivityLevel::fid_spatial);
  avg.fid_spatiotemporal = mean_of(report.levels, &SensitivityLevel::fid_spatiotemporal);
  avg.fvd_spatial = mean_of(report.levels, &SensitivityLevel::fvd_spatial);
  avg.fvd_spatiotemporal = mean_of(report.levels, &SensitivityLevel::fvd_spatiotemporal);
  avg.fid_delta_pct = percent_change(avg.fid_spatial, avg.fid_spatiotemporal);
  avg.fvd_delta_pct = percent_change(avg.fvd_spatial, avg.fvd_spatiotemporal);
  return report;
}

NullSpaceProbeReport run_null_space_probe(const FeatureMatrix& ref, const FeatureMatrix& candidates,
                                          const ResampleConfig& config, bool frozen) {
  NullSpaceProbeReport report;
  report.frozen = frozen;
  report.extractor_tag = candidates.extractor_tag;
  report.ref_count = static_cast<std::size_t>(ref.rows());
  report.candidate_count = static_cast<std::size_t>(candidates.rows());
  const auto expected = static_cast<std::size_t>(config.candidate_multiple) *
                        static_cast<std::size_t>(config.sample_size);
  if (report.candidate_count != expected) {
    std::ostringstream msg;
    msg << "candidate count " << report.candidate_count << " != candidate_multiple "
        << config.candidate_multiple << " x sample_size " << config.sample_size;
    report.warning = msg.str();
  }
  report.resample = probe_null_space(ref, candidates, config);
  return report;
}

NullSpaceProbeReport run_null_space_probe(const ClipSet& ref_clips, const ClipSet& candidate_clips,
                                          const ResampleConfig& config,
                                          const Extractor& video_extractor, bool freeze) {
  ref_clips.validate();
  candidate_clips.validate();
  const ClipSet candidates = freeze ? freeze_clipset(candidate_clips) : candidate_clips;
  const FeatureMatrix ref_features = video_features(ref_clips, video_extractor);
  const FeatureMatrix cand_features = video_features(candidates, video_extractor);
  NullSpaceProbeReport report = run_null_space_probe(ref_features, cand_features, config, freeze);
  report.extractor_tag = video_extractor.tag;
  return report;
}

std::vector<std::size_t> ChunkSchedule::resolve(std::size_t total_frames) const {
  if (chunk_length == 0) fail(ErrorKind::InvalidArgument, "chunk_length must be >= 1");
  std::vector<std::size_t> out;
  if (offsets.empty()) {
    if (stride == 0) fail(ErrorKind::InvalidArgument, "stride must be >= 1");
    for (std::size_t off = 0; off + chunk_length <= total_frames; off += stride) {
      out.push_back(off);
    }
    if (out.empty()) {
      std::ostringstream msg;
      msg << "videos of " << total_frames << " frames are shorter than one chunk of "
          << chunk_length;
      fail(ErrorKind::ChunkOutOfRange, msg.str());
    }
    return out;
  }
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    if (i > 0 && offsets[i] <= offsets[i - 1]) {
      fail(ErrorKind::InvalidArgument, "chunk offsets must be strictly increasing");
    }
    if (offsets[i] + chunk_length > total_frames) {
      std::ostringstream msg;
      msg << "chunk [" << offsets[i] << ", " << offsets[i] + chunk_length
          << ") exceeds video length " << total_frames;
      fail(ErrorKind::ChunkOutOfRange, msg.str());
    }
  }
  return offsets;
}

LongVideoReport run_long_video(const ClipSet& ref_clips, const ClipSet& gen_clips,
                               const ChunkSchedule& schedule, const Extractor& video_extractor,
                               bool full_length) {
  ref_clips.validate();
  gen_clips.validate();
  std::size_t total = ref_clips.clips.front().frame_count();
  for (const ClipSet* set : {&ref_clips, &gen_clips}) {
    for (const Clip& clip : set->clips) total = std::min(total, clip.frame_count());
  }

  LongVideoReport report;
  report.total_frames = total;
  report.extractor_tag = video_extractor.tag;
  report.schedule = schedule;
  const auto offsets = schedule.resolve(total);
  video_extractor.require_length(schedule.chunk_length);

  for (std::size_t offset : offsets) {
    const FeatureMatrix ref =
        video_extractor.extract(slice_frames(ref_clips, offset, schedule.chunk_length));
    const FeatureMatrix gen =
        video_extractor.extract(slice_frames(gen_clips, offset, schedule.chunk_length));
    const FrechetResult r = compute_fvd(ref, gen);
    report.chunks.push_back({offset, offset + schedule.chunk_length, r.value, r.mean_term,
                             r.trace_term, std::nullopt});
  }
  for (ChunkRecord& chunk : report.chunks) {
    chunk.change_pct = percent_change(report.chunks.front().fvd, chunk.fvd);
  }

  if (full_length) {
    video_extractor.require_length(total);
    const FeatureMatrix ref = video_extractor.extract(slice_frames(ref_clips, 0, total));
    const FeatureMatrix gen = video_extractor.extract(slice_frames(gen_clips, 0, total));
    report.full_length_fvd = compute_fvd(ref, gen).value;
  }
  return report;
}

// ---- serialization ---------------------------------------------------------

using nlohmann::json;

json to_json(const FrechetResult& result) {
  return json{{"value", result.value},
              {"mean_term", result.mean_term},
              {"trace_term", result.trace_term},
              {"clamped", result.clamped}};
}

json to_json(const SeverityTable& table) {
  json elastic = json::array();
  json blur = json::array();
  for (int i = 0; i < kSeverityLevels; ++i) {
    elastic.push_back({{"level", i + 1},
                       {"alpha", table.elastic[i].alpha},
                       {"sigma", table.elastic[i].sigma}});
    blur.push_back({{"level", i + 1},
                    {"kernel_length", table.motion_blur[i].kernel_length},
                    {"angle_min", table.motion_blur[i].angle_min},
                    {"angle_max", table.motion_blur[i].angle_max}});
  }
  return json{{"elastic", elastic}, {"motion_blur", blur}};
}

json to_json(const ResampleConfig& config) {
  return json{{"steps", config.steps},
              {"lr0", config.lr0},
              {"decay_factor", config.decay_factor},
              {"decay_every", config.decay_every},
              {"sample_size", config.sample_size},
              {"candidate_multiple", config.candidate_multiple},
              {"seed", config.seed},
              {"listing_size", config.listing_size}};
}

namespace {

json level_json(const SensitivityLevel& row) {
  return json{{"level", row.level},
              {"fid_spatial", row.fid_spatial},
              {"fid_spatiotemporal", row.fid_spatiotemporal},
              {"fid_delta_pct", optional_number(row.fid_delta_pct)},
              {"fvd_spatial", row.fvd_spatial},
              {"fvd_spatiotemporal", row.fvd_spatiotemporal},
              {"fvd_delta_pct", optional_number(row.fvd_delta_pct)}};
}

std::string pct_cell(const std::optional<double>& pct, int decimals) {
  return pct ? format_percent(*pct, decimals) : "n/a";
}

// Two decimals for values of one or more; smaller values keep four significant digits.
std::string fixed2(double v) {
  if (std::abs(v) < 1.0) return format_number(v, 4);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

json to_json(const SensitivityReport& report) {
  json levels = json::array();
  for (const auto& row : report.levels) levels.push_back(level_json(row));
  json avg = level_json(report.average);
  avg.erase("level");
  return json{{"report_version", kReportVersion},
              {"kind", "sensitivity"},
              {"family", std::string(to_string(report.family))},
              {"levels", levels},
              {"average", avg},
              {"video_extractor", report.video_extractor_tag},
              {"frame_extractor", report.frame_extractor_tag},
              {"severity_table", to_json(report.severity_table)},
              {"seeds", {{"distortion", report.seed}}},
              {"clip_count", report.clip_count},
              {"frame_count", report.frame_count}};
}

json to_json(const NullSpaceProbeReport& report) {
  const ResampleReport& r = report.resample;
  json top = json::array();
  json bottom = json::array();
  for (std::size_t i = 0; i < r.top_ids.size(); ++i) {
    top.push_back({{"id", r.top_ids[i]}, {"probability", r.top_probabilities[i]}});
  }
  for (std::size_t i = 0; i < r.bottom_ids.size(); ++i) {
    bottom.push_back({{"id", r.bottom_ids[i]}, {"probability", r.bottom_probabilities[i]}});
  }
  return json{{"report_version", kReportVersion},
              {"kind", "null_space_probe"},
              {"extractor", report.extractor_tag},
              {"frozen", report.frozen},
              {"ref_count", report.ref_count},
              {"candidate_count", report.candidate_count},
              {"sample_size", r.sample_size},
              {"sampling_scheme", r.sampling_scheme},
              {"config", to_json(r.config)},
              {"fvd_uniform", r.fvd_uniform},
              {"fvd_weighted_initial", r.fvd_weighted_initial},
              {"fvd_weighted_objective", r.fvd_weighted_objective},
              {"fvd_star", r.fvd_star},
              {"change_pct", r.change_pct},
              {"objective_trace", r.objective_trace},
              {"top", top},
              {"bottom", bottom},
              {"warning", report.warning ? json(*report.warning) : json(nullptr)}};
}

json to_json(const LongVideoReport& report) {
  json chunks = json::array();
  for (const auto& c : report.chunks) {
    chunks.push_back({{"offset", c.offset},
                      {"end", c.end},
                      {"fvd", c.fvd},
                      {"mean_term", c.mean_term},
                      {"trace_term", c.trace_term},
                      {"change_pct", optional_number(c.change_pct)}});
  }
  return json{{"report_version", kReportVersion},
              {"kind", "long_video"},
              {"extractor", report.extractor_tag},
              {"total_frames", report.total_frames},
              {"chunk_length", report.schedule.chunk_length},
              {"stride", report.schedule.stride},
              {"chunks", chunks},
              {"full_length_fvd", optional_number(report.full_length_fvd)}};
}

std::vector<std::vector<std::string>> table_rows(const SensitivityReport& report) {
  std::vector<std::vector<std::string>> rows = {
      {"level", "FID_S", "FID_ST", "dFID", "FVD_S", "FVD_ST", "dFVD"}};
  auto add = [&](const std::string& label, const SensitivityLevel& r) {
    rows.push_back({label, fixed2(r.fid_spatial), fixed2(r.fid_spatiotemporal),
                    pct_cell(r.fid_delta_pct, 1), fixed2(r.fvd_spatial),
                    fixed2(r.fvd_spatiotemporal), pct_cell(r.fvd_delta_pct, 1)});
  };
  for (const auto& r : report.levels) add(std::to_string(r.level), r);
  add("average", report.average);
  return rows;
}

std::vector<std::vector<std::string>> table_rows(const NullSpaceProbeReport& report) {
  const ResampleReport& r = report.resample;
  return {{"metric", "value"},
          {"FVD (uniform subset)", fixed2(r.fvd_uniform)},
          {"weighted FVD (start)", fixed2(r.fvd_weighted_initial)},
          {"weighted FVD (final)", fixed2(r.fvd_weighted_objective)},
          {"FVD*", fixed2(r.fvd_star)},
          {"change", format_percent(r.change_pct, 1)},
          {"candidates", std::to_string(report.candidate_count)},
          {"sample size", std::to_string(r.sample_size)},
          {"frozen", report.frozen ? "yes" : "no"}};
}

std::vector<std::vector<std::string>> table_rows(const LongVideoReport& report) {
  std::vector<std::vector<std::string>> rows = {{"frames", "FVD", "change"}};
  for (const auto& c : report.chunks) {
    rows.push_back({std::to_string(c.offset) + "-" + std::to_string(c.end), fixed2(c.fvd),
                    pct_cell(c.change_pct, 2)});
  }
  if (report.full_length_fvd) {
    rows.push_back({"0-" + std::to_string(report.total_frames) + " (full)",
                    fixed2(*report.full_length_fvd), ""});
  }
  return rows;
}

std::vector<std::vector<std::string>> table_rows(const FrechetResult& result) {
  return {{"term", "value"},
          {"distance", fixed2(result.value)},
          {"mean term", fixed2(result.mean_term)},
          {"trace term", fixed2(result.trace_term)}};
}

}  // namespace fvdlens
