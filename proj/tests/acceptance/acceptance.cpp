// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance runner. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Oracles are computed here, independently of
// the library code paths they check.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fvdlens/cli.hpp"
#include "fvdlens/clip_store.hpp"
#include "fvdlens/distortion.hpp"
#include "fvdlens/error.hpp"
#include "fvdlens/extractor.hpp"
#include "fvdlens/feature_file.hpp"
#include "fvdlens/frechet.hpp"
#include "fvdlens/protocols.hpp"
#include "fvdlens/report_format.hpp"
#include "fvdlens/resampler.hpp"
#include "fvdlens/rng.hpp"
#include "synthetic.hpp"

namespace fs = std::filesystem;
using namespace fvdlens;
using fvdlens::testing::features_from;
using fvdlens::testing::random_clip;
using fvdlens::testing::seeded_normal;
using fvdlens::testing::synthetic_clips;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) detail << "first failure: " << why << "; ";
    pass = pass && ok;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

GaussianStats stats_of(Vector mean, Matrix cov) {
  GaussianStats s;
  s.mean = std::move(mean);
  s.cov = std::move(cov);
  s.n_samples = 1;
  return s;
}

std::optional<ErrorKind> kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void one_dimensional(Outcome& o) {
  CounterRng rng(derive_key(101, {}));
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mr = rng.uniform(-10, 10), mg = rng.uniform(-10, 10);
    const double sr = rng.uniform(0, 5), sg = rng.uniform(0, 5);
    const double oracle = (mr - mg) * (mr - mg) + (sr - sg) * (sr - sg);
    const FrechetResult r =
        frechet_distance(stats_of(Vector::Constant(1, mr), Matrix::Constant(1, 1, sr * sr)),
                         stats_of(Vector::Constant(1, mg), Matrix::Constant(1, 1, sg * sg)));
    worst = std::max(worst, std::abs(r.value - oracle));
  }
  o.require(worst <= 1e-9, "max error above 1e-9");
  o.detail << "200 cases, max |error| " << worst;
}

void diagonal(Outcome& o) {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CounterRng rng(derive_key(202, {seed}));
    Vector mr(8), mg(8), a(8), b(8);
    for (int i = 0; i < 8; ++i) {
      mr[i] = rng.uniform(-3, 3);
      mg[i] = rng.uniform(-3, 3);
      a[i] = rng.uniform(0, 4);
      b[i] = rng.uniform(0, 4);
    }
    double oracle = (mr - mg).squaredNorm();
    for (int i = 0; i < 8; ++i) oracle += std::pow(std::sqrt(a[i]) - std::sqrt(b[i]), 2);
    const FrechetResult r = frechet_distance(stats_of(mr, Matrix(a.asDiagonal())),
                                             stats_of(mg, Matrix(b.asDiagonal())));
    worst = std::max(worst, std::abs(r.value - oracle));
  }
  o.require(worst <= 1e-9, "max error above 1e-9");
  o.detail << "100 seeds D=8, max |error| " << worst;
}

void identity(Outcome& o) {
  double worst = 0.0;
  int rank_deficient = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Eigen::Index dim = seed % 2 == 0 ? 16 : 64;
    const Eigen::Index rows = seed % 3 == 0 ? 5 + static_cast<Eigen::Index>(seed) : 200;
    if (rows < dim) ++rank_deficient;
    Matrix x = seeded_normal(rows, dim, 300 + seed);
    x *= 1.0 + static_cast<double>(seed);
    const FeatureMatrix f = features_from(x);
    const double v = compute_fvd(f, f).value;
    o.require(v >= 0.0, "negative result");
    worst = std::max(worst, v);
  }
  o.require(worst < 1e-6, "FVD(X, X) not below 1e-6");
  o.require(rank_deficient >= 5, "too few N < D cases");
  o.detail << "20 matrices (" << rank_deficient << " with N<D), max FVD " << worst;
}

void gradient(Outcome& o) {
  const auto start = Clock::now();
  double worst_rel = 0.0;
  int components = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Eigen::Index k = 8 + static_cast<Eigen::Index>(seed % 4) * 8;  // 8..32
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(seed % 7);      // 2..8
    const GaussianStats ref = fit_gaussian(features_from(seeded_normal(64, d, 400 + seed)));
    Matrix cand = seeded_normal(k, d, 500 + seed);
    cand.col(0).array() += 0.5;
    const FeatureMatrix c = features_from(cand);
    CounterRng rng(derive_key(600, {seed}));
    WeightVector w{Vector(k)};
    for (Eigen::Index i = 0; i < k; ++i) w.logits[i] = rng.normal();

    const Vector analytic = objective_gradient(ref, c, w);
    const double h = 1e-5;
    for (Eigen::Index i = 0; i < k; ++i) {
      WeightVector plus = w, minus = w;
      plus.logits[i] += h;
      minus.logits[i] -= h;
      const double fd =
          (weighted_fvd_objective(ref, c, plus) - weighted_fvd_objective(ref, c, minus)) /
          (2.0 * h);
      const double err = std::abs(analytic[i] - fd);
      const bool ok = err <= 1e-7 || err <= 1e-4 * std::abs(fd);
      o.require(ok, "component mismatch");
      if (err > 1e-7) worst_rel = std::max(worst_rel, err / std::abs(fd));
      ++components;
    }
  }
  const double elapsed = seconds_since(start);
  o.require(elapsed < 30.0, "runtime over 30 s");
  o.detail << "20 instances, " << components << " components, worst rel " << worst_rel
           << " beyond abs tol, " << elapsed << " s";
}

void optimizer_descent(Outcome& o) {
  double worst_rise = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Eigen::Index d = 4 + static_cast<Eigen::Index>(seed % 5);
    const GaussianStats ref = fit_gaussian(features_from(seeded_normal(256, d, 700 + seed)));
    Matrix cand = seeded_normal(128, d, 800 + seed);
    cand.bottomRows(64).col(0).array() += 2.0;
    const OptimizeResult r = optimize_weights(ref, features_from(cand), ResampleConfig{});
    o.require(r.objective_trace.size() == 301, "trace length is not steps + 1");
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
      worst_rise = std::max(worst_rise, r.objective_trace[i] - r.objective_trace[i - 1]);
    }
  }
  o.require(worst_rise <= 1e-6, "objective increased by more than 1e-6");
  o.detail << "10 instances, 300 steps, max per-step rise " << worst_rise;
}

void planted_recovery(Outcome& o) {
  const auto start = Clock::now();
  const FeatureMatrix ref = features_from(seeded_normal(512, 8, 900));
  Matrix cand = seeded_normal(512, 8, 901);
  cand.bottomRows(384).col(0).array() += 3.0;
  const FeatureMatrix c = features_from(cand);
  ResampleConfig config;
  config.sample_size = 512;
  config.seed = 1;
  const ResampleReport r = probe_null_space(ref, c, config);
  const double mass = r.weights.probabilities().head(128).sum();
  const double elapsed = seconds_since(start);
  o.require(r.fvd_star <= 0.5 * r.fvd_uniform, "FVD* above half the uniform FVD");
  o.require(mass >= 0.75, "matching mass below 0.75");
  o.require(elapsed < 60.0, "runtime over 60 s");
  o.detail << "FVD* " << r.fvd_star << " vs uniform " << r.fvd_uniform << " ("
           << format_percent(r.change_pct, 1) << "), matching mass " << mass << ", " << elapsed
           << " s";
}

void toy_sensitivity(Outcome& o) {
  const auto start = Clock::now();
  const std::size_t threads = worker_count();
  const ClipSet clips = synthetic_clips(64, 16, 64, 64, 42);
  const ExtractorRegistry registry = ExtractorRegistry::with_defaults(threads);
  const Extractor video = registry.resolve("toy-v1-128");
  const Extractor frame = registry.resolve("toy-frame-v1-32");
  double worst_fid = 0.0;
  double min_fvd_delta = 1e300;
  for (DistortionFamily family : {DistortionFamily::Elastic, DistortionFamily::MotionBlur}) {
    const SensitivityReport r = run_sensitivity(clips, family, {1, 2, 3, 4, 5}, 7, video, frame,
                                                SeverityTable::defaults(), threads);
    o.detail << to_string(family) << " dFVD";
    for (const SensitivityLevel& row : r.levels) {
      o.require(row.fvd_spatiotemporal > row.fvd_spatial,
                std::string(to_string(family)) + " level " + std::to_string(row.level) + " FVD_ST <= FVD_S");
      const double fid_pct =
          (row.fid_spatiotemporal - row.fid_spatial) / row.fid_spatial * 100.0;
      o.require(std::abs(fid_pct) < 2.0, std::string(to_string(family)) + " level " +
                                             std::to_string(row.level) + " |dFID| >= 2%");
      worst_fid = std::max(worst_fid, std::abs(fid_pct));
      const double fvd_pct =
          (row.fvd_spatiotemporal - row.fvd_spatial) / row.fvd_spatial * 100.0;
      min_fvd_delta = std::min(min_fvd_delta, fvd_pct);
      o.detail << " " << format_percent(fvd_pct, 1);
    }
    o.detail << "; ";
  }
  const double elapsed = seconds_since(start);
  o.require(elapsed < 180.0, "runtime over 3 min");
  o.detail << "min dFVD " << format_percent(min_fvd_delta, 1) << ", max |dFID| " << worst_fid
           << "%, " << elapsed << " s";
}

void frozen_invariant(Outcome& o) {
  std::size_t nonzero = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int h = 8 + static_cast<int>(seed % 5) * 8;
    const int w = 8 + static_cast<int>(seed % 3) * 12;
    const std::size_t frames = 2 + seed % 9;
    const int channels = seed % 4 == 0 ? 1 : 3;
    const ClipSet set{{random_clip("c" + std::to_string(seed), frames, h, w, channels, seed)}};
    const ClipSet frozen = freeze_clipset(set);
    const ToyBlocks blocks = toy_blocks(frozen.clips[0], 8);
    for (Eigen::Index i = 0; i < blocks.temporal.size(); ++i) {
      if (blocks.temporal[i] != 0.0) ++nonzero;
    }
    o.require(freeze_clipset(frozen) == frozen, "freeze is not idempotent");
    // The original random clip must have motion, or the check is vacuous.
    o.require(toy_blocks(set.clips[0], 8).temporal.cwiseAbs().maxCoeff() > 0.0,
              "unfrozen clip has no temporal signal");
  }
  o.require(nonzero == 0, "temporal block has nonzero entries");
  o.detail << "50 clips, nonzero temporal entries " << nonzero;
}

void distortion_identities(Outcome& o) {
  const ClipSet clips = synthetic_clips(4, 6, 24, 24, 11);
  SeverityTable table = SeverityTable::defaults();
  for (auto& level : table.motion_blur) level.kernel_length = 1;
  for (auto& level : table.elastic) level.alpha = 0.0;
  int identity_runs = 0;
  for (DistortionFamily family : {DistortionFamily::Elastic, DistortionFamily::MotionBlur}) {
    for (DistortionMode mode : {DistortionMode::Spatial, DistortionMode::Spatiotemporal}) {
      for (int level = 1; level <= kSeverityLevels; ++level) {
        const ClipSet out = distort_clipset(clips, {family, level, mode, 3}, table);
        for (std::size_t i = 0; i < clips.size(); ++i) {
          o.require(out.clips[i].frames == clips.clips[i].frames, "identity changed pixels");
        }
        ++identity_runs;
      }
    }
  }
  const ClipSet frozen = freeze_clipset(synthetic_clips(4, 6, 24, 24, 12));
  int frozen_runs = 0;
  for (DistortionFamily family : {DistortionFamily::Elastic, DistortionFamily::MotionBlur}) {
    for (int level = 1; level <= kSeverityLevels; ++level) {
      const ClipSet out = distort_clipset(frozen, {family, level, DistortionMode::Spatial, 5});
      for (const Clip& clip : out.clips) {
        for (const Frame& f : clip.frames) {
          o.require(f == clip.frames.front(), "spatial mode unfroze a clip");
        }
      }
      ++frozen_runs;
    }
  }
  o.detail << identity_runs << " identity runs bit-exact, " << frozen_runs
           << " frozen spatial runs stay frozen";
}

void report_arithmetic(Outcome& o) {
  const std::string formatted = format_percent(*percent_change(1460.18, 1705.27), 1);
  o.require(formatted == "+16.8%", "1460.18 -> 1705.27 formats as " + formatted);

  const ClipSet clips = synthetic_clips(8, 6, 24, 24, 13);
  const ExtractorRegistry registry = ExtractorRegistry::with_defaults();
  const SensitivityReport r =
      run_sensitivity(clips, DistortionFamily::MotionBlur, {1, 3, 5}, 2,
                      registry.resolve("toy-v1-128"), registry.resolve("toy-frame-v1-32"));
  // Recompute from the serialized report, the form users consume.
  const nlohmann::json j = nlohmann::json::parse(canonical_json(to_json(r)));
  double worst = 0.0;
  auto check = [&](const nlohmann::json& row) {
    for (const char* metric : {"fid", "fvd"}) {
      const std::string m = metric;
      const double s = row.at(m + "_spatial").get<double>();
      const double st = row.at(m + "_spatiotemporal").get<double>();
      const double pct = row.at(m + "_delta_pct").get<double>();
      worst = std::max(worst, std::abs(pct - (st - s) / s * 100.0));
    }
  };
  for (const auto& row : j.at("levels")) check(row);
  check(j.at("average"));
  o.require(worst <= 0.05, "delta_pct off by more than 0.05 points");
  o.detail << "1460.18 -> 1705.27 is " << formatted << ", max recompute error " << worst
           << " points";
}

void feature_file_round_trip(Outcome& o, const fs::path& dir) {
  int round_trips = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    CounterRng rng(derive_key(1000, {seed}));
    const auto rows = static_cast<Eigen::Index>(1 + rng.below(20));
    const auto dim = static_cast<Eigen::Index>(1 + rng.below(16));
    const FeatureDtype dtype = rng.below(2) == 0 ? FeatureDtype::F32 : FeatureDtype::F64;
    FeatureMatrix f;
    f.data.resize(rows, dim);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index c = 0; c < dim; ++c) {
        const double v = rng.normal() * std::pow(10.0, rng.uniform(-6, 6));
        f.data(i, c) = dtype == FeatureDtype::F32 ? static_cast<double>(static_cast<float>(v)) : v;
      }
    }
    if (rng.below(2) == 0) {
      for (Eigen::Index i = 0; i < rows; ++i) f.ids.push_back("v" + std::to_string(i) + "_é");
    }
    f.extractor_tag = "tag-" + std::to_string(seed);
    const fs::path path = dir / ("f" + std::to_string(seed) + ".fvdf");
    write_features(f, path, dtype);
    const FeatureMatrix back = read_features(path);
    bool same = back.ids == f.ids && back.extractor_tag == f.extractor_tag &&
                back.rows() == rows && back.dim() == dim;
    for (Eigen::Index i = 0; same && i < rows; ++i) {
      for (Eigen::Index c = 0; c < dim; ++c) {
        same = same && std::bit_cast<std::uint64_t>(back.data(i, c)) ==
                           std::bit_cast<std::uint64_t>(f.data(i, c));
      }
    }
    o.require(same, "round trip " + std::to_string(seed) + " not bit-exact");
    fs::remove(path);
    ++round_trips;
  }

  const std::vector<std::uint8_t> good = encode_features(features_from(seeded_normal(5, 3, 1)));
  struct Case {
    std::string name;
    std::vector<std::uint8_t> bytes;
    ErrorKind expected;
  };
  std::vector<Case> cases;
  auto corrupt = [&](const std::string& name, ErrorKind kind, auto&& edit) {
    std::vector<std::uint8_t> b = good;
    edit(b);
    cases.push_back({name, std::move(b), kind});
  };
  corrupt("magic", ErrorKind::BadMagic, [](auto& b) { b[0] = 'X'; });
  corrupt("version", ErrorKind::UnsupportedVersion, [](auto& b) { b[4] = 9; });
  corrupt("dtype", ErrorKind::UnsupportedVersion, [](auto& b) { b[8] = 7; });
  corrupt("short payload", ErrorKind::TruncatedPayload, [](auto& b) { b.pop_back(); });
  corrupt("trailing bytes", ErrorKind::TruncatedPayload, [](auto& b) { b.push_back(0); });
  corrupt("cut header", ErrorKind::TruncatedPayload, [](auto& b) { b.resize(10); });
  corrupt("nan value", ErrorKind::NonFiniteInput, [](auto& b) {
    const auto nan = std::bit_cast<std::uint64_t>(std::numeric_limits<double>::quiet_NaN());
    for (int i = 0; i < 8; ++i) b[b.size() - 8 + i] = static_cast<std::uint8_t>(nan >> (8 * i));
  });
  for (const Case& c : cases) {
    const fs::path path = dir / "corrupt.fvdf";
    write_file_bytes(path, c.bytes);
    const auto got = kind_of([&] { read_features(path); });
    o.require(got == c.expected,
              c.name + " gave " + (got ? std::string(to_string(*got)) : "no error"));
  }
  o.detail << round_trips << " round trips bit-exact, " << cases.size()
           << " corruptions rejected with the expected kind";
}

void cli_determinism(Outcome& o, const fs::path& dir) {
  save_clipset(synthetic_clips(6, 8, 24, 24, 50), dir / "refs", "refs");
  save_clipset(distort_clipset(synthetic_clips(6, 8, 24, 24, 51),
                               {DistortionFamily::Elastic, 2, DistortionMode::Spatiotemporal, 1}),
               dir / "gens", "gens");
  save_clipset(synthetic_clips(3, 40, 16, 16, 52), dir / "long", "long");
  const std::string refs = (dir / "refs").string();
  const std::string gens = (dir / "gens").string();
  const std::string long_clips = (dir / "long").string();
  std::ostringstream sink;
  o.require(run_cli({"extract", "--input", refs, "--output", (dir / "feat").string()}, sink,
                    sink) == kExitOk,
            "feature extraction failed");
  const std::string features = (dir / "feat" / "features.fvdf").string();

  const std::vector<std::vector<std::string>> commands = {
      {"compute", "--ref", refs, "--gen", gens},
      {"distort", "--input", refs, "--family", "elastic", "--level", "4", "--seed", "3"},
      {"freeze", "--input", gens},
      {"extract", "--input", gens, "--dtype", "f32"},
      {"sensitivity", "--ref", refs, "--family", "motion_blur", "--levels", "1,5", "--format",
       "csv"},
      {"probe", "--ref", features, "--pool", features, "--steps", "30", "--seed", "4"},
      {"chunks", "--ref", long_clips, "--gen", long_clips, "--stride", "12", "--format", "table"},
  };
  int replayed = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const std::string& name = commands[i][0];
    const fs::path first = dir / ("run" + std::to_string(i) + "a");
    const fs::path second = dir / ("run" + std::to_string(i) + "b");
    std::vector<std::string> args = commands[i];
    args.insert(args.end(), {"--output", first.string()});
    std::ostringstream out_a, out_b, err;
    if (run_cli(args, out_a, err) != kExitOk) {
      o.require(false, name + " failed: " + err.str());
      continue;
    }
    if (run_cli({"--config", (first / kRunFileName).string(), "--output", second.string()},
                out_b, err) != kExitOk) {
      o.require(false, name + " replay failed: " + err.str());
      continue;
    }
    o.require(out_a.str() == out_b.str(), name + " stdout differs");
    std::size_t files = 0;
    for (const auto& entry : fs::recursive_directory_iterator(first)) {
      if (!entry.is_regular_file() || entry.path().filename() == kRunFileName) continue;
      const fs::path twin = second / fs::relative(entry.path(), first);
      o.require(fs::exists(twin) && slurp(entry.path()) == slurp(twin),
                name + " output " + entry.path().filename().string() + " differs");
      ++files;
    }
    o.require(files > 0, name + " wrote no outputs");
    ++replayed;
  }
  o.detail << replayed << "/" << commands.size() << " commands replayed byte-identically";
}

}  // namespace

int main() {
  const auto suite_start = Clock::now();
  const fs::path dir = fs::temp_directory_path() /
                       ("fvdlens_acceptance_" + std::to_string(Clock::now().time_since_epoch().count()));
  fs::remove_all(dir);
  fs::create_directories(dir);

  struct Criterion {
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria = {
      {"frechet_1d_closed_form", [](Outcome& o) {
         const auto start = Clock::now();
         one_dimensional(o);
         const double elapsed = seconds_since(start);
         o.require(elapsed < 1.0, "runtime over 1 s");
         o.detail << ", " << elapsed << " s";
       }},
      {"frechet_diagonal_closed_form", diagonal},
      {"frechet_identity", identity},
      {"gradient_vs_finite_differences", gradient},
      {"optimizer_descent", optimizer_descent},
      {"null_space_planted_recovery", planted_recovery},
      {"toy_temporal_sensitivity", toy_sensitivity},
      {"frozen_video_invariant", frozen_invariant},
      {"distortion_identities", distortion_identities},
      {"report_arithmetic", report_arithmetic},
      {"feature_file_round_trip", [&](Outcome& o) { feature_file_round_trip(o, dir); }},
      {"cli_determinism", [&](Outcome& o) { cli_determinism(o, dir); }},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << ": " << o.detail.str() << std::endl;
    if (!o.pass) ++failures;
  }

  const double total = seconds_since(suite_start);
  const bool fast = total < 300.0;
  std::cout << (fast ? "PASS " : "FAIL ") << "suite_runtime: " << total << " s (limit 300 s)"
            << std::endl;
  if (!fast) ++failures;

  fs::remove_all(dir);
  return failures == 0 ? 0 : 1;
}
