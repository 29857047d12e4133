// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fvdlens/cli.hpp"

#include <charconv>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <span>

#include "CLI11.hpp"
#include "fvdlens/clip_store.hpp"
#include "fvdlens/distortion.hpp"
#include "fvdlens/extractor.hpp"
#include "fvdlens/feature_file.hpp"
#include "fvdlens/parallel.hpp"
#include "fvdlens/protocols.hpp"
#include "fvdlens/report_format.hpp"
#include "json.hpp"

namespace fvdlens {

int exit_code_for(ErrorKind kind) {
  if (is_numeric(kind)) return kExitNumeric;
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::ConfigError:
    case ErrorKind::ExtractorUnavailable:
    case ErrorKind::DuplicateTag:
      return kExitUsage;
    default:
      return kExitIo;
  }
}

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kDefaultVideoExtractor = "toy-v1-128";
constexpr const char* kDefaultFrameExtractor = "toy-frame-v1-32";

// A CLI option that can also be set from a config file and echoed into
// run.json. Config values only apply when the flag was not given.
struct Binding {
  std::string key;
  CLI::Option* option = nullptr;
  std::function<void(const json&)> assign;
  std::function<json()> value;
};

class Scope {
 public:
  explicit Scope(CLI::App* app) : app_(app) {}

  template <typename T>
  CLI::Option* option(const std::string& key, T& var, const std::string& help) {
    CLI::Option* opt = app_->add_option("--" + key, var, help)->capture_default_str();
    add(key, opt, var);
    return opt;
  }

  CLI::Option* flag(const std::string& key, bool& var, const std::string& help) {
    CLI::Option* opt = app_->add_flag("--" + key, var, help);
    add(key, opt, var);
    return opt;
  }

  Binding* find(const std::string& key) {
    for (auto& b : bindings_) {
      if (b.key == key) return &b;
    }
    return nullptr;
  }

  void echo(json& out) const {
    for (const auto& b : bindings_) out[b.key] = b.value();
  }

  CLI::App* app() const { return app_; }

 private:
  template <typename T>
  void add(const std::string& key, CLI::Option* opt, T& var) {
    bindings_.push_back(
        {key, opt,
         [&var, key](const json& j) {
           try {
             var = j.get<T>();
           } catch (const json::exception& e) {
             fail(ErrorKind::ConfigError, "config key '" + key + "': " + e.what());
           }
         },
         [&var] { return json(var); }});
  }

  CLI::App* app_;
  std::vector<Binding> bindings_;
};

struct Globals {
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string output = "fvdlens_out";
  std::string format = "json";
  std::string config;
};

struct ComputeArgs {
  std::string ref;
  std::string gen;
  std::string extractor = kDefaultVideoExtractor;
};

struct DistortArgs {
  std::string input;
  std::string family = "elastic";
  int level = 1;
  std::string mode = "spatial";
};

struct FreezeArgs {
  std::string input;
};

struct ExtractArgs {
  std::string input;
  std::string extractor = kDefaultVideoExtractor;
  std::string dtype = "f64";
};

struct SensitivityArgs {
  std::string ref;
  std::string family = "elastic";
  std::string levels = "1..5";
  std::string extractor = kDefaultVideoExtractor;
  std::string frame_extractor = kDefaultFrameExtractor;
};

struct ProbeArgs {
  std::string ref;
  std::string pool;
  std::string candidates = "8x";
  Eigen::Index sample_size = 0;  // 0 = reference row count
  int steps = 300;
  double lr0 = 0.01;
  double decay_factor = 0.1;
  int decay_every = 100;
  std::size_t listing_size = 32;
  bool freeze = false;
  std::string extractor = kDefaultVideoExtractor;
};

struct ChunksArgs {
  std::string ref;
  std::string gen;
  std::size_t chunk_length = 16;
  std::size_t stride = 64;
  std::string offsets;
  bool full_length = false;
  std::string extractor = kDefaultVideoExtractor;
};

// What a command produced: the report and any extra files, relative to the
// output directory.
struct Outcome {
  json report;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> files;
};

struct Context {
  Globals globals;
  std::size_t threads = 1;
  fs::path output_dir;
  ExtractorRegistry registry;
};

void require(const std::string& value, const std::string& flag) {
  if (value.empty()) fail(ErrorKind::InvalidArgument, "missing required --" + flag);
}

std::size_t parse_count(std::string_view text, const std::string& what) {
  std::size_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) {
    fail(ErrorKind::InvalidArgument, "invalid " + what + " '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split_commas(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    parts.push_back(text.substr(start, comma - start));
    if (comma == std::string_view::npos) return parts;
    start = comma + 1;
  }
}

// "1..5", "1,3,5" or "2".
std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> levels;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const std::size_t lo = parse_count(std::string_view(text).substr(0, dots), "levels");
    const std::size_t hi = parse_count(std::string_view(text).substr(dots + 2), "levels");
    if (lo > hi) fail(ErrorKind::InvalidArgument, "empty level range '" + text + "'");
    for (std::size_t l = lo; l <= hi; ++l) levels.push_back(static_cast<int>(l));
    return levels;
  }
  for (std::string_view part : split_commas(text)) {
    levels.push_back(static_cast<int>(parse_count(part, "levels")));
  }
  return levels;
}

std::vector<std::size_t> parse_offsets(const std::string& text) {
  std::vector<std::size_t> offsets;
  if (text.empty()) return offsets;
  for (std::string_view part : split_commas(text)) {
    offsets.push_back(parse_count(part, "offsets"));
  }
  return offsets;
}

// "8x" or "8".
int parse_multiple(std::string text) {
  if (!text.empty() && (text.back() == 'x' || text.back() == 'X')) text.pop_back();
  const std::size_t m = parse_count(text, "candidate multiple");
  if (m < 1) fail(ErrorKind::InvalidArgument, "candidate multiple must be >= 1");
  return static_cast<int>(m);
}

bool is_clip_input(const std::string& path) {
  const fs::path p(path);
  return fs::is_directory(p) || p.extension() == ".json";
}

ClipSet load_clips(const std::string& path) {
  return load_clipset(resolve_manifest_path(path));
}

bool is_frame_extractor(const Extractor& extractor) { return extractor.max_frames == 1; }

// Frame extractors see every frame of every clip as its own row.
FeatureMatrix extract_with(const Extractor& extractor, const ClipSet& clips) {
  clips.validate();
  if (is_frame_extractor(extractor)) return extractor.extract(frames_as_clips(clips));
  for (const Clip& clip : clips.clips) extractor.require_length(clip.frame_count());
  return extractor.extract(clips);
}

FeatureMatrix load_features(const Context& ctx, const std::string& path,
                            const std::string& extractor_tag) {
  if (!is_clip_input(path)) return read_features(path);
  return extract_with(ctx.registry.resolve(extractor_tag), load_clips(path));
}

std::string sha256_file(const fs::path& path) {
  return "sha256:" + sha256_hex(read_file_bytes(path));
}

json with_header(json report, const std::string& kind) {
  report["kind"] = kind;
  report["report_version"] = kReportVersion;
  return report;
}

Outcome cmd_compute(const Context& ctx, const ComputeArgs& args) {
  require(args.ref, "ref");
  require(args.gen, "gen");
  const FeatureMatrix ref = load_features(ctx, args.ref, args.extractor);
  const FeatureMatrix gen = load_features(ctx, args.gen, args.extractor);
  if (ref.extractor_tag != gen.extractor_tag) {
    fail(ErrorKind::InvalidArgument, "extractor tags differ: '" + ref.extractor_tag + "' vs '" +
                                         gen.extractor_tag + "'");
  }
  const FrechetResult result = compute_fvd(ref, gen);
  const bool frames = ctx.registry.contains(ref.extractor_tag) &&
                      is_frame_extractor(ctx.registry.resolve(ref.extractor_tag));
  const std::string metric = frames ? "FID" : "FVD";

  json report = to_json(result);
  report["metric"] = metric;
  report["extractor_tag"] = ref.extractor_tag;
  report["ref_count"] = ref.rows();
  report["gen_count"] = gen.rows();
  report["dim"] = ref.dim();

  Outcome outcome;
  outcome.report = with_header(report, "compute");
  outcome.rows = {{"field", "value"},
                  {"metric", metric},
                  {"extractor", ref.extractor_tag},
                  {"value", format_number(result.value)},
                  {"mean term", format_number(result.mean_term)},
                  {"trace term", format_number(result.trace_term)},
                  {"clamped", result.clamped ? "true" : "false"},
                  {"ref rows", std::to_string(ref.rows())},
                  {"gen rows", std::to_string(gen.rows())},
                  {"dim", std::to_string(ref.dim())}};
  return outcome;
}

Outcome clipset_outcome(const ClipSet& clips, const fs::path& dir, const std::string& kind,
                        json extra) {
  std::size_t frames = 0;
  for (const Clip& clip : clips.clips) frames += clip.frame_count();
  extra["clip_count"] = clips.size();
  extra["frame_count"] = frames;
  extra["manifest"] = kManifestFileName;
  extra["manifest_sha256"] = sha256_file(dir / kManifestFileName);

  Outcome outcome;
  outcome.report = with_header(extra, kind);
  outcome.rows = {{"field", "value"},
                  {"clips", std::to_string(clips.size())},
                  {"frames", std::to_string(frames)},
                  {"manifest", (dir / kManifestFileName).string()}};
  outcome.files.push_back(kManifestFileName);
  return outcome;
}

std::string manifest_name(const std::string& input) {
  return read_manifest(resolve_manifest_path(input)).name;
}

Outcome cmd_distort(const Context& ctx, const DistortArgs& args) {
  require(args.input, "input");
  const DistortionSpec spec{parse_family(args.family), args.level, parse_mode(args.mode),
                            ctx.globals.seed};
  spec.validate();
  const ClipSet clips = load_clips(args.input);
  const SeverityTable table = SeverityTable::defaults();
  const ClipSet distorted = distort_clipset(clips, spec, table, ctx.threads);
  save_clipset(distorted, ctx.output_dir, manifest_name(args.input) + spec.id_suffix());
  return clipset_outcome(distorted, ctx.output_dir, "distort",
                         {{"family", to_string(spec.family)},
                          {"level", spec.severity},
                          {"mode", to_string(spec.mode)},
                          {"seed", spec.seed},
                          {"severity_table", to_json(table)}});
}

Outcome cmd_freeze(const Context& ctx, const FreezeArgs& args) {
  require(args.input, "input");
  const ClipSet frozen = freeze_clipset(load_clips(args.input));
  // Freezing is idempotent, so the name suffix is too.
  std::string name = manifest_name(args.input);
  if (!name.ends_with("_frozen")) name += "_frozen";
  save_clipset(frozen, ctx.output_dir, name);
  return clipset_outcome(frozen, ctx.output_dir, "freeze", json::object());
}

Outcome cmd_extract(const Context& ctx, const ExtractArgs& args) {
  require(args.input, "input");
  FeatureDtype dtype = FeatureDtype::F64;
  if (args.dtype == "f32") {
    dtype = FeatureDtype::F32;
  } else if (args.dtype != "f64") {
    fail(ErrorKind::InvalidArgument, "dtype must be f32 or f64");
  }
  const FeatureMatrix features =
      extract_with(ctx.registry.resolve(args.extractor), load_clips(args.input));
  const std::string file = "features.fvdf";
  write_features(features, ctx.output_dir / file, dtype);

  Outcome outcome;
  outcome.report = with_header({{"file", file},
                                {"file_sha256", sha256_file(ctx.output_dir / file)},
                                {"rows", features.rows()},
                                {"dim", features.dim()},
                                {"dtype", args.dtype},
                                {"extractor_tag", features.extractor_tag}},
                               "extract");
  outcome.rows = {{"field", "value"},
                  {"rows", std::to_string(features.rows())},
                  {"dim", std::to_string(features.dim())},
                  {"extractor", features.extractor_tag},
                  {"file", (ctx.output_dir / file).string()}};
  outcome.files.push_back(file);
  return outcome;
}

Outcome cmd_sensitivity(const Context& ctx, const SensitivityArgs& args) {
  require(args.ref, "ref");
  const DistortionFamily family = parse_family(args.family);
  const std::vector<int> levels = parse_levels(args.levels);
  const Extractor video = ctx.registry.resolve(args.extractor);
  const Extractor frame = ctx.registry.resolve(args.frame_extractor);
  const SensitivityReport report =
      run_sensitivity(load_clips(args.ref), family, levels, ctx.globals.seed, video, frame,
                      SeverityTable::defaults(), ctx.threads);
  return {to_json(report), table_rows(report), {}};
}

Outcome cmd_probe(const Context& ctx, ProbeArgs& args) {
  require(args.ref, "ref");
  require(args.pool, "pool");
  ResampleConfig config;
  config.steps = args.steps;
  config.lr0 = args.lr0;
  config.decay_factor = args.decay_factor;
  config.decay_every = args.decay_every;
  config.candidate_multiple = parse_multiple(args.candidates);
  config.seed = ctx.globals.seed;
  config.listing_size = args.listing_size;

  NullSpaceProbeReport report;
  const bool clips = is_clip_input(args.ref);
  if (clips != is_clip_input(args.pool)) {
    fail(ErrorKind::InvalidArgument, "--ref and --pool must both be clip sets or feature files");
  }
  if (clips) {
    const ClipSet ref = load_clips(args.ref);
    const ClipSet pool = load_clips(args.pool);
    if (args.sample_size == 0) args.sample_size = static_cast<Eigen::Index>(ref.size());
    config.sample_size = args.sample_size;
    report = run_null_space_probe(ref, pool, config, ctx.registry.resolve(args.extractor),
                                  args.freeze);
  } else {
    if (args.freeze) fail(ErrorKind::InvalidArgument, "--freeze needs clip-set inputs");
    const FeatureMatrix ref = read_features(args.ref);
    const FeatureMatrix pool = read_features(args.pool);
    if (args.sample_size == 0) args.sample_size = ref.rows();
    config.sample_size = args.sample_size;
    report = run_null_space_probe(ref, pool, config, false);
  }
  return {to_json(report), table_rows(report), {}};
}

Outcome cmd_chunks(const Context& ctx, const ChunksArgs& args) {
  require(args.ref, "ref");
  require(args.gen, "gen");
  ChunkSchedule schedule;
  schedule.chunk_length = args.chunk_length;
  schedule.stride = args.stride;
  schedule.offsets = parse_offsets(args.offsets);
  const LongVideoReport report =
      run_long_video(load_clips(args.ref), load_clips(args.gen), schedule,
                     ctx.registry.resolve(args.extractor), args.full_length);
  return {to_json(report), table_rows(report), {}};
}

std::string render(const Outcome& outcome, const std::string& format) {
  if (format == "table") return aligned_table(outcome.rows);
  if (format == "csv") return csv_table(outcome.rows);
  return canonical_json(outcome.report);
}

std::string report_file_name(const std::string& format) {
  if (format == "table") return "report.txt";
  if (format == "csv") return "report.csv";
  return "report.json";
}

void write_text(const fs::path& path, const std::string& text) {
  write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                   text.size()));
}

json read_config(const std::string& path) {
  const std::vector<std::uint8_t> bytes = read_file_bytes(path);
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ConfigError, "config " + path + ": " + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::ConfigError, "config " + path + " is not an object");
  return doc;
}

void write_error(std::ostream& err, const std::string& kind, const std::string& message,
                 int code) {
  err << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << "\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frechet video metric toolkit", "fvdlens"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(0, 1);
  app.fallthrough();

  Globals globals;
  Scope global_scope(&app);
  global_scope.option("seed", globals.seed, "Seed for every random draw");
  global_scope.option("threads", globals.threads,
                      "Worker threads; 0 falls back to FVDLENS_THREADS or all cores");
  global_scope.option("output", globals.output, "Output directory (reports, run.json)");
  global_scope.option("format", globals.format, "Report format")
      ->check(CLI::IsMember({"json", "table", "csv"}));
  app.add_option("--config", globals.config,
                 "JSON config or run.json; flags given on the command line win");

  std::map<std::string, std::unique_ptr<Scope>> scopes;
  auto scope = [&](const std::string& name, const std::string& help) -> Scope& {
    auto& s = scopes[name];
    s = std::make_unique<Scope>(app.add_subcommand(name, help));
    return *s;
  };

  ComputeArgs compute;
  {
    Scope& s = scope("compute", "Frechet distance between two feature files or clip sets");
    s.option("ref", compute.ref, "Reference features (.fvdf) or clip set");
    s.option("gen", compute.gen, "Generated features (.fvdf) or clip set");
    s.option("extractor", compute.extractor, "Extractor tag for clip-set inputs");
  }
  DistortArgs distort;
  {
    Scope& s = scope("distort", "Spatial or spatiotemporal corruption of a clip set");
    s.option("input", distort.input, "Input clip set");
    s.option("family", distort.family, "elastic | motion_blur");
    s.option("level", distort.level, "Severity level 1..5");
    s.option("mode", distort.mode, "spatial | spatiotemporal");
  }
  FreezeArgs freeze;
  {
    Scope& s = scope("freeze", "Repeat each clip's first frame");
    s.option("input", freeze.input, "Input clip set");
  }
  ExtractArgs extract;
  {
    Scope& s = scope("extract", "Extract features to a feature file");
    s.option("input", extract.input, "Input clip set");
    s.option("extractor", extract.extractor, "Extractor tag");
    s.option("dtype", extract.dtype, "f32 | f64");
  }
  SensitivityArgs sensitivity;
  {
    Scope& s = scope("sensitivity", "Spatial vs spatiotemporal FID/FVD per severity level");
    s.option("ref", sensitivity.ref, "Clean reference clip set");
    s.option("family", sensitivity.family, "elastic | motion_blur");
    s.option("levels", sensitivity.levels, "Severity levels, e.g. 1..5 or 1,3,5");
    s.option("extractor", sensitivity.extractor, "Video extractor tag");
    s.option("frame-extractor", sensitivity.frame_extractor, "Frame extractor tag");
  }
  ProbeArgs probe;
  {
    Scope& s = scope("probe", "Perceptual null-space probe by weighted resampling");
    s.option("ref", probe.ref, "Reference features or clip set");
    s.option("pool", probe.pool, "Candidate features or clip set");
    s.option("candidates", probe.candidates, "Intended pool size as a multiple, e.g. 8x");
    s.option("sample-size", probe.sample_size, "Resampled set size; 0 = reference count");
    s.option("steps", probe.steps, "Optimization steps");
    s.option("lr0", probe.lr0, "Initial learning rate");
    s.option("decay-factor", probe.decay_factor, "Learning-rate decay factor");
    s.option("decay-every", probe.decay_every, "Steps between decays");
    s.option("listing-size", probe.listing_size, "Top/bottom ids to list");
    s.flag("freeze", probe.freeze, "Freeze candidate clips first");
    s.option("extractor", probe.extractor, "Extractor tag for clip-set inputs");
  }
  ChunksArgs chunks;
  {
    Scope& s = scope("chunks", "Chunked FVD along long videos");
    s.option("ref", chunks.ref, "Reference clip set");
    s.option("gen", chunks.gen, "Generated clip set");
    s.option("chunk-length", chunks.chunk_length, "Frames per chunk");
    s.option("stride", chunks.stride, "Offset step between chunks");
    s.option("offsets", chunks.offsets, "Explicit offsets, e.g. 0,64,128");
    s.flag("full-length", chunks.full_length, "Also score whole clips");
    s.option("extractor", chunks.extractor, "Extractor tag");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    write_error(err, "UsageError", e.what(), kExitUsage);
    return kExitUsage;
  }

  std::string command;
  for (const auto& [name, s] : scopes) {
    if (s->app()->parsed()) command = name;
  }
  if (!globals.config.empty()) {
    json doc = read_config(globals.config);
    json flags = doc;
    // A run.json names its command and nests the flags under "config".
    if (doc.contains("command")) {
      const std::string recorded = doc.at("command").get<std::string>();
      if (!command.empty() && command != recorded) {
        fail(ErrorKind::ConfigError,
             "config records command '" + recorded + "', not '" + command + "'");
      }
      command = recorded;
      if (!doc.contains("config") || !doc.at("config").is_object()) {
        fail(ErrorKind::ConfigError, "run file has no config object");
      }
      flags = doc.at("config");
    }
    if (!scopes.contains(command)) fail(ErrorKind::ConfigError, "unknown command '" + command + "'");
    Scope& cmd_scope = *scopes.at(command);
    for (const auto& [key, value] : flags.items()) {
      Binding* b = global_scope.find(key);
      if (b == nullptr) b = cmd_scope.find(key);
      if (b == nullptr) fail(ErrorKind::ConfigError, "unknown config key '" + key + "'");
      if (b->option->count() == 0) b->assign(value);
    }
  }
  if (command.empty()) {
    out << app.help();
    fail(ErrorKind::InvalidArgument, "no command given");
  }
  if (globals.format != "json" && globals.format != "table" && globals.format != "csv") {
    fail(ErrorKind::InvalidArgument, "format must be json, table or csv");
  }

  Context ctx;
  ctx.globals = globals;
  ctx.threads = globals.threads > 0 ? globals.threads : default_thread_count();
  ctx.output_dir = globals.output;
  ctx.registry = ExtractorRegistry::with_defaults(ctx.threads);
  fs::create_directories(ctx.output_dir);

  Outcome outcome;
  if (command == "compute") outcome = cmd_compute(ctx, compute);
  if (command == "distort") outcome = cmd_distort(ctx, distort);
  if (command == "freeze") outcome = cmd_freeze(ctx, freeze);
  if (command == "extract") outcome = cmd_extract(ctx, extract);
  if (command == "sensitivity") outcome = cmd_sensitivity(ctx, sensitivity);
  if (command == "probe") outcome = cmd_probe(ctx, probe);
  if (command == "chunks") outcome = cmd_chunks(ctx, chunks);

  const std::string text = render(outcome, globals.format);
  const std::string report_file = report_file_name(globals.format);
  write_text(ctx.output_dir / report_file, text);
  out << text;

  // The sidecar echoes every resolved flag, so `--config run.json` replays
  // the run exactly.
  json config = json::object();
  global_scope.echo(config);
  config["threads"] = ctx.threads;
  scopes.at(command)->echo(config);
  json outputs = json::object();
  outputs[report_file] = sha256_file(ctx.output_dir / report_file);
  for (const std::string& file : outcome.files) {
    outputs[file] = sha256_file(ctx.output_dir / file);
  }
  const json run_record{{"tool", "fvdlens"},
                        {"version", kToolVersion},
                        {"report_version", kReportVersion},
                        {"command", command},
                        {"config", config},
                        {"seeds", {{"seed", globals.seed}}},
                        {"outputs", outputs}};
  write_text(ctx.output_dir / kRunFileName, canonical_json(run_record));
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run(args, out, err);
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    write_error(err, std::string(to_string(e.kind())), e.what(), code);
    return code;
  } catch (const fs::filesystem_error& e) {
    write_error(err, "IoError", e.what(), kExitIo);
    return kExitIo;
  } catch (const json::exception& e) {
    write_error(err, "ConfigError", e.what(), kExitUsage);
    return kExitUsage;
  } catch (const std::exception& e) {
    write_error(err, "InternalError", e.what(), kExitIo);
    return kExitIo;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace fvdlens
