// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fvdlens/clip.hpp"

namespace fvdlens {

// A clip set on disk is a directory holding manifest.json plus one frame
// directory per clip, frames named %04d.png starting at 0001:
//
//   {
//     "name": "ucf-subset",
//     "clips": [
//       {"id": "v_0001", "path": "v_0001", "frame_count": 16,
//        "height": 128, "width": 128, "channels": 3,
//        "checksum": "sha256:<hex of the concatenated PNG file bytes>"}
//     ]
//   }
//
// "checksum" is optional on load.

struct ManifestEntry {
  std::string id;
  std::string path;  // relative to the manifest directory
  std::size_t frame_count = 0;
  int height = 0;
  int width = 0;
  int channels = 0;
  std::optional<std::string> checksum;
};

struct DatasetManifest {
  std::string name;
  std::vector<ManifestEntry> clips;
};

inline constexpr const char* kManifestFileName = "manifest.json";

DatasetManifest parse_manifest(const std::string& json_text);
std::string serialize_manifest(const DatasetManifest& manifest);

/// Accepts a manifest file or a directory containing manifest.json.
std::filesystem::path resolve_manifest_path(const std::filesystem::path& path);

DatasetManifest read_manifest(const std::filesystem::path& manifest_path);

/// Loads clips in manifest order. Errors: MissingFrame (naming clip id and
/// frame index), DimensionMismatch, ChecksumMismatch, IoError.
ClipSet load_clipset(const std::filesystem::path& manifest_path);

/// Writes frames and manifest.json (with checksums) under `directory`.
/// Returns the manifest that was written.
DatasetManifest save_clipset(const ClipSet& clips, const std::filesystem::path& directory,
                             const std::string& name);

/// Deterministic PNG encoding (fixed compression settings, no ancillary chunks).
std::vector<std::uint8_t> encode_png(const Frame& frame);
Frame decode_png(std::span<const std::uint8_t> bytes, const std::string& context);

std::string frame_file_name(std::size_t index);  // 0 -> "0001.png"
std::string sha256_hex(std::span<const std::uint8_t> bytes);

}  // namespace fvdlens
