// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "fvdlens/frechet.hpp"

namespace fvdlens {

// Binary feature file, all integers little-endian:
//
//   offset  size  field
//   0       4     magic "FVDF"
//   4       4     u32 format_version (1)
//   8       4     u32 dtype (1 = f32, 2 = f64)
//   12      8     u64 rows
//   20      4     u32 dim
//   24      1     u8 has_ids (0 or 1)
//   25      ...   if has_ids: rows x (u32 byte length, UTF-8 bytes)
//           ...   u32 tag byte length, UTF-8 extractor tag
//           ...   rows * dim values, row-major, IEEE-754 little-endian
//
// The file ends exactly after the payload.

inline constexpr std::uint32_t kFeatureFormatVersion = 1;

enum class FeatureDtype : std::uint32_t { F32 = 1, F64 = 2 };

std::vector<std::uint8_t> encode_features(const FeatureMatrix& features,
                                          FeatureDtype dtype = FeatureDtype::F64);

/// Parses a feature file image. f32 payloads are promoted to f64.
/// Errors: BadMagic, UnsupportedVersion, TruncatedPayload, IdCountMismatch,
/// NonFiniteInput.
FeatureMatrix decode_features(std::span<const std::uint8_t> bytes);

/// Writes through a temporary file and rename so readers never see a partial file.
void write_features(const FeatureMatrix& features, const std::filesystem::path& path,
                    FeatureDtype dtype = FeatureDtype::F64);
FeatureMatrix read_features(const std::filesystem::path& path);

/// Whole-file helpers shared by the I/O modules.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace fvdlens
