// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fvdlens/clip_store.hpp"

#include <openssl/evp.h>
#include <png.h>

#include <cstdio>
#include <cstring>
#include <memory>
#include "json.hpp"
#include <sstream>
#include <unordered_set>

#include "fvdlens/error.hpp"
#include "fvdlens/feature_file.hpp"

namespace fvdlens {

namespace fs = std::filesystem;
using nlohmann::json;

std::string frame_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04zu.png", index + 1);
  return buf;
}

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    fail(ErrorKind::IoError, "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

namespace {

[[noreturn]] void png_error_fn(png_structp png, png_const_charp message) {
  auto* context = static_cast<std::string*>(png_get_error_ptr(png));
  *context = message;
  png_longjmp(png, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

struct PngWriteBuffer {
  std::vector<std::uint8_t> bytes;
};

void png_write_fn(png_structp png, png_bytep data, png_size_t length) {
  auto* buffer = static_cast<PngWriteBuffer*>(png_get_io_ptr(png));
  buffer->bytes.insert(buffer->bytes.end(), data, data + length);
}

void png_flush_fn(png_structp) {}

struct PngReadBuffer {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;
};

void png_read_fn(png_structp png, png_bytep data, png_size_t length) {
  auto* buffer = static_cast<PngReadBuffer*>(png_get_io_ptr(png));
  if (length > buffer->bytes.size() - buffer->pos) {
    png_error(png, "unexpected end of PNG data");
  }
  std::memcpy(data, buffer->bytes.data() + buffer->pos, length);
  buffer->pos += length;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Frame& frame) {
  if (frame.channels != 1 && frame.channels != 3) {
    fail(ErrorKind::InvalidArgument, "PNG frames must have 1 or 3 channels");
  }
  std::string error;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, png_error_fn, png_warning_fn);
  if (png == nullptr) fail(ErrorKind::IoError, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  PngWriteBuffer buffer;
  std::vector<png_bytep> rows(static_cast<std::size_t>(frame.height));

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(ErrorKind::IoError, "PNG encode failed: " + error);
  }
  png_set_write_fn(png, &buffer, png_write_fn, png_flush_fn);
  png_set_compression_level(png, 6);
  png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_NONE);
  png_set_IHDR(png, info, static_cast<png_uint_32>(frame.width),
               static_cast<png_uint_32>(frame.height), 8,
               frame.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_BASE, PNG_FILTER_TYPE_BASE);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(frame.width) * frame.channels;
  for (int y = 0; y < frame.height; ++y) {
    rows[static_cast<std::size_t>(y)] =
        const_cast<png_bytep>(frame.pixels.data() + static_cast<std::size_t>(y) * stride);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return std::move(buffer.bytes);
}

Frame decode_png(std::span<const std::uint8_t> bytes, const std::string& context) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    fail(ErrorKind::IoError, context + ": not a PNG file");
  }
  std::string error;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &error, png_error_fn, png_warning_fn);
  if (png == nullptr) fail(ErrorKind::IoError, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  PngReadBuffer buffer{bytes, 0};
  Frame frame;
  std::vector<png_bytep> rows;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorKind::IoError, context + ": PNG decode failed: " + error);
  }
  png_set_read_fn(png, &buffer, png_read_fn);
  png_read_info(png, info);

  const int color = png_get_color_type(png, info);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_expand(png);
  png_set_packing(png);
  png_read_update_info(png, info);

  frame.width = static_cast<int>(png_get_image_width(png, info));
  frame.height = static_cast<int>(png_get_image_height(png, info));
  frame.channels = (color & PNG_COLOR_MASK_COLOR) ? 3 : 1;
  if (static_cast<int>(png_get_channels(png, info)) != frame.channels) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorKind::IoError, context + ": unsupported PNG channel layout");
  }
  frame.pixels.assign(static_cast<std::size_t>(frame.height) * frame.width * frame.channels, 0);
  rows.resize(static_cast<std::size_t>(frame.height));
  const std::size_t stride = static_cast<std::size_t>(frame.width) * frame.channels;
  for (int y = 0; y < frame.height; ++y) {
    rows[static_cast<std::size_t>(y)] = frame.pixels.data() + static_cast<std::size_t>(y) * stride;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return frame;
}

DatasetManifest parse_manifest(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorKind::IoError, std::string("manifest is not valid JSON: ") + e.what());
  }
  DatasetManifest manifest;
  try {
    manifest.name = doc.value("name", std::string());
    std::unordered_set<std::string> seen;
    for (const auto& entry : doc.at("clips")) {
      ManifestEntry e;
      e.id = entry.at("id").get<std::string>();
      e.path = entry.value("path", e.id);
      e.frame_count = entry.at("frame_count").get<std::size_t>();
      e.height = entry.at("height").get<int>();
      e.width = entry.at("width").get<int>();
      e.channels = entry.at("channels").get<int>();
      if (entry.contains("checksum")) e.checksum = entry.at("checksum").get<std::string>();
      if (!seen.insert(e.id).second) {
        fail(ErrorKind::IoError, "manifest lists clip id '" + e.id + "' twice");
      }
      manifest.clips.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::IoError, std::string("malformed manifest: ") + e.what());
  }
  return manifest;
}

std::string serialize_manifest(const DatasetManifest& manifest) {
  json doc;
  doc["name"] = manifest.name;
  doc["clips"] = json::array();
  for (const auto& e : manifest.clips) {
    json entry;
    entry["id"] = e.id;
    entry["path"] = e.path;
    entry["frame_count"] = e.frame_count;
    entry["height"] = e.height;
    entry["width"] = e.width;
    entry["channels"] = e.channels;
    if (e.checksum) entry["checksum"] = *e.checksum;
    doc["clips"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

fs::path resolve_manifest_path(const fs::path& path) {
  if (fs::is_directory(path)) return path / kManifestFileName;
  return path;
}

DatasetManifest read_manifest(const fs::path& manifest_path) {
  const auto bytes = read_file_bytes(resolve_manifest_path(manifest_path));
  return parse_manifest(std::string(bytes.begin(), bytes.end()));
}

ClipSet load_clipset(const fs::path& manifest_path) {
  const fs::path resolved = resolve_manifest_path(manifest_path);
  const DatasetManifest manifest = read_manifest(resolved);
  const fs::path root = resolved.parent_path();
  if (manifest.clips.empty()) fail(ErrorKind::EmptyClipSet, "manifest lists no clips");

  const ManifestEntry& first = manifest.clips.front();
  ClipSet out;
  out.clips.reserve(manifest.clips.size());
  for (const ManifestEntry& entry : manifest.clips) {
    if (entry.height != first.height || entry.width != first.width ||
        entry.channels != first.channels) {
      fail(ErrorKind::DimensionMismatch,
           "clip '" + entry.id + "' dimensions differ from clip '" + first.id + "'");
    }
    if (entry.frame_count == 0) {
      fail(ErrorKind::InvalidArgument, "clip '" + entry.id + "' has frame_count 0");
    }
    const fs::path dir = root / entry.path;
    Clip clip;
    clip.id = entry.id;
    std::vector<std::uint8_t> all_bytes;
    for (std::size_t t = 0; t < entry.frame_count; ++t) {
      const fs::path file = dir / frame_file_name(t);
      if (!fs::is_regular_file(file)) {
        std::ostringstream msg;
        msg << "clip '" << entry.id << "' is missing frame index " << t << " ("
            << file.string() << ")";
        fail(ErrorKind::MissingFrame, msg.str());
      }
      const auto bytes = read_file_bytes(file);
      Frame frame = decode_png(bytes, file.string());
      if (frame.height != entry.height || frame.width != entry.width ||
          frame.channels != entry.channels) {
        std::ostringstream msg;
        msg << file.string() << " is " << frame.height << "x" << frame.width << "x"
            << frame.channels << ", manifest says " << entry.height << "x" << entry.width << "x"
            << entry.channels;
        fail(ErrorKind::DimensionMismatch, msg.str());
      }
      if (entry.checksum) all_bytes.insert(all_bytes.end(), bytes.begin(), bytes.end());
      clip.frames.push_back(std::move(frame));
    }
    if (entry.checksum) {
      const std::string actual = "sha256:" + sha256_hex(all_bytes);
      if (actual != *entry.checksum) {
        fail(ErrorKind::ChecksumMismatch, "clip '" + entry.id + "' checksum mismatch: manifest " +
                                              *entry.checksum + ", files " + actual);
      }
    }
    out.clips.push_back(std::move(clip));
  }
  return out;
}

namespace {

// Clip ids become directory names; keep them to a portable character set.
std::string directory_name_for(const std::string& id) {
  std::string out;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  if (out.empty() || out == "." || out == "..") out = "clip";
  return out;
}

}  // namespace

DatasetManifest save_clipset(const ClipSet& clips, const fs::path& directory,
                             const std::string& name) {
  clips.validate();
  DatasetManifest manifest;
  manifest.name = name;
  std::unordered_set<std::string> used;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    const Clip& clip = clips.clips[i];
    std::string dir_name = directory_name_for(clip.id);
    if (!used.insert(dir_name).second) {
      dir_name += "_" + std::to_string(i);
      used.insert(dir_name);
    }
    std::vector<std::uint8_t> all_bytes;
    for (std::size_t t = 0; t < clip.frames.size(); ++t) {
      const auto bytes = encode_png(clip.frames[t]);
      write_file_bytes(directory / dir_name / frame_file_name(t), bytes);
      all_bytes.insert(all_bytes.end(), bytes.begin(), bytes.end());
    }
    ManifestEntry entry;
    entry.id = clip.id;
    entry.path = dir_name;
    entry.frame_count = clip.frames.size();
    entry.height = clip.height();
    entry.width = clip.width();
    entry.channels = clip.channels();
    entry.checksum = "sha256:" + sha256_hex(all_bytes);
    manifest.clips.push_back(std::move(entry));
  }
  const std::string text = serialize_manifest(manifest);
  write_file_bytes(directory / kManifestFileName,
                   std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  return manifest;
}

}  // namespace fvdlens
