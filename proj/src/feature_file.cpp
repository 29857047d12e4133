// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fvdlens/feature_file.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "fvdlens/error.hpp"

namespace fvdlens {

namespace {

constexpr char kMagic[4] = {'F', 'V', 'D', 'F'};

class Writer {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    if (s.size() > std::numeric_limits<std::uint32_t>::max()) {
      fail(ErrorKind::InvalidArgument, "string too long for feature file");
    }
    u32(static_cast<std::uint32_t>(s.size()));
    bytes_.insert(bytes_.end(), s.begin(), s.end());
  }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    if (n > bytes_.size() - pos_) {
      std::ostringstream msg;
      msg << "feature file truncated while reading " << what << " (need " << n << " bytes at offset "
          << pos_ << ", file has " << bytes_.size() << ")";
      fail(ErrorKind::TruncatedPayload, msg.str());
    }
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint8_t u8(const char* what) { return take(1, what)[0]; }
  std::uint32_t u32(const char* what) {
    auto b = take(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64(const char* what) {
    auto b = take(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  std::string str(const char* what) {
    const std::uint32_t n = u32(what);
    auto b = take(n, what);
    return std::string(b.begin(), b.end());
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_features(const FeatureMatrix& features, FeatureDtype dtype) {
  features.validate();
  if (features.dim() > std::numeric_limits<std::uint32_t>::max()) {
    fail(ErrorKind::InvalidArgument, "feature dimension exceeds u32");
  }
  Writer w;
  for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u32(kFeatureFormatVersion);
  w.u32(static_cast<std::uint32_t>(dtype));
  w.u64(static_cast<std::uint64_t>(features.rows()));
  w.u32(static_cast<std::uint32_t>(features.dim()));
  w.u8(features.has_ids() ? 1 : 0);
  for (const auto& id : features.ids) w.str(id);
  w.str(features.extractor_tag);
  for (Eigen::Index r = 0; r < features.rows(); ++r) {
    for (Eigen::Index c = 0; c < features.dim(); ++c) {
      if (dtype == FeatureDtype::F32) {
        w.f32(static_cast<float>(features.data(r, c)));
      } else {
        w.f64(features.data(r, c));
      }
    }
  }
  return w.take();
}

FeatureMatrix decode_features(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    fail(ErrorKind::BadMagic, "not a feature file (magic != \"FVDF\")");
  }
  r.take(4, "magic");
  const std::uint32_t version = r.u32("format_version");
  if (version != kFeatureFormatVersion) {
    fail(ErrorKind::UnsupportedVersion,
         "unsupported feature file version " + std::to_string(version));
  }
  const std::uint32_t dtype_code = r.u32("dtype");
  std::size_t value_size = 0;
  if (dtype_code == static_cast<std::uint32_t>(FeatureDtype::F32)) {
    value_size = 4;
  } else if (dtype_code == static_cast<std::uint32_t>(FeatureDtype::F64)) {
    value_size = 8;
  } else {
    fail(ErrorKind::UnsupportedVersion, "unknown dtype code " + std::to_string(dtype_code));
  }
  const std::uint64_t rows = r.u64("rows");
  const std::uint32_t dim = r.u32("dim");
  const std::uint8_t has_ids = r.u8("has_ids");
  if (has_ids > 1) fail(ErrorKind::BadMagic, "has_ids flag must be 0 or 1");

  FeatureMatrix out;
  if (has_ids == 1) {
    // Each id needs at least its 4-byte length prefix.
    if (rows > r.remaining() / 4) {
      fail(ErrorKind::TruncatedPayload, "feature file truncated in id block");
    }
    out.ids.reserve(static_cast<std::size_t>(rows));
    for (std::uint64_t i = 0; i < rows; ++i) out.ids.push_back(r.str("id block"));
  }
  out.extractor_tag = r.str("extractor tag");

  const std::size_t remaining = r.remaining();
  if (dim != 0 && rows > remaining / value_size / dim) {
    std::ostringstream msg;
    msg << "payload has " << remaining << " bytes, expected " << rows << "x" << dim << "x"
        << value_size;
    fail(ErrorKind::TruncatedPayload, msg.str());
  }
  const std::size_t expected = static_cast<std::size_t>(rows) * dim * value_size;
  if (remaining != expected) {
    std::ostringstream msg;
    msg << "payload has " << remaining << " bytes, expected " << expected;
    fail(ErrorKind::TruncatedPayload, msg.str());
  }

  out.data.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < out.data.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.data.cols(); ++j) {
      if (value_size == 4) {
        out.data(i, j) = static_cast<double>(std::bit_cast<float>(r.u32("payload")));
      } else {
        out.data(i, j) = std::bit_cast<double>(r.u64("payload"));
      }
    }
  }
  out.validate();
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorKind::IoError, "error reading '" + path.string() + "'");
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::IoError, "cannot open '" + tmp.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorKind::IoError, "error writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorKind::IoError, "cannot rename into '" + path.string() + "': " + ec.message());
}

void write_features(const FeatureMatrix& features, const std::filesystem::path& path,
                    FeatureDtype dtype) {
  write_file_bytes(path, encode_features(features, dtype));
}

FeatureMatrix read_features(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return decode_features(bytes);
}

}  // namespace fvdlens
