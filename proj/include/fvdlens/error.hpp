// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fvdlens {

enum class ErrorKind {
  // numeric
  NonFiniteInput,
  NotSymmetric,
  EigenFailure,
  DimensionMismatch,
  NumericalInstability,
  // data / io
  InvalidArgument,
  EmptyClipSet,
  BadMagic,
  UnsupportedVersion,
  TruncatedPayload,
  IdCountMismatch,
  IdMismatch,
  MissingFrame,
  ChecksumMismatch,
  IoError,
  DuplicateTag,
  ExtractorUnavailable,
  ExtractorLengthUnsupported,
  ChunkOutOfRange,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

// True for failures of the arithmetic itself (CLI exit code 3); everything
// else is an input / IO failure (exit code 2).
bool is_numeric(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace fvdlens
