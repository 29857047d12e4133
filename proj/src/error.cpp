// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fvdlens/error.hpp"

namespace fvdlens {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::EigenFailure: return "EigenFailure";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NumericalInstability: return "NumericalInstability";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::EmptyClipSet: return "EmptyClipSet";
    case ErrorKind::BadMagic: return "BadMagic";
    case ErrorKind::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorKind::TruncatedPayload: return "TruncatedPayload";
    case ErrorKind::IdCountMismatch: return "IdCountMismatch";
    case ErrorKind::IdMismatch: return "IdMismatch";
    case ErrorKind::MissingFrame: return "MissingFrame";
    case ErrorKind::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::DuplicateTag: return "DuplicateTag";
    case ErrorKind::ExtractorUnavailable: return "ExtractorUnavailable";
    case ErrorKind::ExtractorLengthUnsupported: return "ExtractorLengthUnsupported";
    case ErrorKind::ChunkOutOfRange: return "ChunkOutOfRange";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

bool is_numeric(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonFiniteInput:
    case ErrorKind::NotSymmetric:
    case ErrorKind::EigenFailure:
    case ErrorKind::NumericalInstability:
      return true;
    default:
      return false;
  }
}

}  // namespace fvdlens
