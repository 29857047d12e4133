// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "fvdlens/error.hpp"

namespace fvdlens {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kRunFileName = "run.json";

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitNumeric = 3;

/// 3 for numeric failures, 1 for bad arguments or config, 2 otherwise.
int exit_code_for(ErrorKind kind);

/// Runs one command. `args` excludes the program name. Reports go to `out`;
/// failures are written to `err` as a one-line JSON object.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv);

}  // namespace fvdlens
