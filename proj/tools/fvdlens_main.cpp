// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fvdlens/cli.hpp"

int main(int argc, char** argv) { return fvdlens::run_cli(argc, argv); }
