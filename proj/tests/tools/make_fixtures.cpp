// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

// Writes the small PNG clip sets under tests/fixtures. Rerunning it
// reproduces the shipped files byte for byte.

#include <cstdio>
#include <filesystem>

#include "fvdlens/clip_store.hpp"
#include "fvdlens/distortion.hpp"
#include "synthetic.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <fixtures-dir>\n", argv[0]);
    return 1;
  }
  namespace fs = std::filesystem;
  using namespace fvdlens;
  const fs::path root = argv[1];
  fs::remove_all(root / "refs");
  fs::remove_all(root / "gens");

  const ClipSet refs = testing::synthetic_clips(8, 16, 32, 32, 2026);
  save_clipset(refs, root / "refs", "fixture_refs");

  const ClipSet others = testing::synthetic_clips(8, 16, 32, 32, 2027);
  const DistortionSpec spec{DistortionFamily::Elastic, 3, DistortionMode::Spatiotemporal, 5};
  save_clipset(distort_clipset(others, spec, SeverityTable::defaults()), root / "gens",
               "fixture_gens");
  return 0;
}
