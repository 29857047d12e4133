// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace fvdlens {

/// Number of worker threads used when a caller passes 0: FVDLENS_THREADS if
/// set, otherwise std::thread::hardware_concurrency().
std::size_t default_thread_count();

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
/// visited exactly once; callers write results into index-addressed slots so
/// output never depends on scheduling.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace fvdlens
