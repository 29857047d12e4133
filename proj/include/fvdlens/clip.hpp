// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fvdlens {

/// One 8-bit image, interleaved channels, row-major.
struct Frame {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<std::uint8_t> pixels;

  Frame() = default;
  Frame(int h, int w, int c, std::uint8_t fill = 0)
      : height(h), width(w), channels(c),
        pixels(static_cast<std::size_t>(h) * static_cast<std::size_t>(w) *
                   static_cast<std::size_t>(c),
               fill) {}

  std::size_t index(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
            static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels) +
           static_cast<std::size_t>(c);
  }
  std::uint8_t at(int y, int x, int c) const { return pixels[index(y, x, c)]; }
  std::uint8_t& at(int y, int x, int c) { return pixels[index(y, x, c)]; }

  bool same_shape(const Frame& other) const {
    return height == other.height && width == other.width && channels == other.channels;
  }
  friend bool operator==(const Frame&, const Frame&) = default;
};

struct Clip {
  std::string id;
  std::vector<Frame> frames;

  std::size_t frame_count() const { return frames.size(); }
  int height() const { return frames.empty() ? 0 : frames.front().height; }
  int width() const { return frames.empty() ? 0 : frames.front().width; }
  int channels() const { return frames.empty() ? 0 : frames.front().channels; }
  friend bool operator==(const Clip&, const Clip&) = default;
};

struct ClipSet {
  std::vector<Clip> clips;

  bool empty() const { return clips.empty(); }
  std::size_t size() const { return clips.size(); }
  int height() const { return clips.empty() ? 0 : clips.front().height(); }
  int width() const { return clips.empty() ? 0 : clips.front().width(); }
  int channels() const { return clips.empty() ? 0 : clips.front().channels(); }

  /// Throws EmptyClipSet / DimensionMismatch / InvalidArgument when the set
  /// is empty, a clip has no frames, shapes disagree, or channels are not 1/3.
  void validate() const;

  std::vector<std::string> ids() const;
  friend bool operator==(const ClipSet&, const ClipSet&) = default;
};

/// Frames [begin, begin + length) of every clip. Throws ChunkOutOfRange when
/// a clip is too short.
ClipSet slice_frames(const ClipSet& clips, std::size_t begin, std::size_t length);

/// Every frame of every clip as its own one-frame clip, ids "<clip>/<frame>".
ClipSet frames_as_clips(const ClipSet& clips);

}  // namespace fvdlens
