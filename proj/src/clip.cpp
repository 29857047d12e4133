// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fvdlens/clip.hpp"

#include <sstream>

#include "fvdlens/error.hpp"

namespace fvdlens {

void ClipSet::validate() const {
  if (clips.empty()) fail(ErrorKind::EmptyClipSet, "clip set is empty");
  const Frame* shape = nullptr;
  for (const Clip& clip : clips) {
    if (clip.frames.empty()) {
      fail(ErrorKind::InvalidArgument, "clip '" + clip.id + "' has no frames");
    }
    for (const Frame& frame : clip.frames) {
      if (frame.channels != 1 && frame.channels != 3) {
        fail(ErrorKind::InvalidArgument, "clip '" + clip.id + "' has unsupported channel count");
      }
      if (frame.height < 1 || frame.width < 1 ||
          frame.pixels.size() != frame.index(frame.height - 1, frame.width - 1,
                                             frame.channels - 1) + 1) {
        fail(ErrorKind::InvalidArgument, "clip '" + clip.id + "' has a malformed frame");
      }
      if (shape == nullptr) {
        shape = &frame;
      } else if (!frame.same_shape(*shape)) {
        std::ostringstream msg;
        msg << "clip '" << clip.id << "' frame is " << frame.height << "x" << frame.width << "x"
            << frame.channels << ", expected " << shape->height << "x" << shape->width << "x"
            << shape->channels;
        fail(ErrorKind::DimensionMismatch, msg.str());
      }
    }
  }
}

std::vector<std::string> ClipSet::ids() const {
  std::vector<std::string> out;
  out.reserve(clips.size());
  for (const Clip& clip : clips) out.push_back(clip.id);
  return out;
}

ClipSet slice_frames(const ClipSet& clips, std::size_t begin, std::size_t length) {
  ClipSet out;
  out.clips.reserve(clips.size());
  for (const Clip& clip : clips.clips) {
    if (length == 0 || begin + length > clip.frames.size()) {
      std::ostringstream msg;
      msg << "frames [" << begin << ", " << begin + length << ") out of range for clip '"
          << clip.id << "' with " << clip.frames.size() << " frames";
      fail(ErrorKind::ChunkOutOfRange, msg.str());
    }
    Clip part;
    part.id = clip.id;
    part.frames.assign(clip.frames.begin() + static_cast<std::ptrdiff_t>(begin),
                       clip.frames.begin() + static_cast<std::ptrdiff_t>(begin + length));
    out.clips.push_back(std::move(part));
  }
  return out;
}

ClipSet frames_as_clips(const ClipSet& clips) {
  ClipSet out;
  for (const Clip& clip : clips.clips) {
    for (std::size_t t = 0; t < clip.frames.size(); ++t) {
      out.clips.push_back(Clip{clip.id + "/" + std::to_string(t), {clip.frames[t]}});
    }
  }
  return out;
}

}  // namespace fvdlens
