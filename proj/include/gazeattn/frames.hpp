#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <vector>

#include "gazeattn/image.hpp"
#include "gazeattn/manifest.hpp"

namespace gazeattn {

/// Random-access source of video frames; either a container file or a
/// directory of numbered images.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual std::int64_t frame_count() const = 0;
  /// Throws FrameReadError when the index cannot be read.
  virtual ImageTensor read(std::int64_t index) = 0;
  virtual double fps() const = 0;
  virtual std::string locator() const = 0;
};

/// Directory of image frames, ordered by filename. fps comes from an
/// optional `fps` file in the directory (a single number), default 25.
class DirectoryFrameSource final : public FrameSource {
 public:
  explicit DirectoryFrameSource(const std::filesystem::path& dir,
                                double default_fps = 25.0);
  std::int64_t frame_count() const override;
  ImageTensor read(std::int64_t index) override;
  double fps() const override { return fps_; }
  std::string locator() const override { return dir_.string(); }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> frames_;
  double fps_;
};

/// Opens a directory as a DirectoryFrameSource, anything else as a video
/// container (decoded through the platform codecs).
std::unique_ptr<FrameSource> open_frame_source(
    const std::filesystem::path& path, double default_fps = 25.0);

using FrameSourceFactory =
    std::function<std::unique_ptr<FrameSource>(const std::filesystem::path&)>;

/// First, middle (floor((start+end)/2)) and last frame of the segment,
/// duplicates removed, ascending order.
std::vector<std::pair<std::int64_t, ImageTensor>> extract_segment_frames(
    const SegmentAnnotation& segment, FrameSource& video);

/// The indices extract_segment_frames would read, without touching pixels.
std::vector<std::int64_t> segment_frame_indices(
    const SegmentAnnotation& segment);

}  // namespace gazeattn
