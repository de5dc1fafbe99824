#include "gazeattn/frames.hpp"

#include <algorithm>
#include <fstream>

#include <opencv2/imgproc.hpp>
#include <opencv2/videoio.hpp>

#include "gazeattn/errors.hpp"
#include "gazeattn/image_io.hpp"

namespace gazeattn {

DirectoryFrameSource::DirectoryFrameSource(const std::filesystem::path& dir,
                                           double default_fps)
    : dir_(dir), fps_(default_fps) {
  if (!std::filesystem::is_directory(dir))
    throw IoError("not a frame directory: " + dir.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg")
      frames_.push_back(entry.path());
  }
  std::sort(frames_.begin(), frames_.end());

  const auto fps_file = dir / "fps";
  if (std::filesystem::exists(fps_file)) {
    std::ifstream in(fps_file);
    double v = 0.0;
    if (in >> v && v > 0.0) fps_ = v;
  }
}

std::int64_t DirectoryFrameSource::frame_count() const {
  return static_cast<std::int64_t>(frames_.size());
}

ImageTensor DirectoryFrameSource::read(std::int64_t index) {
  if (index < 0 || index >= frame_count())
    throw FrameReadError(locator(), index);
  try {
    return load_image(frames_[static_cast<std::size_t>(index)]);
  } catch (const IoError&) {
    throw FrameReadError(locator(), index);
  }
}

namespace {

class VideoFileFrameSource final : public FrameSource {
 public:
  explicit VideoFileFrameSource(const std::filesystem::path& path,
                                double default_fps)
      : path_(path) {
    if (!cap_.open(path.string()))
      throw IoError("cannot open video: " + path.string());
    count_ = static_cast<std::int64_t>(
        cap_.get(cv::CAP_PROP_FRAME_COUNT));
    fps_ = cap_.get(cv::CAP_PROP_FPS);
    if (!(fps_ > 0.0)) fps_ = default_fps;
  }

  std::int64_t frame_count() const override { return count_; }

  ImageTensor read(std::int64_t index) override {
    if (index < 0 || (count_ > 0 && index >= count_))
      throw FrameReadError(locator(), index);
    cap_.set(cv::CAP_PROP_POS_FRAMES, static_cast<double>(index));
    cv::Mat bgr;
    if (!cap_.read(bgr) || bgr.empty())
      throw FrameReadError(locator(), index);
    cv::Mat rgb;
    cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
    ImageTensor img;
    img.height = rgb.rows;
    img.width = rgb.cols;
    img.raw.resize(img.pixel_count());
    for (int y = 0; y < rgb.rows; ++y)
      std::memcpy(&img.raw[static_cast<std::size_t>(y) * img.width * 3],
                  rgb.ptr(y), static_cast<std::size_t>(img.width) * 3);
    return img;
  }

  double fps() const override { return fps_; }
  std::string locator() const override { return path_.string(); }

 private:
  std::filesystem::path path_;
  cv::VideoCapture cap_;
  std::int64_t count_ = 0;
  double fps_ = 25.0;
};

}  // namespace

std::unique_ptr<FrameSource> open_frame_source(
    const std::filesystem::path& path, double default_fps) {
  if (std::filesystem::is_directory(path))
    return std::make_unique<DirectoryFrameSource>(path, default_fps);
  return std::make_unique<VideoFileFrameSource>(path, default_fps);
}

std::vector<std::int64_t> segment_frame_indices(
    const SegmentAnnotation& segment) {
  const std::int64_t first = segment.start_frame;
  const std::int64_t last = segment.end_frame;
  const std::int64_t middle = (first + last) / 2;  // floor: both at least 0
  std::vector<std::int64_t> indices{first, middle, last};
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return indices;
}

std::vector<std::pair<std::int64_t, ImageTensor>> extract_segment_frames(
    const SegmentAnnotation& segment, FrameSource& video) {
  if (segment.start_frame < 0 || segment.end_frame < segment.start_frame ||
      segment.end_frame >= video.frame_count())
    throw FrameReadError(video.locator(), segment.end_frame);
  std::vector<std::pair<std::int64_t, ImageTensor>> out;
  for (const auto idx : segment_frame_indices(segment))
    out.emplace_back(idx, video.read(idx));
  return out;
}

}  // namespace gazeattn
