#include "gazeattn/vision.hpp"

#include <algorithm>
#include <cmath>

#include "gazeattn/errors.hpp"

namespace gazeattn {

namespace {

double luminance(const ImageTensor& img, int y, int x) {
  return 0.299 * img.at(y, x, 0) + 0.587 * img.at(y, x, 1) +
         0.114 * img.at(y, x, 2);
}

void require_raw(const ImageTensor& image, const char* op) {
  if (image.empty())
    throw InvalidImage(std::string(op) + ": empty input image");
  if (image.stage != PixelStage::Raw)
    throw InvalidImage(std::string(op) + ": expected a raw-stage image");
}

}  // namespace

std::optional<FaceBox> FullFrameDetector::detect(
    const ImageTensor& image) const {
  if (image.empty()) return std::nullopt;
  return FaceBox{0, 0, image.width, image.height, 1.0};
}

std::optional<FaceBox> BrightBlobDetector::detect(
    const ImageTensor& image) const {
  if (image.empty() || image.stage != PixelStage::Raw) return std::nullopt;
  const std::size_t n = static_cast<std::size_t>(image.height) * image.width;
  double sum = 0.0, sq = 0.0;
  for (int y = 0; y < image.height; ++y)
    for (int x = 0; x < image.width; ++x) {
      const double l = luminance(image, y, x);
      sum += l;
      sq += l * l;
    }
  const double mean = sum / static_cast<double>(n);
  const double var = std::max(0.0, sq / static_cast<double>(n) - mean * mean);
  const double sd = std::sqrt(var);
  if (sd < 1.0) return std::nullopt;  // uniform frame, nothing stands out

  const double threshold = mean + stddev_gate_ * sd;
  int min_x = image.width, min_y = image.height, max_x = -1, max_y = -1;
  std::int64_t count = 0;
  for (int y = 0; y < image.height; ++y)
    for (int x = 0; x < image.width; ++x)
      if (luminance(image, y, x) > threshold) {
        min_x = std::min(min_x, x);
        min_y = std::min(min_y, y);
        max_x = std::max(max_x, x);
        max_y = std::max(max_y, y);
        ++count;
      }
  if (max_x < 0) return std::nullopt;
  const double area_fraction =
      static_cast<double>(count) / static_cast<double>(n);
  if (area_fraction < min_area_fraction_) return std::nullopt;

  FaceBox box;
  box.x = min_x;
  box.y = min_y;
  box.width = max_x - min_x + 1;
  box.height = max_y - min_y + 1;
  // Confidence grows with how much of the box the blob actually fills.
  const double box_area =
      static_cast<double>(box.width) * static_cast<double>(box.height);
  box.confidence = std::min(1.0, static_cast<double>(count) / box_area);
  return box;
}

namespace vision {

ImageTensor crop_box(const ImageTensor& image, const FaceBox& box,
                     double margin) {
  require_raw(image, "crop_box");
  if (margin < 0.0) throw InvalidImage("crop_box: negative margin");

  const int mx = static_cast<int>(std::lround(margin * box.width));
  const int my = static_cast<int>(std::lround(margin * box.height));
  const int x0 = std::clamp(box.x - mx, 0, image.width);
  const int y0 = std::clamp(box.y - my, 0, image.height);
  const int x1 = std::clamp(box.x + box.width + mx, 0, image.width);
  const int y1 = std::clamp(box.y + box.height + my, 0, image.height);
  if (x1 <= x0 || y1 <= y0)
    throw InvalidImage("crop_box: box does not intersect the image");

  ImageTensor out = ImageTensor::make_raw(y1 - y0, x1 - x0);
  for (int y = y0; y < y1; ++y) {
    const std::uint8_t* src = &image.raw[(static_cast<std::size_t>(y) *
                                          image.width + x0) * 3];
    std::uint8_t* dst = &out.raw[static_cast<std::size_t>(y - y0) *
                                 out.width * 3];
    std::copy(src, src + static_cast<std::size_t>(out.width) * 3, dst);
  }
  return out;
}

std::optional<ImageTensor> detect_and_crop(const ImageTensor& image,
                                           const FaceDetector& detector,
                                           double margin) {
  require_raw(image, "detect_and_crop");
  const auto box = detector.detect(image);
  if (!box) return std::nullopt;
  // A degenerate or fully out-of-bounds detection counts as no face.
  if (box->width <= 0 || box->height <= 0) return std::nullopt;
  if (box->x >= image.width || box->y >= image.height ||
      box->x + box->width <= 0 || box->y + box->height <= 0)
    return std::nullopt;
  return crop_box(image, *box, margin);
}

namespace {

// Half-pixel-center bilinear sampling; weight 0/1 at identical sizes makes
// the same-size case an exact copy.
template <class Src, class Write>
void bilinear(int src_h, int src_w, int dst_side, Src src, Write write) {
  const double sx = static_cast<double>(src_w) / dst_side;
  const double sy = static_cast<double>(src_h) / dst_side;
  for (int y = 0; y < dst_side; ++y) {
    double fy = (y + 0.5) * sy - 0.5;
    fy = std::clamp(fy, 0.0, static_cast<double>(src_h - 1));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, src_h - 1);
    const float wy = static_cast<float>(fy - y0);
    for (int x = 0; x < dst_side; ++x) {
      double fx = (x + 0.5) * sx - 0.5;
      fx = std::clamp(fx, 0.0, static_cast<double>(src_w - 1));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, src_w - 1);
      const float wx = static_cast<float>(fx - x0);
      for (int c = 0; c < 3; ++c) {
        const float top =
            src(y0, x0, c) * (1.0f - wx) + src(y0, x1, c) * wx;
        const float bot =
            src(y1, x0, c) * (1.0f - wx) + src(y1, x1, c) * wx;
        write(y, x, c, top * (1.0f - wy) + bot * wy);
      }
    }
  }
}

}  // namespace

ImageTensor resize_to_input(const ImageTensor& image, int side) {
  if (image.empty()) throw InvalidImage("resize_to_input: empty input image");
  if (side <= 0) throw InvalidImage("resize_to_input: side must be positive");

  ImageTensor out;
  out.height = side;
  out.width = side;
  out.stage = image.stage;
  if (image.stage == PixelStage::Raw) {
    out.raw.assign(out.pixel_count(), 0);
    bilinear(
        image.height, image.width, side,
        [&](int y, int x, int c) -> float { return image.at(y, x, c); },
        [&](int y, int x, int c, float v) {
          out.at(y, x, c) = static_cast<std::uint8_t>(
              std::clamp(std::lround(v), 0l, 255l));
        });
  } else {
    out.norm.assign(out.pixel_count(), 0.0f);
    bilinear(
        image.height, image.width, side,
        [&](int y, int x, int c) -> float { return image.norm_at(y, x, c); },
        [&](int y, int x, int c, float v) { out.norm_at(y, x, c) = v; });
  }
  return out;
}

ImageTensor adjust_brightness(const ImageTensor& image, double factor) {
  require_raw(image, "adjust_brightness");
  if (!(factor >= 0.75 && factor <= 1.25))
    throw FactorOutOfRange("brightness factor " + std::to_string(factor) +
                           " outside [0.75, 1.25]");
  ImageTensor out = image;
  for (auto& v : out.raw)
    v = static_cast<std::uint8_t>(
        std::clamp(std::lround(v * factor), 0l, 255l));
  return out;
}

ImageTensor normalize(const ImageTensor& image, const NormalizeParams& p) {
  require_raw(image, "normalize");
  ImageTensor out;
  out.height = image.height;
  out.width = image.width;
  out.stage = PixelStage::Normalized;
  out.norm.resize(image.pixel_count());
  const std::size_t n = image.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    const int c = static_cast<int>(i % 3);
    out.norm[i] =
        static_cast<float>((image.raw[i] - p.mean[c]) * p.scale);
  }
  return out;
}

ImageTensor denormalize(const ImageTensor& image, const NormalizeParams& p) {
  if (image.empty()) throw InvalidImage("denormalize: empty input image");
  if (image.stage != PixelStage::Normalized)
    throw InvalidImage("denormalize: expected a normalized-stage image");
  ImageTensor out = ImageTensor::make_raw(image.height, image.width);
  const std::size_t n = image.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    const int c = static_cast<int>(i % 3);
    const double v = image.norm[i] / p.scale + p.mean[c];
    out.raw[i] =
        static_cast<std::uint8_t>(std::clamp(std::lround(v), 0l, 255l));
  }
  return out;
}

}  // namespace vision
}  // namespace gazeattn
