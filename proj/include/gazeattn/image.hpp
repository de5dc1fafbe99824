#pragma once

#include <cstdint>
#include <vector>

namespace gazeattn {

enum class PixelStage { Raw, Normalized };

/// Interleaved HWC image, always 3 channels (RGB). Raw images hold 8-bit
/// pixels in [0,255]; normalized images hold float values produced by
/// vision::normalize.
struct ImageTensor {
  int height = 0;
  int width = 0;
  int channels = 3;
  PixelStage stage = PixelStage::Raw;
  std::vector<std::uint8_t> raw;  // filled iff stage == Raw
  std::vector<float> norm;        // filled iff stage == Normalized

  static ImageTensor make_raw(int h, int w) {
    ImageTensor img;
    img.height = h;
    img.width = w;
    img.raw.assign(static_cast<std::size_t>(h) * w * 3, 0);
    return img;
  }

  bool empty() const { return height <= 0 || width <= 0; }

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(height) * width * channels;
  }

  std::uint8_t& at(int y, int x, int c) {
    return raw[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  std::uint8_t at(int y, int x, int c) const {
    return raw[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  float& norm_at(int y, int x, int c) {
    return norm[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  float norm_at(int y, int x, int c) const {
    return norm[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
};

/// Axis-aligned face box in source-image pixel coordinates.
struct FaceBox {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
  double confidence = 1.0;
};

}  // namespace gazeattn
