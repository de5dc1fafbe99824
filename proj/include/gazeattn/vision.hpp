#pragma once

#include <array>
#include <memory>
#include <optional>

#include "gazeattn/image.hpp"

namespace gazeattn {

/// Pluggable face detector: takes a raw image, returns the best face box
/// or nothing. Implementations must be stateless per call (safe to share
/// across threads).
class FaceDetector {
 public:
  virtual ~FaceDetector() = default;
  virtual std::optional<FaceBox> detect(const ImageTensor& image) const = 0;
};

/// Returns a fixed box (or nothing); for tests and for datasets that ship
/// precomputed boxes.
class StubFaceDetector : public FaceDetector {
 public:
  StubFaceDetector() = default;
  explicit StubFaceDetector(FaceBox box) : box_(box) {}
  std::optional<FaceBox> detect(const ImageTensor&) const override {
    return box_;
  }

 private:
  std::optional<FaceBox> box_;
};

/// Treats the whole frame as the face region. Useful for synthetic data
/// where the rendered frame already is the region of interest.
class FullFrameDetector : public FaceDetector {
 public:
  std::optional<FaceBox> detect(const ImageTensor& image) const override;
};

/// Desk-scale heuristic detector: finds the bounding box of pixels whose
/// luminance stands out from the frame statistics. Returns nothing on
/// uniform frames. Stands in for an external face detector in tests and
/// demos; real deployments plug their own FaceDetector.
class BrightBlobDetector : public FaceDetector {
 public:
  explicit BrightBlobDetector(double stddev_gate = 2.0,
                              double min_area_fraction = 0.0005)
      : stddev_gate_(stddev_gate), min_area_fraction_(min_area_fraction) {}
  std::optional<FaceBox> detect(const ImageTensor& image) const override;

 private:
  double stddev_gate_;
  double min_area_fraction_;
};

namespace vision {

struct NormalizeParams {
  std::array<double, 3> mean{0.0, 0.0, 0.0};
  double scale = 1.0 / 255.0;
};

/// Crops `box` expanded by `margin` (fraction of the box size, per side)
/// and clamped to the image bounds.
ImageTensor crop_box(const ImageTensor& image, const FaceBox& box,
                     double margin);

/// Runs the detector and crops the detected region; empty optional when no
/// face is found. Throws InvalidImage on empty input.
std::optional<ImageTensor> detect_and_crop(const ImageTensor& image,
                                           const FaceDetector& detector,
                                           double margin = 0.1);

/// Bilinear resize to side x side. Aspect ratio is not preserved. Identity
/// (bit-exact) when the input already has the target size.
ImageTensor resize_to_input(const ImageTensor& image, int side = 224);

/// Multiplicative brightness change on raw images; factor must lie in
/// [0.75, 1.25]. Each channel becomes clamp(round(v * factor), 0, 255).
ImageTensor adjust_brightness(const ImageTensor& image, double factor);

/// Raw -> normalized: value = (v - mean_c) * scale.
ImageTensor normalize(const ImageTensor& image,
                      const NormalizeParams& params = {});

/// Inverse of normalize, back to raw 8-bit (values rounded and clamped).
ImageTensor denormalize(const ImageTensor& image,
                        const NormalizeParams& params = {});

}  // namespace vision
}  // namespace gazeattn
