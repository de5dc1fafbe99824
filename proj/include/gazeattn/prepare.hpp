#pragma once

#include <map>
#include <mutex>

#include "gazeattn/manifest.hpp"
#include "gazeattn/train.hpp"
#include "gazeattn/vision.hpp"

namespace gazeattn {

/// Thread-safe decoded-image cache keyed by absolute path; LOSO reuses the
/// same files across folds.
class ImageCache {
 public:
  ImageTensor get(const std::filesystem::path& path);

 private:
  std::mutex mu_;
  std::map<std::string, ImageTensor> images_;
};

struct PrepareOptions {
  int side = 224;            // model input side
  double crop_margin = 0.1;
  const FaceDetector* detector = nullptr;  // fallback when a record has no box
  ImageCache* cache = nullptr;
};

/// Loads, crops (manifest box first, then detector, then the full frame)
/// and resizes every record. Records whose detector finds no face are
/// dropped; the count of dropped records is returned.
struct PreparedAttention {
  std::vector<PreparedAttentionSample> samples;
  int dropped_no_face = 0;
};
PreparedAttention prepare_attention_samples(const AttentionManifest& manifest,
                                            const PrepareOptions& opts);

std::vector<PreparedGazeSample> prepare_gaze_samples(
    const GazeManifest& manifest, const PrepareOptions& opts);

}  // namespace gazeattn
