#pragma once

#include <optional>

#include "gazeattn/frames.hpp"
#include "gazeattn/vision.hpp"

namespace gazeattn {

/// Which attention class an annotated activity stands for during testing.
/// GatheringParts and CollaborativeJoining have no mapping and are skipped.
std::optional<AttentionClass> attention_class_of(Activity activity);

struct Rejection {
  std::string video;
  int segment_index = 0;  // position in the annotation list
  std::int64_t frame = 0;
  std::string reason;  // "no-face" or "flag:<name>[+<name>...]"
};

struct AssemblyBuildOptions {
  std::filesystem::path out_dir;      // face crops land here
  const FaceDetector* detector = nullptr;
  double crop_margin = 0.1;
};

struct AssemblyBuildResult {
  AttentionManifest manifest;
  std::vector<Rejection> rejections;
  int mapped_segments = 0;
  int extracted_frames = 0;  // after first/middle/last deduplication
};

/// Builds an attention test set from annotated videos: for every mapped
/// segment, takes the first/middle/last frames, rejects whole segments that
/// carry quality flags and frames where no face is found, and face-crops
/// the rest. |manifest| + |rejections| always equals extracted_frames.
/// Subjects are derived from the video locator stem.
AssemblyBuildResult build_assembly_test_set(
    std::span<const SegmentAnnotation> annotations,
    const FrameSourceFactory& open_video, const AssemblyBuildOptions& opts);

void write_rejection_csv(const std::filesystem::path& path,
                         std::span<const Rejection> rejections);

}  // namespace gazeattn
