#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gazeattn/image.hpp"
#include "gazeattn/types.hpp"

namespace gazeattn {

inline constexpr int kManifestSchemaVersion = 1;

struct GazeSample {
  std::string image;  // path, relative to the manifest directory
  std::string subject;
  GazeDirection gaze;
};

struct AttentionSample {
  std::string image;
  std::string subject;
  AttentionClass label = AttentionClass::Distracted;
  std::optional<FaceBox> box;       // precomputed face box, if any
  std::optional<GazeDirection> gaze;  // generating gaze, synthetic data only
};

enum class Activity {
  GatheringParts,
  Assembling,
  CollaborativeJoining,
  WaitingLookingAtCobot,
  WaitingDistracted,
};

enum class QualityFlag { EyesNotVisible, Occluded, Blurry };

const char* to_string(Activity a);
const char* to_string(QualityFlag f);
std::optional<Activity> activity_from_string(std::string_view s);
std::optional<QualityFlag> quality_flag_from_string(std::string_view s);

struct SegmentAnnotation {
  std::string video;  // path or frame-directory, relative to the manifest
  std::int64_t start_frame = 0;
  std::int64_t end_frame = 0;
  Activity activity = Activity::Assembling;
  std::set<QualityFlag> flags;
};

/// A homogeneous JSON-lines dataset. `base_dir` is the directory the
/// manifest was loaded from; record paths resolve against it.
template <class Record>
struct Manifest {
  int schema_version = kManifestSchemaVersion;
  std::vector<Record> records;
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const std::string& rel) const {
    std::filesystem::path p(rel);
    return p.is_absolute() ? p : base_dir / p;
  }
};

using GazeManifest = Manifest<GazeSample>;
using AttentionManifest = Manifest<AttentionSample>;
using SegmentManifest = Manifest<SegmentAnnotation>;

/// Sorted unique subject identifiers.
template <class Record>
std::vector<std::string> subjects_of(const Manifest<Record>& m) {
  std::set<std::string> s;
  for (const auto& r : m.records) s.insert(r.subject);
  return {s.begin(), s.end()};
}

GazeManifest load_gaze_manifest(const std::filesystem::path& path);
AttentionManifest load_attention_manifest(const std::filesystem::path& path);
SegmentManifest load_segment_manifest(const std::filesystem::path& path);

void save_manifest(const std::filesystem::path& path, const GazeManifest& m);
void save_manifest(const std::filesystem::path& path,
                   const AttentionManifest& m);
void save_manifest(const std::filesystem::path& path, const SegmentManifest& m);

}  // namespace gazeattn
