#pragma once

#include <cstdint>
#include <filesystem>

#include "gazeattn/manifest.hpp"
#include "gazeattn/types.hpp"

namespace gazeattn {

/// Gaze-to-zone mapping used by the synthetic data: Table iff pitch drops
/// below pitch_table; Cobot iff yaw exceeds yaw_cobot (and pitch does not
/// indicate Table); Distracted otherwise. The thresholds partition the
/// sampled gaze range by construction.
struct ZoneGeometry {
  double pitch_table = -0.2;  // rad
  double yaw_cobot = 0.3;     // rad
  double pitch_range = 0.6;   // gaze sampled with |pitch| <= pitch_range
  double yaw_range = 0.6;
  // Class-conditional samples keep this distance from the thresholds so the
  // three regions stay robustly separable.
  double boundary_margin = 0.05;

  AttentionClass zone_of(const GazeDirection& g) const {
    if (g.pitch < pitch_table) return AttentionClass::Table;
    if (g.yaw > yaw_cobot) return AttentionClass::Cobot;
    return AttentionClass::Distracted;
  }

  /// Throws InvalidGeometry when some class has no sampling volume.
  void validate() const;
};

struct SyntheticConfig {
  int subjects = 8;
  int per_class = 30;         // attention images per class per subject
  int gaze_per_subject = 250;  // gaze-labeled images per subject
  std::uint64_t seed = 0;
  int image_side = 64;
  double disc_radius = 7.0;
  ZoneGeometry geometry;
  std::filesystem::path out_dir;
};

struct SyntheticResult {
  std::filesystem::path gaze_manifest;
  std::filesystem::path attention_manifest;
  int gaze_images = 0;
  int attention_images = 0;
};

/// Renders a gaze dataset and an attention dataset under cfg.out_dir and
/// writes the two manifests. A bright disc over a subject-specific
/// background tint encodes the gaze: disc center u = cx + k*yaw,
/// v = cy - k*pitch. Attention labels equal geometry.zone_of(gaze) exactly.
/// Byte-deterministic for a given config.
SyntheticResult generate_synthetic(const SyntheticConfig& cfg);

/// The image a given (subject, gaze) pair renders to; exposed so tests can
/// produce individual frames.
ImageTensor render_synthetic_frame(const SyntheticConfig& cfg,
                                   int subject_index,
                                   const GazeDirection& gaze,
                                   std::uint64_t noise_seed);

std::string synthetic_subject_id(int subject_index);

}  // namespace gazeattn
