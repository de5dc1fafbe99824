#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace gazeattn {

/// Gaze direction in radians. Pitch is vertical (positive = up),
/// yaw is horizontal (positive = right, from the camera's view).
struct GazeDirection {
  double pitch = 0.0;
  double yaw = 0.0;

  bool valid() const {
    return std::isfinite(pitch) && std::isfinite(yaw) &&
           std::abs(pitch) <= M_PI && std::abs(yaw) <= M_PI;
  }
};

/// The three attention targets. Index order is fixed: Cobot=0, Table=1,
/// Distracted=2, and every class list, confusion-matrix axis and
/// probability triple in the library uses this order.
enum class AttentionClass : int { Cobot = 0, Table = 1, Distracted = 2 };

inline constexpr int kNumClasses = 3;

inline constexpr std::array<AttentionClass, 3> kAllClasses = {
    AttentionClass::Cobot, AttentionClass::Table, AttentionClass::Distracted};

constexpr const char* to_string(AttentionClass c) {
  switch (c) {
    case AttentionClass::Cobot:
      return "cobot";
    case AttentionClass::Table:
      return "table";
    case AttentionClass::Distracted:
      return "distracted";
  }
  return "?";
}

std::optional<AttentionClass> attention_class_from_string(std::string_view s);

/// Probability triple over AttentionClass, canonical order, sums to 1.
struct ClassProbabilities {
  std::array<double, 3> p{0.0, 0.0, 0.0};

  double sum() const { return p[0] + p[1] + p[2]; }

  /// Ties break toward the lowest class index.
  AttentionClass argmax() const {
    int best = 0;
    for (int i = 1; i < kNumClasses; ++i)
      if (p[i] > p[best]) best = i;
    return static_cast<AttentionClass>(best);
  }
};

}  // namespace gazeattn
