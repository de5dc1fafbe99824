#pragma once

#include <deque>
#include <optional>

#include "gazeattn/frames.hpp"
#include "gazeattn/model.hpp"
#include "gazeattn/vision.hpp"

namespace gazeattn {

/// One classified frame; probs is empty when no face was found.
struct AttentionEvent {
  std::int64_t frame_index = 0;
  double timestamp = 0.0;  // seconds
  std::optional<ClassProbabilities> probs;
  std::optional<AttentionClass> top;  // argmax of probs

  bool classified() const { return probs.has_value(); }
};

struct SmoothedState {
  AttentionClass cls = AttentionClass::Distracted;
  int window = 0;   // configured window size
  int support = 0;  // events in the window agreeing with cls

  bool operator==(const SmoothedState&) const = default;
};

enum class CommandKind { ProceedNextPart, IncreasePace, NormalPace };

const char* to_string(CommandKind k);
std::optional<CommandKind> command_from_string(std::string_view s);

struct CobotCommand {
  CommandKind kind = CommandKind::NormalPace;
  bool distracted = false;

  bool operator==(const CobotCommand&) const = default;
};

struct StreamOptions {
  double crop_margin = 0.1;
};

/// Runs detector + classifier over every frame, in order; one event per
/// frame, no-face frames keep their slot with an empty probability field.
std::vector<AttentionEvent> stream_classify(FrameSource& frames,
                                            const AttentionModel& model,
                                            const FaceDetector& detector,
                                            const StreamOptions& opts = {});

/// Sliding plurality vote over the last `window` classified events. No-face
/// events do not vote and carry the previous state forward. Ties keep the
/// previous class; before any state exists they resolve to Distracted.
class MajoritySmoother {
 public:
  explicit MajoritySmoother(int window);
  SmoothedState push(const AttentionEvent& event);

 private:
  int window_;
  std::deque<AttentionClass> votes_;
  std::optional<SmoothedState> last_;
};

std::vector<SmoothedState> smooth_majority(
    std::span<const AttentionEvent> events, int window);

/// Hysteresis policy: Table -> ProceedNextPart, Cobot -> IncreasePace,
/// Distracted -> NormalPace + flag. A switch is emitted only once the new
/// state has persisted for `dwell` seconds; the first state commits
/// immediately.
class AdaptPolicy {
 public:
  explicit AdaptPolicy(double dwell_seconds);
  CobotCommand push(double timestamp, const SmoothedState& state);

 private:
  double dwell_;
  std::optional<AttentionClass> committed_;
  std::optional<AttentionClass> candidate_;
  double candidate_since_ = 0.0;
};

std::vector<CobotCommand> adapt_policy(
    std::span<const AttentionEvent> events,
    std::span<const SmoothedState> states, double dwell_seconds);

// JSON-lines logs; replaying a read log reproduces the written bytes.
void write_event_log(const std::filesystem::path& path,
                     std::span<const AttentionEvent> events);
std::vector<AttentionEvent> read_event_log(const std::filesystem::path& path);
void write_command_log(const std::filesystem::path& path,
                       std::span<const AttentionEvent> events,
                       std::span<const CobotCommand> commands);

}  // namespace gazeattn
