#include "gazeattn/runtime.hpp"

#include <fstream>

#include "gazeattn/errors.hpp"
#include "gazeattn/metrics.hpp"
#include "json.hpp"

namespace gazeattn {

using nlohmann::json;

const char* to_string(CommandKind k) {
  switch (k) {
    case CommandKind::ProceedNextPart: return "proceed_next_part";
    case CommandKind::IncreasePace: return "increase_pace";
    case CommandKind::NormalPace: return "normal_pace";
  }
  return "?";
}

std::optional<CommandKind> command_from_string(std::string_view s) {
  for (CommandKind k : {CommandKind::ProceedNextPart, CommandKind::IncreasePace,
                        CommandKind::NormalPace})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

std::vector<AttentionEvent> stream_classify(FrameSource& frames,
                                            const AttentionModel& model,
                                            const FaceDetector& detector,
                                            const StreamOptions& opts) {
  const double fps = frames.fps();
  std::vector<AttentionEvent> events;
  const std::int64_t n = frames.frame_count();
  events.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const ImageTensor frame = frames.read(i);
    AttentionEvent ev;
    ev.frame_index = i;
    ev.timestamp = static_cast<double>(i) / fps;
    const auto crop =
        vision::detect_and_crop(frame, detector, opts.crop_margin);
    if (crop) {
      const ImageTensor input = vision::normalize(
          vision::resize_to_input(*crop, model.config.input_side));
      const auto probs = predict_attention(model, {&input, 1});
      ev.probs = probs[0];
      ev.top = probs[0].argmax();
    }
    events.push_back(ev);
  }
  return events;
}

MajoritySmoother::MajoritySmoother(int window) : window_(window) {
  if (window < 1) throw InvalidConfig("smoothing window must be >= 1");
}

SmoothedState MajoritySmoother::push(const AttentionEvent& event) {
  if (event.classified()) {
    votes_.push_back(*event.top);
    if (static_cast<int>(votes_.size()) > window_) votes_.pop_front();
  } else if (last_) {
    return *last_;  // detection dropout: carry the state forward
  }

  std::array<int, kNumClasses> counts{};
  for (const auto c : votes_) ++counts[static_cast<int>(c)];
  int best = 0;
  bool tie = false;
  for (int i = 1; i < kNumClasses; ++i) {
    if (counts[i] > counts[best]) {
      best = i;
      tie = false;
    } else if (counts[i] == counts[best]) {
      tie = true;
    }
  }

  AttentionClass cls;
  if (!votes_.empty() && !tie) {
    cls = static_cast<AttentionClass>(best);
  } else if (last_) {
    cls = last_->cls;
  } else {
    cls = AttentionClass::Distracted;
  }
  const SmoothedState state{cls, window_, counts[static_cast<int>(cls)]};
  last_ = state;
  return state;
}

std::vector<SmoothedState> smooth_majority(
    std::span<const AttentionEvent> events, int window) {
  MajoritySmoother smoother(window);
  std::vector<SmoothedState> states;
  states.reserve(events.size());
  for (const auto& ev : events) states.push_back(smoother.push(ev));
  return states;
}

AdaptPolicy::AdaptPolicy(double dwell_seconds) : dwell_(dwell_seconds) {
  if (dwell_seconds < 0.0) throw InvalidConfig("dwell must be >= 0");
}

namespace {

CobotCommand command_for(AttentionClass cls) {
  switch (cls) {
    case AttentionClass::Table:
      return {CommandKind::ProceedNextPart, false};
    case AttentionClass::Cobot:
      return {CommandKind::IncreasePace, false};
    case AttentionClass::Distracted:
      return {CommandKind::NormalPace, true};
  }
  return {CommandKind::NormalPace, false};
}

}  // namespace

CobotCommand AdaptPolicy::push(double timestamp, const SmoothedState& state) {
  if (!committed_) {
    committed_ = state.cls;  // first state commits immediately
  } else if (state.cls == *committed_) {
    candidate_.reset();
  } else {
    if (!candidate_ || *candidate_ != state.cls) {
      candidate_ = state.cls;
      candidate_since_ = timestamp;
    }
    if (timestamp - candidate_since_ >= dwell_) {
      committed_ = *candidate_;
      candidate_.reset();
    }
  }
  return command_for(*committed_);
}

std::vector<CobotCommand> adapt_policy(std::span<const AttentionEvent> events,
                                       std::span<const SmoothedState> states,
                                       double dwell_seconds) {
  if (events.size() != states.size())
    throw LengthMismatch("adapt_policy: event/state streams differ in length");
  AdaptPolicy policy(dwell_seconds);
  std::vector<CobotCommand> commands;
  commands.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i)
    commands.push_back(policy.push(events[i].timestamp, states[i]));
  return commands;
}

void write_event_log(const std::filesystem::path& path,
                     std::span<const AttentionEvent> events) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write event log: " + path.string());
  for (const auto& ev : events) {
    json j{{"frame", ev.frame_index}, {"t", ev.timestamp}};
    if (ev.classified()) {
      j["p"] = ev.probs->p;
      j["class"] = to_string(*ev.top);
    } else {
      j["no_face"] = true;
    }
    out << j.dump() << "\n";
  }
}

std::vector<AttentionEvent> read_event_log(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open event log: " + path.string());
  std::vector<AttentionEvent> events;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad JSON: ") + e.what(), line_no);
    }
    AttentionEvent ev;
    ev.frame_index = j.at("frame").get<std::int64_t>();
    ev.timestamp = j.at("t").get<double>();
    if (j.contains("p")) {
      ClassProbabilities cp;
      cp.p = j.at("p").get<std::array<double, 3>>();
      ev.probs = cp;
      ev.top = cp.argmax();
    }
    events.push_back(ev);
  }
  return events;
}

void write_command_log(const std::filesystem::path& path,
                       std::span<const AttentionEvent> events,
                       std::span<const CobotCommand> commands) {
  if (events.size() != commands.size())
    throw LengthMismatch("write_command_log: stream lengths differ");
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write command log: " + path.string());
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const json j{{"frame", events[i].frame_index},
                 {"t", events[i].timestamp},
                 {"command", to_string(commands[i].kind)},
                 {"distracted", commands[i].distracted}};
    out << j.dump() << "\n";
  }
}

}  // namespace gazeattn
