#include "gazeattn/manifest.hpp"

#include <fstream>

#include "gazeattn/errors.hpp"
#include "json.hpp"

namespace gazeattn {

using nlohmann::json;

const char* to_string(Activity a) {
  switch (a) {
    case Activity::GatheringParts: return "gathering_parts";
    case Activity::Assembling: return "assembling";
    case Activity::CollaborativeJoining: return "collaborative_joining";
    case Activity::WaitingLookingAtCobot: return "waiting_looking_at_cobot";
    case Activity::WaitingDistracted: return "waiting_distracted";
  }
  return "?";
}

const char* to_string(QualityFlag f) {
  switch (f) {
    case QualityFlag::EyesNotVisible: return "eyes_not_visible";
    case QualityFlag::Occluded: return "occluded";
    case QualityFlag::Blurry: return "blurry";
  }
  return "?";
}

std::optional<Activity> activity_from_string(std::string_view s) {
  for (Activity a :
       {Activity::GatheringParts, Activity::Assembling,
        Activity::CollaborativeJoining, Activity::WaitingLookingAtCobot,
        Activity::WaitingDistracted})
    if (s == to_string(a)) return a;
  return std::nullopt;
}

std::optional<QualityFlag> quality_flag_from_string(std::string_view s) {
  for (QualityFlag f : {QualityFlag::EyesNotVisible, QualityFlag::Occluded,
                        QualityFlag::Blurry})
    if (s == to_string(f)) return f;
  return std::nullopt;
}

namespace {

// Pulls a field out of a record line, throwing SchemaError with the line
// number when it is missing or of the wrong type.
template <class T>
T field(const json& j, const char* name, int line) {
  auto it = j.find(name);
  if (it == j.end()) throw SchemaError(name, line);
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw SchemaError(name, line);
  }
}

double finite_field(const json& j, const char* name, int line) {
  const double v = field<double>(j, name, line);
  if (!std::isfinite(v)) throw SchemaError(name, line);
  return v;
}

FaceBox parse_box(const json& j, int line) {
  FaceBox b;
  b.x = field<int>(j, "x", line);
  b.y = field<int>(j, "y", line);
  b.width = field<int>(j, "w", line);
  b.height = field<int>(j, "h", line);
  b.confidence = j.value("conf", 1.0);
  if (b.width <= 0 || b.height <= 0) throw SchemaError("w", line);
  return b;
}

json box_to_json(const FaceBox& b) {
  return json{{"x", b.x}, {"y", b.y}, {"w", b.width}, {"h", b.height},
              {"conf", b.confidence}};
}

GazeSample parse_gaze(const json& j, int line) {
  GazeSample s;
  s.image = field<std::string>(j, "image", line);
  s.subject = field<std::string>(j, "subject", line);
  if (s.subject.empty()) throw SchemaError("subject", line);
  s.gaze.pitch = finite_field(j, "pitch", line);
  s.gaze.yaw = finite_field(j, "yaw", line);
  if (!s.gaze.valid()) throw SchemaError("pitch", line);
  return s;
}

AttentionSample parse_attention(const json& j, int line) {
  AttentionSample s;
  s.image = field<std::string>(j, "image", line);
  s.subject = field<std::string>(j, "subject", line);
  if (s.subject.empty()) throw SchemaError("subject", line);
  const auto cls = attention_class_from_string(
      field<std::string>(j, "label", line));
  if (!cls) throw SchemaError("label", line);
  s.label = *cls;
  if (j.contains("box")) s.box = parse_box(j.at("box"), line);
  if (j.contains("gaze")) {
    GazeDirection g;
    g.pitch = finite_field(j.at("gaze"), "pitch", line);
    g.yaw = finite_field(j.at("gaze"), "yaw", line);
    s.gaze = g;
  }
  return s;
}

SegmentAnnotation parse_segment(const json& j, int line) {
  SegmentAnnotation s;
  s.video = field<std::string>(j, "video", line);
  s.start_frame = field<std::int64_t>(j, "start", line);
  s.end_frame = field<std::int64_t>(j, "end", line);
  if (s.start_frame < 0 || s.end_frame < s.start_frame)
    throw SchemaError("start", line);
  const auto act = activity_from_string(
      field<std::string>(j, "activity", line));
  if (!act) throw SchemaError("activity", line);
  s.activity = *act;
  if (j.contains("flags")) {
    for (const auto& f : j.at("flags")) {
      const auto flag = quality_flag_from_string(f.get<std::string>());
      if (!flag) throw SchemaError("flags", line);
      s.flags.insert(*flag);
    }
  }
  return s;
}

// Shared JSON-lines reader. An optional header line carries the schema
// version; every other non-empty line is one record.
template <class Record, class Parse>
Manifest<Record> load_lines(const std::filesystem::path& path, Parse parse) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path.string());

  Manifest<Record> m;
  m.base_dir = path.has_parent_path() ? path.parent_path()
                                      : std::filesystem::path(".");
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
    if (!j.is_object()) throw ParseError("record is not an object", line_no);
    if (j.contains("schema_version")) {
      m.schema_version = j.at("schema_version").get<int>();
      if (m.schema_version > kManifestSchemaVersion)
        throw ParseError("unsupported schema_version", line_no);
      continue;
    }
    m.records.push_back(parse(j, line_no));
  }
  if (m.records.empty())
    throw EmptyManifest("manifest has no records: " + path.string());
  return m;
}

template <class Record, class ToJson>
void save_lines(const std::filesystem::path& path, const Manifest<Record>& m,
                const char* kind, ToJson to_json_fn) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write manifest: " + path.string());
  out << json{{"schema_version", m.schema_version}, {"kind", kind}}.dump()
      << "\n";
  for (const auto& r : m.records) out << to_json_fn(r).dump() << "\n";
}

}  // namespace

GazeManifest load_gaze_manifest(const std::filesystem::path& path) {
  return load_lines<GazeSample>(path, parse_gaze);
}

AttentionManifest load_attention_manifest(const std::filesystem::path& path) {
  return load_lines<AttentionSample>(path, parse_attention);
}

SegmentManifest load_segment_manifest(const std::filesystem::path& path) {
  return load_lines<SegmentAnnotation>(path, parse_segment);
}

void save_manifest(const std::filesystem::path& path, const GazeManifest& m) {
  save_lines(path, m, "gaze", [](const GazeSample& s) {
    return json{{"image", s.image},
                {"subject", s.subject},
                {"pitch", s.gaze.pitch},
                {"yaw", s.gaze.yaw}};
  });
}

void save_manifest(const std::filesystem::path& path,
                   const AttentionManifest& m) {
  save_lines(path, m, "attention", [](const AttentionSample& s) {
    json j{{"image", s.image},
           {"subject", s.subject},
           {"label", to_string(s.label)}};
    if (s.box) j["box"] = box_to_json(*s.box);
    if (s.gaze)
      j["gaze"] = json{{"pitch", s.gaze->pitch}, {"yaw", s.gaze->yaw}};
    return j;
  });
}

void save_manifest(const std::filesystem::path& path,
                   const SegmentManifest& m) {
  save_lines(path, m, "segments", [](const SegmentAnnotation& s) {
    json j{{"video", s.video},
           {"start", s.start_frame},
           {"end", s.end_frame},
           {"activity", to_string(s.activity)}};
    if (!s.flags.empty()) {
      json flags = json::array();
      for (const auto f : s.flags) flags.push_back(to_string(f));
      j["flags"] = flags;
    }
    return j;
  });
}

}  // namespace gazeattn
