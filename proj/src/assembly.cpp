#include "gazeattn/assembly.hpp"

#include <fstream>
#include <map>

#include "gazeattn/image_io.hpp"

namespace gazeattn {

std::optional<AttentionClass> attention_class_of(Activity activity) {
  switch (activity) {
    case Activity::Assembling:
      return AttentionClass::Table;
    case Activity::WaitingLookingAtCobot:
      return AttentionClass::Cobot;
    case Activity::WaitingDistracted:
      return AttentionClass::Distracted;
    case Activity::GatheringParts:
    case Activity::CollaborativeJoining:
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

std::string flags_reason(const std::set<QualityFlag>& flags) {
  std::string reason = "flag:";
  bool first = true;
  for (const auto f : flags) {
    if (!first) reason += "+";
    reason += to_string(f);
    first = false;
  }
  return reason;
}

}  // namespace

AssemblyBuildResult build_assembly_test_set(
    std::span<const SegmentAnnotation> annotations,
    const FrameSourceFactory& open_video, const AssemblyBuildOptions& opts) {
  if (!opts.detector)
    throw InvalidConfig("build_assembly_test_set needs a face detector");
  std::filesystem::create_directories(opts.out_dir);

  AssemblyBuildResult result;
  result.manifest.base_dir = opts.out_dir;
  std::map<std::string, std::unique_ptr<FrameSource>> sources;

  for (std::size_t seg_idx = 0; seg_idx < annotations.size(); ++seg_idx) {
    const auto& seg = annotations[seg_idx];
    const auto cls = attention_class_of(seg.activity);
    if (!cls) continue;
    ++result.mapped_segments;
    const std::string subject =
        std::filesystem::path(seg.video).stem().string();

    if (!seg.flags.empty()) {
      // Flagged segments are rejected whole; the frame indices still count.
      const std::string reason = flags_reason(seg.flags);
      for (const auto idx : segment_frame_indices(seg)) {
        ++result.extracted_frames;
        result.rejections.push_back(
            {seg.video, static_cast<int>(seg_idx), idx, reason});
      }
      continue;
    }

    auto it = sources.find(seg.video);
    if (it == sources.end())
      it = sources.emplace(seg.video, open_video(seg.video)).first;
    const auto frames = extract_segment_frames(seg, *it->second);

    for (const auto& [idx, frame] : frames) {
      ++result.extracted_frames;
      const auto crop =
          vision::detect_and_crop(frame, *opts.detector, opts.crop_margin);
      if (!crop) {
        result.rejections.push_back(
            {seg.video, static_cast<int>(seg_idx), idx, "no-face"});
        continue;
      }
      char name[128];
      std::snprintf(name, sizeof(name), "%s_seg%03zu_f%06lld.png",
                    subject.c_str(), seg_idx,
                    static_cast<long long>(idx));
      save_image(opts.out_dir / name, *crop);
      AttentionSample sample;
      sample.image = name;
      sample.subject = subject;
      sample.label = *cls;
      result.manifest.records.push_back(std::move(sample));
    }
  }
  return result;
}

void write_rejection_csv(const std::filesystem::path& path,
                         std::span<const Rejection> rejections) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write rejection report: " + path.string());
  out << "video,segment,frame,reason\n";
  for (const auto& r : rejections)
    out << r.video << "," << r.segment_index << "," << r.frame << ","
        << r.reason << "\n";
}

}  // namespace gazeattn
