#include <fstream>

#include "doctest.h"
#include "gazeattn/assembly.hpp"
#include "gazeattn/image_io.hpp"
#include "gazeattn/splits.hpp"
#include "gazeattn/synthetic.hpp"
#include "test_helpers.hpp"

using namespace gazeattn;
using testutil::TempDir;

namespace {

void write_lines(const std::filesystem::path& path,
                 const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::trunc);
  for (const auto& l : lines) out << l << "\n";
}

GazeManifest fake_gaze_manifest(int subjects, int per_subject) {
  GazeManifest m;
  for (int s = 0; s < subjects; ++s)
    for (int i = 0; i < per_subject; ++i)
      m.records.push_back({"img_" + std::to_string(s) + "_" +
                               std::to_string(i) + ".png",
                           synthetic_subject_id(s),
                           GazeDirection{0.1, -0.1}});
  return m;
}

}  // namespace

TEST_CASE("load_manifest: three valid gaze lines parse") {
  TempDir dir("manifest_ok");
  write_lines(dir.path() / "g.jsonl",
              {R"({"image":"a.png","subject":"s01","pitch":0.1,"yaw":0.2})",
               R"({"image":"b.png","subject":"s01","pitch":-0.1,"yaw":0.0})",
               R"({"image":"c.png","subject":"s02","pitch":0.0,"yaw":0.3})"});
  const auto m = load_gaze_manifest(dir.path() / "g.jsonl");
  CHECK(m.records.size() == 3);
  CHECK(subjects_of(m) == std::vector<std::string>{"s01", "s02"});
}

TEST_CASE("load_manifest: missing subject raises SchemaError with the line") {
  TempDir dir("manifest_schema");
  write_lines(dir.path() / "g.jsonl",
              {R"({"image":"a.png","subject":"s01","pitch":0.1,"yaw":0.2})",
               R"({"image":"b.png","pitch":-0.1,"yaw":0.0})"});
  try {
    load_gaze_manifest(dir.path() / "g.jsonl");
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.field() == "subject");
    CHECK(e.line() == 2);
  }
}

TEST_CASE("load_manifest: empty file raises EmptyManifest") {
  TempDir dir("manifest_empty");
  write_lines(dir.path() / "g.jsonl", {});
  CHECK_THROWS_AS(load_gaze_manifest(dir.path() / "g.jsonl"), EmptyManifest);
}

TEST_CASE("load_manifest: malformed JSON raises ParseError with the line") {
  TempDir dir("manifest_parse");
  write_lines(dir.path() / "g.jsonl",
              {R"({"image":"a.png","subject":"s01","pitch":0.1,"yaw":0.2})",
               "{not json"});
  try {
    load_gaze_manifest(dir.path() / "g.jsonl");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("manifest round-trips through save and load") {
  TempDir dir("manifest_roundtrip");
  AttentionManifest m;
  AttentionSample s;
  s.image = "x.png";
  s.subject = "s01";
  s.label = AttentionClass::Cobot;
  s.box = FaceBox{1, 2, 3, 4, 0.5};
  s.gaze = GazeDirection{0.25, -0.125};
  m.records.push_back(s);
  save_manifest(dir.path() / "a.jsonl", m);
  const auto loaded = load_attention_manifest(dir.path() / "a.jsonl");
  REQUIRE(loaded.records.size() == 1);
  CHECK(loaded.records[0].label == AttentionClass::Cobot);
  CHECK(loaded.records[0].box->width == 3);
  CHECK(loaded.records[0].gaze->pitch == 0.25);
}

TEST_CASE("split_by_subject: 80 subjects, hold out 8") {
  const auto m = fake_gaze_manifest(80, 3);
  const auto subs = subjects_of(m);
  const std::set<std::string> held(subs.end() - 8, subs.end());
  const auto split = split_by_subject(m, held);
  CHECK(subjects_of(split.train).size() == 72);
  CHECK(subjects_of(split.val).size() == 8);
  CHECK(split.train.records.size() + split.val.records.size() ==
        m.records.size());
}

TEST_CASE("split_by_subject: empty held-out set keeps everything in train") {
  const auto m = fake_gaze_manifest(5, 2);
  const auto split = split_by_subject(m, {});
  CHECK(split.val.records.empty());
  CHECK(split.train.records.size() == m.records.size());
}

TEST_CASE("split_by_subject: unknown subject is rejected") {
  const auto m = fake_gaze_manifest(3, 1);
  CHECK_THROWS_AS(split_by_subject(m, {"nobody"}), UnknownSubject);
}

TEST_CASE("loso_folds: one fold per subject, exact partition") {
  const auto m = fake_gaze_manifest(8, 4);
  const auto folds = loso_folds(m);
  REQUIRE(folds.size() == 8);
  std::size_t total_test = 0;
  for (const auto& fold : folds) {
    total_test += fold.test.records.size();
    for (const auto& r : fold.test.records)
      CHECK(r.subject == fold.held_out_subject);
    for (const auto& r : fold.train.records)
      CHECK(r.subject != fold.held_out_subject);
  }
  CHECK(total_test == m.records.size());
}

TEST_CASE("loso_folds: fewer than two subjects is an error") {
  CHECK_THROWS_AS(loso_folds(fake_gaze_manifest(1, 5)), TooFewSubjects);
}

TEST_CASE("segment frame selection: first, middle, last") {
  SegmentAnnotation seg;
  seg.start_frame = 10;
  seg.end_frame = 110;
  CHECK(segment_frame_indices(seg) == std::vector<std::int64_t>{10, 60, 110});
  seg.end_frame = 11;
  CHECK(segment_frame_indices(seg) == std::vector<std::int64_t>{10, 11});
  seg.start_frame = 5;
  seg.end_frame = 5;
  CHECK(segment_frame_indices(seg) == std::vector<std::int64_t>{5});
}

TEST_CASE("extract_segment_frames reads from a frame directory") {
  TempDir dir("frames");
  for (int i = 0; i < 12; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "f%04d.png", i);
    save_image(dir.path() / name,
               testutil::uniform_image(16, 16, static_cast<std::uint8_t>(i)));
  }
  DirectoryFrameSource source(dir.path());
  REQUIRE(source.frame_count() == 12);

  SegmentAnnotation seg;
  seg.start_frame = 2;
  seg.end_frame = 10;
  const auto frames = extract_segment_frames(seg, source);
  REQUIRE(frames.size() == 3);
  CHECK(frames[0].first == 2);
  CHECK(frames[1].first == 6);
  CHECK(frames[2].first == 10);
  CHECK(frames[0].second.at(0, 0, 0) == 2);

  seg.end_frame = 99;
  CHECK_THROWS_AS(extract_segment_frames(seg, source), FrameReadError);
}

TEST_CASE("build_assembly_test_set maps, rejects and counts") {
  TempDir dir("assembly");
  // Video A: frames with a bright blob (face-like); video B: uniform
  // frames the detector must reject.
  const auto video_a = dir.path() / "p01";
  const auto video_b = dir.path() / "p02";
  for (int i = 0; i < 30; ++i) {
    auto with_blob = testutil::uniform_image(64, 64, 15);
    for (int y = 20; y < 36; ++y)
      for (int x = 24; x < 40; ++x)
        for (int c = 0; c < 3; ++c) with_blob.at(y, x, c) = 235;
    char name[32];
    std::snprintf(name, sizeof(name), "f%04d.png", i);
    save_image(video_a / name, with_blob);
    save_image(video_b / name, testutil::uniform_image(64, 64, 15));
  }

  std::vector<SegmentAnnotation> segments;
  SegmentAnnotation seg;
  seg.video = "p01";
  seg.start_frame = 0;
  seg.end_frame = 10;
  seg.activity = Activity::Assembling;  // -> Table
  segments.push_back(seg);
  seg.activity = Activity::WaitingLookingAtCobot;  // -> Cobot
  seg.start_frame = 11;
  seg.end_frame = 20;
  segments.push_back(seg);
  seg.activity = Activity::GatheringParts;  // skipped
  segments.push_back(seg);
  seg.activity = Activity::WaitingDistracted;  // flagged -> all rejected
  seg.flags = {QualityFlag::EyesNotVisible};
  seg.start_frame = 21;
  seg.end_frame = 29;
  segments.push_back(seg);
  seg.flags.clear();
  seg.video = "p02";  // no face -> rejected per frame
  seg.activity = Activity::WaitingDistracted;
  seg.start_frame = 0;
  seg.end_frame = 6;
  segments.push_back(seg);

  BrightBlobDetector detector;
  AssemblyBuildOptions opts;
  opts.out_dir = dir.path() / "out";
  opts.detector = &detector;

  const auto result = build_assembly_test_set(
      segments,
      [&](const std::filesystem::path& locator) {
        return open_frame_source(dir.path() / locator);
      },
      opts);

  CHECK(result.mapped_segments == 4);
  CHECK(result.extracted_frames == 12);
  CHECK(result.manifest.records.size() == 6);  // two clean p01 segments
  CHECK(result.rejections.size() == 6);        // 3 flagged + 3 no-face
  CHECK(result.manifest.records.size() + result.rejections.size() ==
        static_cast<std::size_t>(result.extracted_frames));

  int flag_rejects = 0, no_face_rejects = 0;
  for (const auto& r : result.rejections) {
    if (r.reason == "flag:eyes_not_visible") ++flag_rejects;
    if (r.reason == "no-face") ++no_face_rejects;
  }
  CHECK(flag_rejects == 3);
  CHECK(no_face_rejects == 3);

  int table = 0, cobot = 0;
  for (const auto& r : result.manifest.records) {
    if (r.label == AttentionClass::Table) ++table;
    if (r.label == AttentionClass::Cobot) ++cobot;
    CHECK(r.subject == "p01");
  }
  CHECK(table == 3);
  CHECK(cobot == 3);

  write_rejection_csv(dir.path() / "rej.csv", result.rejections);
  std::ifstream in(dir.path() / "rej.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "video,segment,frame,reason");
}

TEST_CASE("zone geometry: classification and validation") {
  ZoneGeometry geo;
  CHECK(geo.zone_of({-0.5, 0.0}) == AttentionClass::Table);
  CHECK(geo.zone_of({0.0, 0.5}) == AttentionClass::Cobot);
  CHECK(geo.zone_of({0.0, 0.0}) == AttentionClass::Distracted);
  CHECK_NOTHROW(geo.validate());

  ZoneGeometry broken = geo;
  broken.pitch_table = -0.7;  // below the sampled pitch range
  CHECK_THROWS_AS(broken.validate(), InvalidGeometry);
  broken = geo;
  broken.yaw_cobot = 0.7;
  CHECK_THROWS_AS(broken.validate(), InvalidGeometry);
}

TEST_CASE("generate_synthetic: deterministic, consistent, right-sized") {
  TempDir dir("synth");
  SyntheticConfig cfg;
  cfg.subjects = 2;
  cfg.per_class = 2;
  cfg.gaze_per_subject = 3;
  cfg.seed = 7;
  cfg.image_side = 32;
  cfg.disc_radius = 4.0;
  cfg.out_dir = dir.path() / "a";
  const auto first = generate_synthetic(cfg);
  CHECK(first.gaze_images == 6);
  CHECK(first.attention_images == 12);

  cfg.out_dir = dir.path() / "b";
  generate_synthetic(cfg);

  // Byte-identical across runs with the same seed.
  for (const auto& entry :
       std::filesystem::recursive_directory_iterator(dir.path() / "a")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(entry.path(), dir.path() / "a");
    std::ifstream fa(entry.path(), std::ios::binary);
    std::ifstream fb(dir.path() / "b" / rel, std::ios::binary);
    const std::string ba((std::istreambuf_iterator<char>(fa)),
                         std::istreambuf_iterator<char>());
    const std::string bb((std::istreambuf_iterator<char>(fb)),
                         std::istreambuf_iterator<char>());
    CHECK(ba == bb);
  }

  // Stored labels equal the zone of the stored gaze for every record.
  const auto manifest = load_attention_manifest(first.attention_manifest);
  int per_class[3] = {0, 0, 0};
  for (const auto& r : manifest.records) {
    REQUIRE(r.gaze.has_value());
    CHECK(cfg.geometry.zone_of(*r.gaze) == r.label);
    ++per_class[static_cast<int>(r.label)];
  }
  CHECK(per_class[0] == 4);
  CHECK(per_class[1] == 4);
  CHECK(per_class[2] == 4);
}

TEST_CASE("generate_synthetic: rejects impossible geometry") {
  TempDir dir("synth_bad");
  SyntheticConfig cfg;
  cfg.subjects = 2;
  cfg.per_class = 1;
  cfg.out_dir = dir.path();
  cfg.geometry.yaw_cobot = 10.0;  // Cobot zone unreachable
  CHECK_THROWS_AS(generate_synthetic(cfg), InvalidGeometry);
}
