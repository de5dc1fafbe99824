#include "gazeattn/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "gazeattn/errors.hpp"
#include "gazeattn/image_io.hpp"
#include "gazeattn/rng.hpp"

namespace gazeattn {

void ZoneGeometry::validate() const {
  if (!(pitch_range > 0.0 && yaw_range > 0.0))
    throw InvalidGeometry("gaze sampling ranges must be positive");
  if (boundary_margin < 0.0)
    throw InvalidGeometry("boundary margin must be >= 0");
  // Each class must keep a non-empty sampling interval after the margin.
  const double m = boundary_margin;
  if (!(-pitch_range < pitch_table - m))
    throw InvalidGeometry("Table zone is unreachable: pitch_table too low");
  if (!(pitch_table + m < pitch_range))
    throw InvalidGeometry("Cobot/Distracted zones are unreachable: pitch_table too high");
  if (!(yaw_cobot + m < yaw_range))
    throw InvalidGeometry("Cobot zone is unreachable: yaw_cobot too high");
  if (!(-yaw_range < yaw_cobot - m))
    throw InvalidGeometry("Distracted zone is unreachable: yaw_cobot too low");
}

std::string synthetic_subject_id(int subject_index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "s%02d", subject_index + 1);
  return buf;
}

namespace {

struct Rgb {
  std::uint8_t r, g, b;
};

// Dark, distinct background tint per subject: hue walks the golden-ratio
// sequence, so any number of subjects stays well spread.
Rgb subject_tint(int subject_index) {
  const double hue = std::fmod(0.61803398875 * subject_index, 1.0) * 6.0;
  const int i = static_cast<int>(hue);
  const double f = hue - i;
  const double v = 90.0, lo = 30.0;
  const double q = v - (v - lo) * f;
  const double t = lo + (v - lo) * f;
  double r = lo, g = lo, b = lo;
  switch (i % 6) {
    case 0: r = v; g = t; break;
    case 1: r = q; g = v; break;
    case 2: g = v; b = t; break;
    case 3: g = q; b = v; break;
    case 4: r = t; b = v; break;
    case 5: r = v; b = q; break;
  }
  return {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
          static_cast<std::uint8_t>(b)};
}

double disc_scale(const SyntheticConfig& cfg) {
  const double max_range =
      std::max(cfg.geometry.pitch_range, cfg.geometry.yaw_range);
  return (cfg.image_side / 2.0 - cfg.disc_radius - 2.0) / max_range;
}

}  // namespace

ImageTensor render_synthetic_frame(const SyntheticConfig& cfg,
                                   int subject_index,
                                   const GazeDirection& gaze,
                                   std::uint64_t noise_seed) {
  const int side = cfg.image_side;
  ImageTensor img = ImageTensor::make_raw(side, side);
  const Rgb tint = subject_tint(subject_index);
  Rng noise(noise_seed);

  const double k = disc_scale(cfg);
  const double cx = side / 2.0;
  const double cy = side / 2.0;
  const double u = cx + k * gaze.yaw;
  const double v = cy - k * gaze.pitch;
  const double r = cfg.disc_radius;

  for (int y = 0; y < side; ++y) {
    // Gentle vertical shading so frames are not flat color fields.
    const double shade = 1.0 - 0.15 * y / side;
    for (int x = 0; x < side; ++x) {
      double base_r = tint.r * shade, base_g = tint.g * shade,
             base_b = tint.b * shade;
      const double d = std::hypot(x + 0.5 - u, y + 0.5 - v);
      // Anti-aliased edge keeps sub-pixel position information.
      const double alpha = std::clamp(r + 0.5 - d, 0.0, 1.0);
      base_r += alpha * (235.0 - base_r);
      base_g += alpha * (235.0 - base_g);
      base_b += alpha * (235.0 - base_b);
      const double n = noise.uniform(-6.0, 6.0);
      img.at(y, x, 0) = static_cast<std::uint8_t>(
          std::clamp(std::lround(base_r + n), 0l, 255l));
      img.at(y, x, 1) = static_cast<std::uint8_t>(
          std::clamp(std::lround(base_g + n), 0l, 255l));
      img.at(y, x, 2) = static_cast<std::uint8_t>(
          std::clamp(std::lround(base_b + n), 0l, 255l));
    }
  }
  return img;
}

SyntheticResult generate_synthetic(const SyntheticConfig& cfg) {
  if (cfg.subjects < 2)
    throw InvalidConfig("synthetic data needs at least 2 subjects");
  if (cfg.per_class < 1)
    throw InvalidConfig("synthetic data needs per_class >= 1");
  if (cfg.gaze_per_subject < 1)
    throw InvalidConfig("synthetic data needs gaze_per_subject >= 1");
  cfg.geometry.validate();

  const auto& geo = cfg.geometry;
  std::filesystem::create_directories(cfg.out_dir);

  GazeManifest gaze_manifest;
  gaze_manifest.base_dir = cfg.out_dir;
  AttentionManifest attn_manifest;
  attn_manifest.base_dir = cfg.out_dir;

  const FaceBox full_frame{0, 0, cfg.image_side, cfg.image_side, 1.0};

  for (int s = 0; s < cfg.subjects; ++s) {
    const std::string subject = synthetic_subject_id(s);
    Rng rng(Rng::derive(cfg.seed, static_cast<std::uint64_t>(s)));

    for (int i = 0; i < cfg.gaze_per_subject; ++i) {
      GazeDirection gaze{rng.uniform(-geo.pitch_range, geo.pitch_range),
                         rng.uniform(-geo.yaw_range, geo.yaw_range)};
      char name[64];
      std::snprintf(name, sizeof(name), "gaze/%s/g%04d.png", subject.c_str(),
                    i);
      const ImageTensor img =
          render_synthetic_frame(cfg, s, gaze, rng.next_u64());
      save_image(cfg.out_dir / name, img);
      gaze_manifest.records.push_back({name, subject, gaze});
    }

    const double m = geo.boundary_margin;
    for (int i = 0; i < cfg.per_class; ++i) {
      for (const AttentionClass cls : kAllClasses) {
        GazeDirection gaze;
        switch (cls) {
          case AttentionClass::Table:
            gaze.pitch = rng.uniform(-geo.pitch_range, geo.pitch_table - m);
            gaze.yaw = rng.uniform(-geo.yaw_range, geo.yaw_range);
            break;
          case AttentionClass::Cobot:
            gaze.pitch = rng.uniform(geo.pitch_table + m, geo.pitch_range);
            gaze.yaw = rng.uniform(geo.yaw_cobot + m, geo.yaw_range);
            break;
          case AttentionClass::Distracted:
            gaze.pitch = rng.uniform(geo.pitch_table + m, geo.pitch_range);
            gaze.yaw = rng.uniform(-geo.yaw_range, geo.yaw_cobot - m);
            break;
        }
        char name[64];
        std::snprintf(name, sizeof(name), "attn/%s/%s_%04d.png",
                      subject.c_str(), to_string(cls), i);
        const ImageTensor img =
            render_synthetic_frame(cfg, s, gaze, rng.next_u64());
        save_image(cfg.out_dir / name, img);
        AttentionSample sample;
        sample.image = name;
        sample.subject = subject;
        sample.label = geo.zone_of(gaze);
        sample.box = full_frame;
        sample.gaze = gaze;
        attn_manifest.records.push_back(std::move(sample));
      }
    }
  }

  SyntheticResult result;
  result.gaze_manifest = cfg.out_dir / "gaze.jsonl";
  result.attention_manifest = cfg.out_dir / "attention.jsonl";
  result.gaze_images = static_cast<int>(gaze_manifest.records.size());
  result.attention_images = static_cast<int>(attn_manifest.records.size());
  save_manifest(result.gaze_manifest, gaze_manifest);
  save_manifest(result.attention_manifest, attn_manifest);
  return result;
}

}  // namespace gazeattn
