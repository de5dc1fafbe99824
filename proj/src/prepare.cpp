#include "gazeattn/prepare.hpp"

#include "gazeattn/image_io.hpp"

namespace gazeattn {

ImageTensor ImageCache::get(const std::filesystem::path& path) {
  const std::string key = path.string();
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = images_.find(key);
    if (it != images_.end()) return it->second;
  }
  ImageTensor img = load_image(path);
  std::lock_guard<std::mutex> lock(mu_);
  return images_.emplace(key, std::move(img)).first->second;
}

namespace {

ImageTensor load_via(const PrepareOptions& opts,
                     const std::filesystem::path& path) {
  return opts.cache ? opts.cache->get(path) : load_image(path);
}

// Shared crop policy: precomputed box, then detector, then the full frame.
std::optional<ImageTensor> crop_for(const ImageTensor& img,
                                    const std::optional<FaceBox>& box,
                                    const PrepareOptions& opts) {
  if (box) return vision::crop_box(img, *box, opts.crop_margin);
  if (opts.detector)
    return vision::detect_and_crop(img, *opts.detector, opts.crop_margin);
  return img;
}

}  // namespace

PreparedAttention prepare_attention_samples(const AttentionManifest& manifest,
                                            const PrepareOptions& opts) {
  PreparedAttention out;
  out.samples.reserve(manifest.records.size());
  for (const auto& rec : manifest.records) {
    const ImageTensor img = load_via(opts, manifest.resolve(rec.image));
    auto crop = crop_for(img, rec.box, opts);
    if (!crop) {
      ++out.dropped_no_face;
      continue;
    }
    out.samples.push_back({vision::resize_to_input(*crop, opts.side),
                           rec.label, rec.subject});
  }
  return out;
}

std::vector<PreparedGazeSample> prepare_gaze_samples(
    const GazeManifest& manifest, const PrepareOptions& opts) {
  std::vector<PreparedGazeSample> out;
  out.reserve(manifest.records.size());
  for (const auto& rec : manifest.records) {
    const ImageTensor img = load_via(opts, manifest.resolve(rec.image));
    auto crop = crop_for(img, std::nullopt, opts);
    out.push_back({vision::resize_to_input(*crop, opts.side), rec.gaze,
                   rec.subject});
  }
  return out;
}

}  // namespace gazeattn
