#include "gazeattn/model.hpp"

#include "gazeattn/checkpoint.hpp"
#include "gazeattn/losses.hpp"

namespace gazeattn {

void fill_input(const ImageTensor& image, const nn::Shape& expect,
                std::vector<float>& dst) {
  if (image.stage != PixelStage::Normalized)
    throw ShapeError("model input must be a normalized-stage image");
  if (image.height != expect.h || image.width != expect.w ||
      image.channels != expect.c)
    throw ShapeError("model input is " + std::to_string(image.height) + "x" +
                     std::to_string(image.width) + "x" +
                     std::to_string(image.channels) + ", expected " +
                     std::to_string(expect.h) + "x" + std::to_string(expect.w) +
                     "x" + std::to_string(expect.c));
  dst.assign(image.norm.begin(), image.norm.end());
}

GazeModel build_gaze_model(const BackboneConfig& cfg, std::uint64_t seed) {
  GazeModel model{cfg, build_net(cfg, 2, seed)};
  if (cfg.pretrained) {
    const ModelCheckpoint src = load_checkpoint(*cfg.pretrained);
    int copied = 0;
    for (const auto& t : src.tensors) {
      const auto dot = t.name.rfind('.');
      if (dot == std::string::npos) continue;
      auto* layer = model.net.find(t.name.substr(0, dot));
      if (!layer || layer->kind() != nn::LayerKind::Conv) continue;
      auto& dst = t.name.substr(dot + 1) == "w" ? layer->w : layer->b;
      if (dst.size() != t.data.size()) continue;
      std::copy(t.data.begin(), t.data.end(), dst.begin());
      ++copied;
    }
    if (copied == 0)
      throw IncompatibleCheckpoint(
          "pretrained checkpoint shares no convolutional weights with " +
          std::string(to_string(cfg.arch)));
  }
  return model;
}

GazeDirection predict_gaze(const GazeModel& model, const ImageTensor& image) {
  auto ws = model.net.make_workspace(false);
  fill_input(image, model.net.input_shape, ws.act[0]);
  const auto out = model.net.forward(ws);
  return GazeDirection{out[0], out[1]};
}

std::vector<ClassProbabilities> predict_attention(
    const AttentionModel& model, std::span<const ImageTensor> images) {
  auto ws = model.net.make_workspace(false);
  std::vector<ClassProbabilities> result;
  result.reserve(images.size());
  std::array<float, 3> probs;
  for (const auto& img : images) {
    fill_input(img, model.net.input_shape, ws.act[0]);
    const auto logits = model.net.forward(ws);
    nn::softmax<float>(logits, probs);
    ClassProbabilities cp;
    // Renormalize in double so the triple sums to 1 to full precision.
    const double sum = static_cast<double>(probs[0]) + probs[1] + probs[2];
    for (int i = 0; i < 3; ++i) cp.p[i] = probs[i] / sum;
    result.push_back(cp);
  }
  return result;
}

}  // namespace gazeattn
