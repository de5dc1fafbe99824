#pragma once

#include <span>
#include <vector>

#include "gazeattn/backbone.hpp"
#include "gazeattn/image.hpp"
#include "gazeattn/types.hpp"

namespace gazeattn {

/// Gaze regressor: backbone + fully connected layer + 2-output head
/// (pitch, yaw).
struct GazeModel {
  BackboneConfig config;
  nn::Net<float> net;

  GazeModel clone() const { return GazeModel{config, net.clone()}; }
};

/// Attention classifier: same backbone with the convolutional layers
/// frozen and a 3-output head.
struct AttentionModel {
  BackboneConfig config;
  nn::Net<float> net;

  AttentionModel clone() const { return AttentionModel{config, net.clone()}; }
};

/// Deterministic construction for a given seed. When cfg.pretrained names a
/// checkpoint, matching convolutional weights are copied over the random
/// initialization.
GazeModel build_gaze_model(const BackboneConfig& cfg, std::uint64_t seed);

/// Single normalized side x side image -> gaze angles.
GazeDirection predict_gaze(const GazeModel& model, const ImageTensor& image);

/// Batch of normalized images -> one probability triple each, order
/// preserved. Probabilities sum to 1; argmax ties break to the lowest index.
std::vector<ClassProbabilities> predict_attention(
    const AttentionModel& model, std::span<const ImageTensor> images);

/// Copies a normalized image into a network input buffer, checking shape.
void fill_input(const ImageTensor& image, const nn::Shape& expect,
                std::vector<float>& dst);

}  // namespace gazeattn
