#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gazeattn/losses.hpp"
#include "gazeattn/model.hpp"

namespace gazeattn {

struct BrightnessRange {
  double lo = 0.75;
  double hi = 1.25;
};

/// Hyperparameters for one training run. The two factory functions carry
/// the published defaults for each stage.
struct TrainConfig {
  double learning_rate = 0.001;
  int batch_size = 32;
  nn::LossKind loss = nn::LossKind::MeanAbsoluteError;
  int plateau_patience = 5;      // epochs without improvement before lr drops
  double plateau_factor = 0.1;
  int early_stop_patience = 7;   // epochs without improvement before stop
  int max_epochs = 60;
  double min_delta = 0.0;        // improvement must beat best by this much
  std::uint64_t seed = 0;
  std::optional<BrightnessRange> augmentation;

  void validate() const;

  /// Gaze stage: SGD lr 0.001, batch 32, MAE, reduce lr x0.1 after 5 flat
  /// epochs, stop after 7, strict improvement.
  static TrainConfig gaze_defaults();

  /// Transfer stage: SGD lr 0.01, batch 15, cross-entropy, brightness
  /// augmentation +-25%, stop on a training-loss plateau (patience 5,
  /// min-delta 1e-4), at most 50 epochs.
  static TrainConfig attention_defaults();
};

struct EpochStats {
  double train_loss = 0.0;
  std::optional<double> val_loss;
  double learning_rate = 0.0;
};

enum class SchedulerAction { Continue, ReduceLr, Stop };

struct SchedulerDecision {
  SchedulerAction action = SchedulerAction::Continue;
  double lr_scale = 1.0;  // factor to apply when action == ReduceLr
};

/// Replays the whole loss history and returns the decision for its last
/// entry. Improvement is strict against the best-so-far (beyond min_delta);
/// the plateau counter resets when a reduction fires; stop dominates reduce
/// when both hit in the same epoch.
SchedulerDecision scheduler_step(std::span<const double> losses,
                                 int plateau_patience, double factor,
                                 int early_patience, double min_delta = 0.0);

/// A sample ready for the training loop: cropped and resized to the model
/// input side, still raw so augmentation can run per epoch.
struct PreparedGazeSample {
  ImageTensor image;
  GazeDirection gaze;
  std::string subject;
};

struct PreparedAttentionSample {
  ImageTensor image;
  AttentionClass label = AttentionClass::Distracted;
  std::string subject;
};

struct ModelCheckpoint;  // checkpoint.hpp

/// Trains the gaze regressor in place (MAE loss, plateau schedule and early
/// stopping driven by scheduler_step on the validation loss); the model and
/// the returned checkpoint hold the best-validation-epoch weights.
ModelCheckpoint train_gaze(GazeModel& model,
                           std::span<const PreparedGazeSample> train,
                           std::span<const PreparedGazeSample> val,
                           const TrainConfig& cfg);

/// Copies a gaze checkpoint into an attention model: convolutional layers
/// bit-exact and frozen, fully connected layer copied trainable, head
/// replaced by a fresh 3-output layer seeded from head_seed (derived from
/// the checkpoint's training seed when not given).
AttentionModel transfer_to_attention(
    const ModelCheckpoint& gaze_checkpoint,
    std::optional<std::uint64_t> head_seed = std::nullopt);

/// Trains the attention head + fully connected layer (frozen layers receive
/// no updates). Stops on a training-loss plateau or max_epochs.
ModelCheckpoint train_attention(
    AttentionModel& model, std::span<const PreparedAttentionSample> train,
    const TrainConfig& cfg);

}  // namespace gazeattn
