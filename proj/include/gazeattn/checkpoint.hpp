#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gazeattn/model.hpp"
#include "gazeattn/train.hpp"

namespace gazeattn {

inline constexpr int kCheckpointVersion = 1;

struct NamedTensor {
  std::string name;        // "<layer>.w" or "<layer>.b"
  std::vector<int> dims;
  std::vector<float> data;
};

/// The transfer-learning handoff object: everything needed to rebuild a
/// model and continue from it. On disk: magic + version + JSON header +
/// little-endian float32 blobs + CRC32 over the whole file.
struct ModelCheckpoint {
  int format_version = kCheckpointVersion;
  std::string model_kind;  // "gaze" | "attention"
  BackboneConfig backbone;
  TrainConfig train_config;
  std::vector<EpochStats> history;
  std::vector<NamedTensor> tensors;
  std::vector<std::string> frozen_layers;
};

ModelCheckpoint checkpoint_from(const GazeModel& model, const TrainConfig& cfg,
                                std::vector<EpochStats> history);
ModelCheckpoint checkpoint_from(const AttentionModel& model,
                                const TrainConfig& cfg,
                                std::vector<EpochStats> history);

void save_checkpoint(const ModelCheckpoint& ckpt,
                     const std::filesystem::path& path);

/// Throws VersionMismatch for files from a newer format, CorruptCheckpoint
/// when the checksum or structure does not hold up.
ModelCheckpoint load_checkpoint(const std::filesystem::path& path);

GazeModel gaze_model_from(const ModelCheckpoint& ckpt);
AttentionModel attention_model_from(const ModelCheckpoint& ckpt);

}  // namespace gazeattn
