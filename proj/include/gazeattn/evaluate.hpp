#pragma once

#include <functional>

#include "gazeattn/metrics.hpp"
#include "gazeattn/prepare.hpp"

namespace gazeattn {

struct FoldReport {
  std::string fold_id;  // held-out subject, or a model name
  ConfusionMatrix cm;
  FoldMetrics metrics;
};

struct LosoReport {
  std::vector<FoldReport> folds;
  double average_accuracy = 0.0;
  double average_macro_f1 = 0.0;
};

/// Arithmetic means over the fold metrics.
LosoReport aggregate_folds(std::vector<FoldReport> folds);

/// Classifies prepared samples and counts them against their labels.
ConfusionMatrix evaluate_on(const AttentionModel& model,
                            std::span<const PreparedAttentionSample> samples);

/// Trains one attention model per subject (via `trainer`) and evaluates it
/// on the held-out subject. Folds are keyed and ordered by subject id; each
/// fold's trainer seed derives from (seed, fold rank), so results do not
/// depend on record order. jobs > 1 trains folds concurrently.
using AttentionTrainer = std::function<AttentionModel(
    const AttentionManifest& train, std::uint64_t seed)>;

struct LosoRunOptions {
  std::uint64_t seed = 0;
  int jobs = 1;
  PrepareOptions prepare;  // how held-out samples become model inputs
  // Called with each finished fold (subject, report); may be empty.
  std::function<void(const FoldReport&)> on_fold;
};

LosoReport run_loso(const AttentionManifest& manifest,
                    const AttentionTrainer& trainer,
                    const LosoRunOptions& opts);

/// Evaluates every model on the identical test set; reports in model order,
/// fold_id = "Model1".."ModelN".
std::vector<FoldReport> evaluate_models(
    std::span<const AttentionModel> models,
    std::span<const PreparedAttentionSample> test);

}  // namespace gazeattn
