#include "gazeattn/evaluate.hpp"

#include <future>

#include "gazeattn/splits.hpp"

namespace gazeattn {

LosoReport aggregate_folds(std::vector<FoldReport> folds) {
  LosoReport report;
  report.folds = std::move(folds);
  if (report.folds.empty()) return report;
  double acc = 0.0, f1 = 0.0;
  for (const auto& f : report.folds) {
    acc += f.metrics.accuracy;
    f1 += f.metrics.macro_f1;
  }
  report.average_accuracy = acc / static_cast<double>(report.folds.size());
  report.average_macro_f1 = f1 / static_cast<double>(report.folds.size());
  return report;
}

ConfusionMatrix evaluate_on(const AttentionModel& model,
                            std::span<const PreparedAttentionSample> samples) {
  if (samples.empty()) throw EmptyDataset("evaluate_on: empty test set");
  std::vector<ImageTensor> inputs;
  inputs.reserve(samples.size());
  for (const auto& s : samples)
    inputs.push_back(vision::normalize(s.image));
  const auto probs = predict_attention(model, inputs);
  std::vector<AttentionClass> preds, labels;
  preds.reserve(samples.size());
  labels.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    preds.push_back(probs[i].argmax());
    labels.push_back(samples[i].label);
  }
  return confusion_matrix(preds, labels);
}

LosoReport run_loso(const AttentionManifest& manifest,
                    const AttentionTrainer& trainer,
                    const LosoRunOptions& opts) {
  const auto folds = loso_folds(manifest);

  auto run_fold = [&](std::size_t rank) -> FoldReport {
    const auto& fold = folds[rank];
    const std::uint64_t fold_seed = Rng::derive(opts.seed, rank);
    const AttentionModel model = trainer(fold.train, fold_seed);
    const auto prepared = prepare_attention_samples(fold.test, opts.prepare);
    if (prepared.samples.empty())
      throw EmptyDataset("fold " + fold.held_out_subject +
                         ": no evaluable test samples");
    FoldReport report;
    report.fold_id = fold.held_out_subject;
    report.cm = evaluate_on(model, prepared.samples);
    report.metrics = fold_metrics(report.cm);
    return report;
  };

  std::vector<FoldReport> reports(folds.size());
  if (opts.jobs <= 1) {
    for (std::size_t i = 0; i < folds.size(); ++i) reports[i] = run_fold(i);
  } else {
    std::vector<std::future<FoldReport>> futures;
    futures.reserve(folds.size());
    std::size_t next = 0;
    while (next < folds.size() || !futures.empty()) {
      while (next < folds.size() &&
             futures.size() < static_cast<std::size_t>(opts.jobs))
        futures.push_back(std::async(std::launch::async, run_fold, next++));
      const std::size_t rank = next - futures.size();
      reports[rank] = futures.front().get();
      futures.erase(futures.begin());
    }
  }
  if (opts.on_fold)
    for (const auto& r : reports) opts.on_fold(r);
  return aggregate_folds(std::move(reports));
}

std::vector<FoldReport> evaluate_models(
    std::span<const AttentionModel> models,
    std::span<const PreparedAttentionSample> test) {
  if (test.empty()) throw EmptyDataset("evaluate_models: empty test set");
  std::vector<FoldReport> reports;
  reports.reserve(models.size());
  for (std::size_t i = 0; i < models.size(); ++i) {
    FoldReport r;
    r.fold_id = "Model" + std::to_string(i + 1);
    r.cm = evaluate_on(models[i], test);
    r.metrics = fold_metrics(r.cm);
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace gazeattn
