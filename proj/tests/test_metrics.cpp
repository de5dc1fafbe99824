#include "gazeattn/metrics.hpp"

#include "doctest.h"
#include "gazeattn/errors.hpp"
#include "gazeattn/evaluate.hpp"
#include "gazeattn/rng.hpp"

using namespace gazeattn;

namespace {

// Independent brute-force metrics: counts tp/fp/fn by scanning the pairs
// directly, never touching the ConfusionMatrix path.
struct BruteMetrics {
  std::array<double, 3> recall{};
  double accuracy = 0.0;
  double macro_f1 = 0.0;
};

BruteMetrics brute_force(const std::vector<AttentionClass>& preds,
                         const std::vector<AttentionClass>& labels) {
  std::int64_t tp[3] = {0, 0, 0}, fp[3] = {0, 0, 0}, fn[3] = {0, 0, 0};
  std::int64_t correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const int p = static_cast<int>(preds[i]);
    const int l = static_cast<int>(labels[i]);
    if (p == l) {
      ++correct;
      ++tp[l];
    } else {
      ++fn[l];
      ++fp[p];
    }
  }
  BruteMetrics out;
  out.accuracy =
      static_cast<double>(correct) / static_cast<double>(preds.size());
  double f1_sum = 0.0;
  for (int c = 0; c < 3; ++c) {
    out.recall[c] = tp[c] + fn[c] > 0 ? static_cast<double>(tp[c]) /
                                            static_cast<double>(tp[c] + fn[c])
                                      : 0.0;
    const double precision =
        tp[c] + fp[c] > 0 ? static_cast<double>(tp[c]) /
                                static_cast<double>(tp[c] + fp[c])
                          : 0.0;
    const double pr = precision + out.recall[c];
    f1_sum += pr > 0.0 ? 2.0 * precision * out.recall[c] / pr : 0.0;
  }
  out.macro_f1 = f1_sum / 3.0;
  return out;
}

}  // namespace

TEST_CASE("confusion_matrix: perfect predictions sit on the diagonal") {
  std::vector<AttentionClass> labels{
      AttentionClass::Cobot, AttentionClass::Table, AttentionClass::Distracted,
      AttentionClass::Table};
  const auto cm = confusion_matrix(labels, labels);
  CHECK(cm.trace() == 4);
  CHECK(cm.total() == 4);
  CHECK(cm.cell(1, 1) == 2);
  CHECK(cm.cell(0, 1) == 0);
}

TEST_CASE("confusion_matrix: one mistake lands at (true, predicted)") {
  std::vector<AttentionClass> labels{AttentionClass::Cobot};
  std::vector<AttentionClass> preds{AttentionClass::Table};
  const auto cm = confusion_matrix(preds, labels);
  CHECK(cm.cell(0, 1) == 1);
  CHECK(cm.total() == 1);
}

TEST_CASE("confusion_matrix: errors") {
  std::vector<AttentionClass> one{AttentionClass::Cobot};
  std::vector<AttentionClass> two{AttentionClass::Cobot,
                                  AttentionClass::Table};
  CHECK_THROWS_AS(confusion_matrix(one, two), LengthMismatch);
  CHECK_THROWS_AS(confusion_matrix({}, {}), EmptyInput);
}

TEST_CASE("confusion_matrix: row sums match label counts on random data") {
  Rng rng(42);
  for (int round = 0; round < 50; ++round) {
    const int n = 1 + static_cast<int>(rng.uniform_int(200));
    std::vector<AttentionClass> labels, preds;
    std::array<std::int64_t, 3> label_counts{};
    for (int i = 0; i < n; ++i) {
      labels.push_back(static_cast<AttentionClass>(rng.uniform_int(3)));
      preds.push_back(static_cast<AttentionClass>(rng.uniform_int(3)));
      ++label_counts[static_cast<int>(labels.back())];
    }
    const auto cm = confusion_matrix(preds, labels);
    for (int c = 0; c < 3; ++c) CHECK(cm.row_sum(c) == label_counts[c]);
    std::int64_t off_diag = cm.total() - cm.trace();
    CHECK(cm.trace() + off_diag == n);
  }
}

TEST_CASE("fold_metrics: all-correct matrix scores 1.0 everywhere") {
  ConfusionMatrix cm;
  cm.cell(0, 0) = 10;
  cm.cell(1, 1) = 20;
  cm.cell(2, 2) = 30;
  const auto m = fold_metrics(cm);
  CHECK(m.recall == std::array<double, 3>{1.0, 1.0, 1.0});
  CHECK(m.accuracy == 1.0);
  CHECK(m.macro_f1 == 1.0);
}

TEST_CASE("fold_metrics: hand-computed small matrix") {
  ConfusionMatrix cm;
  cm.cell(0, 0) = 1;
  cm.cell(0, 1) = 1;
  cm.cell(1, 1) = 2;
  cm.cell(2, 2) = 2;
  const auto m = fold_metrics(cm);
  CHECK(m.recall[0] == doctest::Approx(0.5));
  CHECK(m.recall[1] == doctest::Approx(1.0));
  CHECK(m.recall[2] == doctest::Approx(1.0));
  CHECK(m.accuracy == doctest::Approx(5.0 / 6.0));
}

TEST_CASE("fold_metrics: empty class row yields zero recall, flagged") {
  ConfusionMatrix cm;
  cm.cell(1, 1) = 5;
  cm.cell(2, 1) = 5;
  const auto m = fold_metrics(cm);
  CHECK_FALSE(m.recall_defined[0]);
  CHECK(m.recall[0] == 0.0);
  CHECK(m.recall_defined[1]);
}

TEST_CASE("fold_metrics: empty matrix is an error") {
  CHECK_THROWS_AS(fold_metrics(ConfusionMatrix{}), EmptyMatrix);
}

TEST_CASE("fold_metrics: published per-class recalls reproduce the row accuracy") {
  // Model7 external-evaluation row: recalls (0.87, 0.96, 0.63) over class
  // sizes (833, 940, 962) must land within a hundredth of the reported 0.82.
  ConfusionMatrix cm;
  const std::int64_t counts[3] = {833, 940, 962};
  const double recalls[3] = {0.87, 0.96, 0.63};
  for (int c = 0; c < 3; ++c) {
    const auto correct =
        static_cast<std::int64_t>(std::lround(recalls[c] * counts[c]));
    cm.cell(c, c) = correct;
    cm.cell(c, (c + 1) % 3) = counts[c] - correct;
  }
  const auto m = fold_metrics(cm);
  CHECK(m.accuracy == doctest::Approx(0.816).epsilon(0.002));
  CHECK(std::abs(m.accuracy - 0.82) <= 0.01);
}

TEST_CASE("metrics equal an independent brute-force counter exactly") {
  Rng rng(7);
  for (int round = 0; round < 1000; ++round) {
    const int n = 1 + static_cast<int>(rng.uniform_int(120));
    std::vector<AttentionClass> labels, preds;
    for (int i = 0; i < n; ++i) {
      labels.push_back(static_cast<AttentionClass>(rng.uniform_int(3)));
      preds.push_back(static_cast<AttentionClass>(rng.uniform_int(3)));
    }
    const auto m = fold_metrics(confusion_matrix(preds, labels));
    const auto b = brute_force(preds, labels);
    CHECK(m.accuracy == b.accuracy);
    CHECK(m.macro_f1 == b.macro_f1);
    for (int c = 0; c < 3; ++c) CHECK(m.recall[c] == b.recall[c]);
    CHECK(m.macro_f1 >= 0.0);
    CHECK(m.macro_f1 <= 1.0);
    CHECK(m.accuracy >= 0.0);
    CHECK(m.accuracy <= 1.0);
  }
}

TEST_CASE("round_decimal: decimal half-up, including the x.xxx5 tie") {
  CHECK(format_decimal(0.9425, 3) == "0.943");
  CHECK(format_decimal(0.8175, 3) == "0.818");
  CHECK(format_decimal(0.81625, 3) == "0.816");
  CHECK(format_decimal(0.94, 3) == "0.940");
  CHECK(format_decimal(0.999999, 2) == "1.00");
  CHECK(format_decimal(-0.0005, 3) == "-0.001");
  CHECK(round_decimal(0.9425, 3) == doctest::Approx(0.943));
}

TEST_CASE("aggregation reproduces the published LOSO averages") {
  const double accuracy[8] = {0.97, 0.91, 0.99, 0.98, 0.96, 0.93, 0.83, 0.97};
  const double f1[8] = {0.97, 0.91, 0.99, 0.98, 0.95, 0.93, 0.82, 0.97};
  std::vector<FoldReport> folds(8);
  for (int i = 0; i < 8; ++i) {
    folds[i].fold_id = "Model" + std::to_string(i + 1);
    folds[i].metrics.accuracy = accuracy[i];
    folds[i].metrics.macro_f1 = f1[i];
  }
  const auto report = aggregate_folds(std::move(folds));
  CHECK(format_decimal(report.average_accuracy, 3) == "0.943");
  CHECK(format_decimal(report.average_macro_f1, 3) == "0.940");
}

TEST_CASE("aggregation reproduces the published external-evaluation averages") {
  const double accuracy[8] = {0.81, 0.82, 0.82, 0.81, 0.82, 0.81, 0.82, 0.82};
  const double f1[8] = {0.81, 0.82, 0.82, 0.82, 0.82, 0.81, 0.82, 0.82};
  std::vector<FoldReport> folds(8);
  for (int i = 0; i < 8; ++i) {
    folds[i].metrics.accuracy = accuracy[i];
    folds[i].metrics.macro_f1 = f1[i];
  }
  const auto report = aggregate_folds(std::move(folds));
  CHECK(format_decimal(report.average_accuracy, 3) == "0.816");
  CHECK(format_decimal(report.average_macro_f1, 3) == "0.818");
}

TEST_CASE("aggregate averages are the arithmetic fold means") {
  Rng rng(11);
  std::vector<FoldReport> folds(5);
  double acc = 0.0, f1 = 0.0;
  for (auto& f : folds) {
    f.metrics.accuracy = rng.uniform();
    f.metrics.macro_f1 = rng.uniform();
    acc += f.metrics.accuracy;
    f1 += f.metrics.macro_f1;
  }
  const auto report = aggregate_folds(std::move(folds));
  CHECK(report.average_accuracy == doctest::Approx(acc / 5).epsilon(1e-12));
  CHECK(report.average_macro_f1 == doctest::Approx(f1 / 5).epsilon(1e-12));
}
