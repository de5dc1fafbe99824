#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "gazeattn/types.hpp"

namespace gazeattn {

/// 3x3 integer confusion matrix; rows are true classes, columns predicted,
/// both in canonical order (Cobot, Table, Distracted).
class ConfusionMatrix {
 public:
  std::int64_t& cell(int true_class, int predicted) {
    return m_[true_class][predicted];
  }
  std::int64_t cell(int true_class, int predicted) const {
    return m_[true_class][predicted];
  }

  std::int64_t row_sum(int i) const { return m_[i][0] + m_[i][1] + m_[i][2]; }
  std::int64_t col_sum(int j) const { return m_[0][j] + m_[1][j] + m_[2][j]; }
  std::int64_t trace() const { return m_[0][0] + m_[1][1] + m_[2][2]; }
  std::int64_t total() const {
    return row_sum(0) + row_sum(1) + row_sum(2);
  }

  ConfusionMatrix& operator+=(const ConfusionMatrix& other) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m_[i][j] += other.m_[i][j];
    return *this;
  }

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::array<std::array<std::int64_t, 3>, 3> m_{};
};

/// Counts (true, predicted) pairs. Throws LengthMismatch / EmptyInput.
ConfusionMatrix confusion_matrix(std::span<const AttentionClass> predictions,
                                 std::span<const AttentionClass> labels);

struct FoldMetrics {
  std::array<double, 3> recall{};       // 0 when the class row is empty
  std::array<bool, 3> recall_defined{};  // false flags an empty row
  double accuracy = 0.0;
  double macro_f1 = 0.0;
};

/// recall_c = diag/row (0 and flagged when the row is empty);
/// accuracy = trace/total; macro F1 averages per-class 2pr/(p+r) with the
/// 0/0 convention mapping to 0. All values are plain ratios of the integer
/// counts, so they match any independent counter bit for bit.
FoldMetrics fold_metrics(const ConfusionMatrix& cm);

/// Decimal half-away-from-zero rounding (so e.g. a mean that is exactly
/// x.xxx5 in decimal rounds up, matching hand-rounded published tables).
double round_decimal(double value, int places);
std::string format_decimal(double value, int places);

/// Shortest round-trip representation, for full-precision CSV columns.
std::string format_full(double value);

}  // namespace gazeattn
