#include "gazeattn/metrics.hpp"

#include <charconv>
#include <cmath>

#include "gazeattn/errors.hpp"

namespace gazeattn {

ConfusionMatrix confusion_matrix(std::span<const AttentionClass> predictions,
                                 std::span<const AttentionClass> labels) {
  if (predictions.size() != labels.size())
    throw LengthMismatch("confusion_matrix: " +
                         std::to_string(predictions.size()) +
                         " predictions vs " + std::to_string(labels.size()) +
                         " labels");
  if (predictions.empty())
    throw EmptyInput("confusion_matrix: no samples");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i)
    ++cm.cell(static_cast<int>(labels[i]), static_cast<int>(predictions[i]));
  return cm;
}

FoldMetrics fold_metrics(const ConfusionMatrix& cm) {
  const std::int64_t total = cm.total();
  if (total == 0) throw EmptyMatrix("fold_metrics: empty confusion matrix");

  FoldMetrics out;
  out.accuracy =
      static_cast<double>(cm.trace()) / static_cast<double>(total);

  double f1_sum = 0.0;
  for (int c = 0; c < 3; ++c) {
    const std::int64_t row = cm.row_sum(c);
    const std::int64_t col = cm.col_sum(c);
    const std::int64_t diag = cm.cell(c, c);
    out.recall_defined[c] = row > 0;
    out.recall[c] =
        row > 0 ? static_cast<double>(diag) / static_cast<double>(row) : 0.0;
    const double precision =
        col > 0 ? static_cast<double>(diag) / static_cast<double>(col) : 0.0;
    const double pr = precision + out.recall[c];
    f1_sum += pr > 0.0 ? 2.0 * precision * out.recall[c] / pr : 0.0;
  }
  out.macro_f1 = f1_sum / 3.0;
  return out;
}

std::string format_decimal(double value, int places) {
  // Render with guard digits first, then round the decimal string by hand;
  // this keeps ties like 0.9425 -> 0.943 independent of the binary
  // representation sitting a hair above or below the decimal value.
  const bool negative = std::signbit(value) && value != 0.0;
  const double magnitude = std::abs(value);
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), magnitude,
                                 std::chars_format::fixed, places + 6);
  std::string s(buf, res.ptr);

  const auto dot = s.find('.');
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  const std::size_t int_len = dot;
  const std::size_t keep = int_len + static_cast<std::size_t>(places);

  bool round_up = digits[keep] >= '5';
  digits.resize(keep);
  if (round_up) {
    int i = static_cast<int>(digits.size()) - 1;
    for (; i >= 0; --i) {
      if (digits[i] != '9') {
        ++digits[i];
        break;
      }
      digits[i] = '0';
    }
    if (i < 0) digits.insert(digits.begin(), '1');
  }
  const std::size_t new_int_len = digits.size() - places;
  std::string result = digits.substr(0, new_int_len);
  if (places > 0) result += "." + digits.substr(new_int_len);
  if (negative && result.find_first_of("123456789") != std::string::npos)
    result.insert(result.begin(), '-');
  return result;
}

double round_decimal(double value, int places) {
  const std::string s = format_decimal(value, places);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

std::string format_full(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace gazeattn
