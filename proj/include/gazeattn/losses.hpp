#pragma once

#include <cmath>
#include <span>

#include "gazeattn/errors.hpp"

namespace gazeattn::nn {

enum class LossKind { MeanAbsoluteError, CategoricalCrossEntropy };

/// Mean absolute error over all output components. Writes dL/dpred.
template <class S>
S mae_loss(std::span<const S> pred, std::span<const S> target,
           std::span<S> grad) {
  if (pred.size() != target.size() || pred.size() != grad.size())
    throw ShapeError("mae_loss: size mismatch");
  const S inv_n = S(1) / static_cast<S>(pred.size());
  S loss = S(0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const S d = pred[i] - target[i];
    loss += d < S(0) ? -d : d;
    grad[i] = (d < S(0) ? S(-1) : S(1)) * inv_n;
  }
  return loss * inv_n;
}

/// Softmax + categorical cross-entropy against a class index.
/// Writes dL/dlogits = softmax - onehot.
template <class S>
S cross_entropy_loss(std::span<const S> logits, int label,
                     std::span<S> grad) {
  if (logits.size() != grad.size())
    throw ShapeError("cross_entropy_loss: size mismatch");
  if (label < 0 || label >= static_cast<int>(logits.size()))
    throw ShapeError("cross_entropy_loss: label out of range");
  S max_logit = logits[0];
  for (const S v : logits) max_logit = v > max_logit ? v : max_logit;
  S sum = S(0);
  for (std::size_t i = 0; i < logits.size(); ++i) {
    grad[i] = std::exp(logits[i] - max_logit);
    sum += grad[i];
  }
  const S loss = -(logits[label] - max_logit - std::log(sum));
  const S inv = S(1) / sum;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    grad[i] *= inv;
    if (static_cast<int>(i) == label) grad[i] -= S(1);
  }
  return loss;
}

/// Softmax only (for prediction).
template <class S>
void softmax(std::span<const S> logits, std::span<S> out) {
  S max_logit = logits[0];
  for (const S v : logits) max_logit = v > max_logit ? v : max_logit;
  S sum = S(0);
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - max_logit);
    sum += out[i];
  }
  for (auto& v : out) v /= sum;
}

}  // namespace gazeattn::nn
