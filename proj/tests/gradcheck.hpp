#pragma once

#include <functional>
#include <vector>

#include "gazeattn/backbone.hpp"
#include "gazeattn/losses.hpp"
#include "gazeattn/rng.hpp"

namespace testutil {

/// Shared fixture for the finite-difference checks: a tiny backbone in
/// double precision with a fixed 4-sample batch.
struct GradCheck {
  gazeattn::nn::Net<double> net;
  std::vector<std::vector<double>> inputs;  // 4 samples
  std::vector<std::array<double, 2>> gaze_targets;
  std::vector<int> labels;

  static GradCheck make(bool classification, std::uint64_t seed = 99) {
    using namespace gazeattn;
    GradCheck g{nn::Net<double>(), {}, {}, {}};
    const BackboneConfig cfg = BackboneConfig::tiny(16);
    const auto float_net = build_net(cfg, classification ? 3 : 2, seed);
    g.net = build_net_topology<double>(cfg, classification ? 3 : 2);
    nn::copy_params(float_net, g.net);

    Rng rng(seed + 1);
    for (int i = 0; i < 4; ++i) {
      std::vector<double> x(g.net.input_shape.count());
      for (auto& v : x) v = rng.uniform();
      g.inputs.push_back(std::move(x));
      g.gaze_targets.push_back({rng.uniform(-0.5, 0.5),
                                rng.uniform(-0.5, 0.5)});
      g.labels.push_back(static_cast<int>(rng.uniform_int(3)));
    }
    return g;
  }

  /// Mean loss over the fixed batch at the current parameters.
  double batch_loss(bool classification) {
    auto ws = net.make_workspace(false);
    double total = 0.0;
    std::vector<double> scratch(classification ? 3 : 2);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      ws.act[0] = inputs[i];
      const auto out = net.forward(ws);
      if (classification)
        total += gazeattn::nn::cross_entropy_loss<double>(out, labels[i],
                                                          scratch);
      else
        total += gazeattn::nn::mae_loss<double>(out, gaze_targets[i],
                                                scratch);
    }
    return total / static_cast<double>(inputs.size());
  }

  /// Analytic dL/dtheta via backprop, accumulated into gw/gb.
  void analytic_gradients(bool classification) {
    net.zero_grad();
    auto ws = net.make_workspace(true);
    const double inv = 1.0 / static_cast<double>(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      ws.act[0] = inputs[i];
      const auto out = net.forward(ws);
      auto& grad = ws.grad.back();
      if (classification)
        gazeattn::nn::cross_entropy_loss<double>(out, labels[i], grad);
      else
        gazeattn::nn::mae_loss<double>(out, gaze_targets[i], grad);
      for (auto& v : grad) v *= inv;
      net.backward(ws);
    }
  }

  /// Largest relative error between analytic and central-difference
  /// gradients across every parameter of the network.
  double max_relative_error(bool classification, double h = 1e-6) {
    analytic_gradients(classification);
    double worst = 0.0;
    for (auto& layer : net.layers) {
      if (!layer->has_params()) continue;
      for (int which = 0; which < 2; ++which) {
        auto& params = which == 0 ? layer->w : layer->b;
        auto& grads = which == 0 ? layer->gw : layer->gb;
        for (std::size_t i = 0; i < params.size(); ++i) {
          const double saved = params[i];
          params[i] = saved + h;
          const double up = batch_loss(classification);
          params[i] = saved - h;
          const double down = batch_loss(classification);
          params[i] = saved;
          const double fd = (up - down) / (2.0 * h);
          const double denom =
              std::max({std::abs(fd), std::abs(grads[i]), 1e-8});
          worst = std::max(worst, std::abs(fd - grads[i]) / denom);
        }
      }
    }
    return worst;
  }
};

}  // namespace testutil
