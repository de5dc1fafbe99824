#include "gazeattn/train.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "gazeattn/checkpoint.hpp"
#include "gazeattn/vision.hpp"

namespace gazeattn {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw InvalidConfig("learning rate must be > 0");
  if (batch_size < 1) throw InvalidConfig("batch size must be >= 1");
  if (plateau_patience < 1 || early_stop_patience < 1)
    throw InvalidConfig("patience values must be >= 1");
  if (!(plateau_factor > 0.0 && plateau_factor < 1.0))
    throw InvalidConfig("plateau factor must lie in (0, 1)");
  if (max_epochs < 1) throw InvalidConfig("max epochs must be >= 1");
  if (min_delta < 0.0) throw InvalidConfig("min delta must be >= 0");
  if (augmentation && !(augmentation->lo <= augmentation->hi))
    throw InvalidConfig("augmentation range is inverted");
}

TrainConfig TrainConfig::gaze_defaults() {
  TrainConfig cfg;
  cfg.learning_rate = 0.001;
  cfg.batch_size = 32;
  cfg.loss = nn::LossKind::MeanAbsoluteError;
  cfg.plateau_patience = 5;
  cfg.plateau_factor = 0.1;
  cfg.early_stop_patience = 7;
  cfg.max_epochs = 60;
  cfg.min_delta = 0.0;
  return cfg;
}

TrainConfig TrainConfig::attention_defaults() {
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.batch_size = 15;
  cfg.loss = nn::LossKind::CategoricalCrossEntropy;
  // Equal patiences: stop dominates, so the lr never actually drops during
  // the transfer stage, matching the plateau-stop-only design.
  cfg.plateau_patience = 5;
  cfg.plateau_factor = 0.1;
  cfg.early_stop_patience = 5;
  cfg.max_epochs = 50;
  cfg.min_delta = 1e-4;
  cfg.augmentation = BrightnessRange{0.75, 1.25};
  return cfg;
}

SchedulerDecision scheduler_step(std::span<const double> losses,
                                 int plateau_patience, double factor,
                                 int early_patience, double min_delta) {
  if (losses.empty())
    throw EmptyInput("scheduler_step: empty loss history");
  double best = losses[0];
  int plateau = 0;
  int early = 0;
  SchedulerDecision decision{SchedulerAction::Continue, 1.0};
  for (std::size_t i = 1; i < losses.size(); ++i) {
    if (losses[i] < best - min_delta) {
      best = losses[i];
      plateau = 0;
      early = 0;
      decision = {SchedulerAction::Continue, 1.0};
      continue;
    }
    ++plateau;
    ++early;
    if (early >= early_patience) {
      decision = {SchedulerAction::Stop, 1.0};
    } else if (plateau >= plateau_patience) {
      decision = {SchedulerAction::ReduceLr, factor};
      plateau = 0;
    } else {
      decision = {SchedulerAction::Continue, 1.0};
    }
  }
  return decision;
}

namespace {

using Snapshot = std::vector<std::pair<std::vector<float>, std::vector<float>>>;

Snapshot snapshot_params(const nn::Net<float>& net) {
  Snapshot snap;
  snap.reserve(net.layers.size());
  for (const auto& l : net.layers) snap.emplace_back(l->w, l->b);
  return snap;
}

void restore_params(nn::Net<float>& net, const Snapshot& snap) {
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    net.layers[i]->w = snap[i].first;
    net.layers[i]->b = snap[i].second;
  }
}

// Copies a (possibly augmented) raw sample into the input buffer.
void load_sample(const ImageTensor& raw, const std::optional<double> factor,
                 const nn::Shape& expect, std::vector<float>& dst) {
  const ImageTensor* src = &raw;
  ImageTensor tmp;
  if (factor) {
    tmp = vision::adjust_brightness(raw, *factor);
    src = &tmp;
  }
  const ImageTensor normalized = vision::normalize(*src);
  fill_input(normalized, expect, dst);
}

void check_finite(double loss, const char* stage) {
  if (!std::isfinite(loss))
    throw DivergenceError(std::string(stage) +
                          " loss became non-finite; training diverged");
}

}  // namespace

ModelCheckpoint train_gaze(GazeModel& model,
                           std::span<const PreparedGazeSample> train,
                           std::span<const PreparedGazeSample> val,
                           const TrainConfig& cfg) {
  cfg.validate();
  if (cfg.loss != nn::LossKind::MeanAbsoluteError)
    throw InvalidConfig("train_gaze uses the mean-absolute-error loss");
  if (train.empty()) throw EmptyDataset("gaze training set is empty");
  if (val.empty()) throw EmptyDataset("gaze validation set is empty");

  auto& net = model.net;
  auto ws = net.make_workspace(true);
  auto val_ws = net.make_workspace(false);
  Rng rng(cfg.seed);

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  double lr = cfg.learning_rate;
  double best_val = std::numeric_limits<double>::infinity();
  Snapshot best = snapshot_params(net);
  std::vector<EpochStats> history;
  std::vector<double> val_history;

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t begin = 0; begin < order.size();
         begin += cfg.batch_size) {
      const std::size_t end =
          std::min(order.size(), begin + cfg.batch_size);
      const float inv_batch = 1.0f / static_cast<float>(end - begin);
      net.zero_grad();
      for (std::size_t k = begin; k < end; ++k) {
        const auto& sample = train[order[k]];
        const std::optional<double> factor =
            cfg.augmentation
                ? std::optional<double>(rng.uniform(cfg.augmentation->lo,
                                                    cfg.augmentation->hi))
                : std::nullopt;
        load_sample(sample.image, factor, net.input_shape, ws.act[0]);
        const auto out = net.forward(ws);
        const std::array<float, 2> target{
            static_cast<float>(sample.gaze.pitch),
            static_cast<float>(sample.gaze.yaw)};
        auto& grad = ws.grad.back();
        loss_sum += nn::mae_loss<float>(out, target, grad);
        for (auto& g : grad) g *= inv_batch;
        net.backward(ws);
      }
      net.sgd_step(static_cast<float>(lr));
    }
    const double train_loss = loss_sum / static_cast<double>(train.size());
    check_finite(train_loss, "training");

    double val_sum = 0.0;
    for (const auto& sample : val) {
      load_sample(sample.image, std::nullopt, net.input_shape, val_ws.act[0]);
      const auto out = net.forward(val_ws);
      val_sum += (std::abs(out[0] - sample.gaze.pitch) +
                  std::abs(out[1] - sample.gaze.yaw)) /
                 2.0;
    }
    const double val_loss = val_sum / static_cast<double>(val.size());
    check_finite(val_loss, "validation");

    history.push_back({train_loss, val_loss, lr});
    val_history.push_back(val_loss);
    if (val_loss < best_val) {
      best_val = val_loss;
      best = snapshot_params(net);
    }

    const auto decision =
        scheduler_step(val_history, cfg.plateau_patience, cfg.plateau_factor,
                       cfg.early_stop_patience, cfg.min_delta);
    if (decision.action == SchedulerAction::Stop) break;
    if (decision.action == SchedulerAction::ReduceLr)
      lr *= decision.lr_scale;
  }

  restore_params(net, best);
  return checkpoint_from(model, cfg, std::move(history));
}

AttentionModel transfer_to_attention(const ModelCheckpoint& gaze_checkpoint,
                                     std::optional<std::uint64_t> head_seed) {
  if (gaze_checkpoint.model_kind != "gaze")
    throw IncompatibleCheckpoint(
        "transfer_to_attention needs a gaze checkpoint, got \"" +
        gaze_checkpoint.model_kind + "\"");

  const GazeModel source = gaze_model_from(gaze_checkpoint);
  AttentionModel model{
      source.config,
      build_net_topology<float>(source.config, kNumClasses)};

  const std::uint64_t seed = head_seed.value_or(
      Rng::derive(gaze_checkpoint.train_config.seed, 0x7EADu));
  Rng rng(seed);
  for (std::size_t i = 0; i < model.net.layers.size(); ++i) {
    auto& dst = *model.net.layers[i];
    if (dst.name == "head") {
      dst.init(rng);
      continue;
    }
    const auto& src = *source.net.layers[i];
    dst.w = src.w;
    dst.b = src.b;
    if (dst.kind() == nn::LayerKind::Conv) dst.frozen = true;
  }
  return model;
}

ModelCheckpoint train_attention(AttentionModel& model,
                                std::span<const PreparedAttentionSample> train,
                                const TrainConfig& cfg) {
  cfg.validate();
  if (cfg.loss != nn::LossKind::CategoricalCrossEntropy)
    throw InvalidConfig("train_attention uses the categorical cross-entropy loss");
  if (train.empty()) throw EmptyDataset("attention training set is empty");

  auto& net = model.net;
  auto ws = net.make_workspace(true);
  Rng rng(cfg.seed);

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  const double lr = cfg.learning_rate;
  double best_train = std::numeric_limits<double>::infinity();
  Snapshot best = snapshot_params(net);
  std::vector<EpochStats> history;
  std::vector<double> loss_history;

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t begin = 0; begin < order.size();
         begin += cfg.batch_size) {
      const std::size_t end =
          std::min(order.size(), begin + cfg.batch_size);
      const float inv_batch = 1.0f / static_cast<float>(end - begin);
      net.zero_grad();
      for (std::size_t k = begin; k < end; ++k) {
        const auto& sample = train[order[k]];
        const std::optional<double> factor =
            cfg.augmentation
                ? std::optional<double>(rng.uniform(cfg.augmentation->lo,
                                                    cfg.augmentation->hi))
                : std::nullopt;
        load_sample(sample.image, factor, net.input_shape, ws.act[0]);
        const auto out = net.forward(ws);
        auto& grad = ws.grad.back();
        loss_sum += nn::cross_entropy_loss<float>(
            out, static_cast<int>(sample.label), grad);
        for (auto& g : grad) g *= inv_batch;
        net.backward(ws);
      }
      net.sgd_step(static_cast<float>(lr));
    }
    const double train_loss = loss_sum / static_cast<double>(train.size());
    check_finite(train_loss, "training");

    history.push_back({train_loss, std::nullopt, lr});
    loss_history.push_back(train_loss);
    if (train_loss < best_train) {
      best_train = train_loss;
      best = snapshot_params(net);
    }

    // Plateau patience equals stop patience here, so this only ever stops.
    const auto decision =
        scheduler_step(loss_history, cfg.plateau_patience, cfg.plateau_factor,
                       cfg.early_stop_patience, cfg.min_delta);
    if (decision.action == SchedulerAction::Stop) break;
  }

  restore_params(net, best);
  return checkpoint_from(model, cfg, std::move(history));
}

}  // namespace gazeattn
