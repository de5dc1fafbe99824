#include "gazeattn/model.hpp"

#include "doctest.h"
#include "gazeattn/checkpoint.hpp"
#include "gazeattn/json_io.hpp"
#include "gazeattn/synthetic.hpp"
#include "gazeattn/train.hpp"
#include "gazeattn/vision.hpp"
#include "gradcheck.hpp"
#include "test_helpers.hpp"

using namespace gazeattn;

namespace {

// Small raw training images whose mean brightness linearly encodes the
// target; enough signal for quick learnability checks.
std::vector<PreparedGazeSample> toy_gaze_set(int n, int side,
                                             std::uint64_t seed) {
  SyntheticConfig cfg;
  cfg.image_side = side;
  cfg.disc_radius = side / 8.0;
  std::vector<PreparedGazeSample> out;
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    GazeDirection gaze{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
    out.push_back({render_synthetic_frame(cfg, i % 3, gaze, rng.next_u64()),
                   gaze, synthetic_subject_id(i % 3)});
  }
  return out;
}

std::vector<PreparedAttentionSample> toy_attention_set(int per_class, int side,
                                                       std::uint64_t seed) {
  SyntheticConfig cfg;
  cfg.image_side = side;
  cfg.disc_radius = side / 8.0;
  const ZoneGeometry geo;
  std::vector<PreparedAttentionSample> out;
  Rng rng(seed);
  for (int i = 0; i < per_class; ++i)
    for (const auto cls : kAllClasses) {
      GazeDirection gaze;
      switch (cls) {
        case AttentionClass::Table:
          gaze = {rng.uniform(-0.55, -0.3), rng.uniform(-0.5, 0.5)};
          break;
        case AttentionClass::Cobot:
          gaze = {rng.uniform(-0.1, 0.5), rng.uniform(0.4, 0.55)};
          break;
        case AttentionClass::Distracted:
          gaze = {rng.uniform(-0.1, 0.5), rng.uniform(-0.5, 0.2)};
          break;
      }
      CHECK(geo.zone_of(gaze) == cls);
      out.push_back({render_synthetic_frame(cfg, i % 2, gaze, rng.next_u64()),
                     cls, synthetic_subject_id(i % 2)});
    }
  return out;
}

ImageTensor normalized_input(int side, std::uint64_t seed) {
  return vision::normalize(testutil::random_image(side, side, seed));
}

}  // namespace

TEST_CASE("build_gaze_model: vgg16 has the canonical conv stack and a 2-wide head") {
  const auto model = build_gaze_model(BackboneConfig::vgg16(), 0);
  int convs = 0;
  for (const auto& l : model.net.layers)
    if (l->kind() == nn::LayerKind::Conv) ++convs;
  CHECK(convs == 13);
  CHECK(model.net.output_shape().count() == 2);
  CHECK(model.net.input_shape.h == 224);
}

TEST_CASE("build_gaze_model: tiny is deterministic and under budget") {
  const auto a = build_gaze_model(BackboneConfig::tiny(), 123);
  const auto b = build_gaze_model(BackboneConfig::tiny(), 123);
  const auto c = build_gaze_model(BackboneConfig::tiny(), 124);
  CHECK(a.net.param_count() <= kTinyParamBudget);
  CHECK(a.net.output_shape().count() == 2);
  bool all_equal = true, any_diff_seed = false;
  for (std::size_t i = 0; i < a.net.layers.size(); ++i) {
    all_equal = all_equal && a.net.layers[i]->w == b.net.layers[i]->w;
    any_diff_seed = any_diff_seed || a.net.layers[i]->w != c.net.layers[i]->w;
  }
  CHECK(all_equal);
  CHECK(any_diff_seed);
}

TEST_CASE("build_gaze_model: oversized tiny trips the parameter budget") {
  CHECK_THROWS_AS(build_gaze_model(BackboneConfig::tiny(224), 0),
                  InvalidConfig);
}

TEST_CASE("unknown architecture id is rejected") {
  nlohmann::json j{{"arch", "resnet"},
                   {"input_side", 224},
                   {"fc_width", 512},
                   {"pretrained", nullptr}};
  BackboneConfig cfg;
  CHECK_THROWS_AS(from_json(j, cfg), UnknownArchitecture);
  CHECK_FALSE(arch_from_string("resnet").has_value());
}

TEST_CASE("scheduler_step: plateau fires after exactly 5 flat epochs") {
  std::vector<double> losses{1.0, 0.9};
  for (int i = 0; i < 4; ++i) {
    losses.push_back(0.9);
    CHECK(scheduler_step(losses, 5, 0.1, 7).action ==
          SchedulerAction::Continue);
  }
  losses.push_back(0.9);  // 7th entry, 5th non-improving epoch
  const auto decision = scheduler_step(losses, 5, 0.1, 7);
  CHECK(decision.action == SchedulerAction::ReduceLr);
  CHECK(decision.lr_scale == 0.1);
}

TEST_CASE("scheduler_step: stop fires after exactly 7 flat epochs") {
  std::vector<double> losses{1.0};
  for (int i = 0; i < 6; ++i) {
    losses.push_back(1.0);
    CHECK(scheduler_step(losses, 5, 0.1, 7).action !=
          SchedulerAction::Stop);
  }
  losses.push_back(1.0);  // 8th entry
  CHECK(scheduler_step(losses, 5, 0.1, 7).action == SchedulerAction::Stop);
}

TEST_CASE("scheduler_step: strictly decreasing losses always continue") {
  std::vector<double> losses;
  for (int i = 0; i < 30; ++i) {
    losses.push_back(1.0 - 0.01 * i);
    CHECK(scheduler_step(losses, 5, 0.1, 7).action ==
          SchedulerAction::Continue);
  }
}

TEST_CASE("scheduler_step: stop dominates reduce in the same epoch") {
  std::vector<double> losses{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  // With both patiences at 5, the 6th entry triggers both; stop wins.
  CHECK(scheduler_step(losses, 5, 0.1, 5).action == SchedulerAction::Stop);
}

TEST_CASE("scheduler_step: empty history is rejected") {
  CHECK_THROWS_AS(scheduler_step({}, 5, 0.1, 7), EmptyInput);
}

TEST_CASE("scheduler_step matches an independent trace oracle") {
  // Oracle with a deliberately different shape: it tracks the index of the
  // last significant improvement and the index of the last lr reduction,
  // rather than running counters.
  const auto oracle = [](const std::vector<double>& losses, int pp, int ep,
                         double min_delta) {
    int best_idx = 0;
    double best = losses[0];
    int last_reduce = 0;  // epochs before this index do not count plateau
    SchedulerAction last = SchedulerAction::Continue;
    for (int t = 1; t < static_cast<int>(losses.size()); ++t) {
      if (losses[t] < best - min_delta) {
        best = losses[t];
        best_idx = t;
        last = SchedulerAction::Continue;
        continue;
      }
      const int since_best = t - best_idx;
      const int since_reduce = t - std::max(best_idx, last_reduce);
      if (since_best >= ep) {
        last = SchedulerAction::Stop;
      } else if (since_reduce >= pp) {
        last = SchedulerAction::ReduceLr;
        last_reduce = t;
      } else {
        last = SchedulerAction::Continue;
      }
    }
    return last;
  };

  Rng rng(2024);
  for (int round = 0; round < 100; ++round) {
    const int n = 1 + static_cast<int>(rng.uniform_int(40));
    std::vector<double> losses;
    double level = 1.0;
    for (int i = 0; i < n; ++i) {
      // Mix of improvements, plateaus and regressions.
      const double r = rng.uniform();
      if (r < 0.35)
        level -= rng.uniform(0.0, 0.1);
      else if (r < 0.5)
        level += rng.uniform(0.0, 0.05);
      losses.push_back(level);
    }
    const int pp = 1 + static_cast<int>(rng.uniform_int(6));
    const int ep = pp + static_cast<int>(rng.uniform_int(5));
    const double min_delta = rng.uniform() < 0.5 ? 0.0 : 1e-3;
    for (std::size_t prefix = 1; prefix <= losses.size(); ++prefix) {
      const std::vector<double> h(losses.begin(), losses.begin() + prefix);
      CHECK(scheduler_step(h, pp, 0.1, ep, min_delta).action ==
            oracle(h, pp, ep, min_delta));
    }
  }
}

TEST_CASE("train_gaze: constant validation loss stops after the early patience") {
  auto model = build_gaze_model(BackboneConfig::tiny(16), 5);
  const auto data = toy_gaze_set(12, 16, 6);
  TrainConfig cfg = TrainConfig::gaze_defaults();
  cfg.seed = 5;
  cfg.max_epochs = 40;
  // Updates small enough to underflow float weights: the net never moves,
  // so every validation loss is bit-identical to the first.
  cfg.learning_rate = 1e-30;
  const auto ckpt = train_gaze(model, data, data, cfg);
  CHECK(ckpt.history.size() == 1 + 7);
}

TEST_CASE("train_gaze: empty datasets are rejected") {
  auto model = build_gaze_model(BackboneConfig::tiny(16), 1);
  const auto data = toy_gaze_set(4, 16, 2);
  TrainConfig cfg = TrainConfig::gaze_defaults();
  CHECK_THROWS_AS(train_gaze(model, {}, data, cfg), EmptyDataset);
  CHECK_THROWS_AS(train_gaze(model, data, {}, cfg), EmptyDataset);
}

TEST_CASE("train_gaze: exploding learning rate raises DivergenceError") {
  auto model = build_gaze_model(BackboneConfig::tiny(16), 2);
  const auto data = toy_gaze_set(8, 16, 3);
  TrainConfig cfg = TrainConfig::gaze_defaults();
  cfg.learning_rate = 1e30;
  cfg.max_epochs = 10;
  CHECK_THROWS_AS(train_gaze(model, data, data, cfg), DivergenceError);
}

TEST_CASE("training is deterministic given seed, config and data") {
  const auto data = toy_gaze_set(16, 16, 10);
  TrainConfig cfg = TrainConfig::gaze_defaults();
  cfg.max_epochs = 3;
  cfg.seed = 77;

  auto run = [&] {
    auto model = build_gaze_model(BackboneConfig::tiny(16), 42);
    return train_gaze(model, data, data, cfg);
  };
  const auto a = run();
  const auto b = run();
  REQUIRE(a.tensors.size() == b.tensors.size());
  for (std::size_t i = 0; i < a.tensors.size(); ++i)
    CHECK(a.tensors[i].data == b.tensors[i].data);
  CHECK(a.history.size() == b.history.size());
}

TEST_CASE("transfer_to_attention copies convs bit-exactly and freezes them") {
  auto gaze = build_gaze_model(BackboneConfig::tiny(16), 3);
  const auto data = toy_gaze_set(8, 16, 4);
  TrainConfig cfg = TrainConfig::gaze_defaults();
  cfg.max_epochs = 2;
  const auto ckpt = train_gaze(gaze, data, data, cfg);

  const auto attention = transfer_to_attention(ckpt);
  CHECK(attention.net.output_shape().count() == 3);
  for (std::size_t i = 0; i < attention.net.layers.size(); ++i) {
    const auto& dst = *attention.net.layers[i];
    const auto& src = *gaze.net.layers[i];
    if (dst.kind() == nn::LayerKind::Conv) {
      CHECK(dst.frozen);
      CHECK(dst.w == src.w);
      CHECK(dst.b == src.b);
    } else if (dst.name == "fc1") {
      CHECK_FALSE(dst.frozen);
      CHECK(dst.w == src.w);
    } else if (dst.name == "head") {
      CHECK_FALSE(dst.frozen);
      CHECK(dst.w.size() != src.w.size());  // replaced, 3 outputs
    }
  }

  // An attention checkpoint is not a valid transfer source.
  auto attn_copy = attention.clone();
  const auto attn_ckpt =
      checkpoint_from(attn_copy, TrainConfig::attention_defaults(), {});
  CHECK_THROWS_AS(transfer_to_attention(attn_ckpt), IncompatibleCheckpoint);
}

TEST_CASE("train_attention: frozen weights are bit-identical afterwards") {
  auto gaze = build_gaze_model(BackboneConfig::tiny(16), 8);
  const auto gdata = toy_gaze_set(8, 16, 9);
  TrainConfig gcfg = TrainConfig::gaze_defaults();
  gcfg.max_epochs = 2;
  const auto gckpt = train_gaze(gaze, gdata, gdata, gcfg);

  for (const std::uint64_t seed : {0ull, 1ull, 99ull}) {
    auto model = transfer_to_attention(gckpt, seed);
    std::vector<std::vector<float>> frozen_before;
    for (const auto& l : model.net.layers)
      if (l->frozen) frozen_before.push_back(l->w);

    const auto data = toy_attention_set(6, 16, seed + 1);
    TrainConfig cfg = TrainConfig::attention_defaults();
    cfg.seed = seed;
    cfg.max_epochs = 4;
    train_attention(model, data, cfg);

    std::size_t idx = 0;
    for (const auto& l : model.net.layers)
      if (l->frozen) CHECK(l->w == frozen_before[idx++]);
    CHECK(idx == frozen_before.size());
  }
}

TEST_CASE("train_attention learns a separable toy set") {
  auto gaze = build_gaze_model(BackboneConfig::tiny(16), 21);
  const auto gdata = toy_gaze_set(60, 16, 22);
  TrainConfig gcfg = TrainConfig::gaze_defaults();
  gcfg.max_epochs = 12;
  const auto gckpt = train_gaze(gaze, gdata, gdata, gcfg);

  auto model = transfer_to_attention(gckpt);
  const auto data = toy_attention_set(10, 16, 23);
  TrainConfig cfg = TrainConfig::attention_defaults();
  cfg.max_epochs = 25;
  train_attention(model, data, cfg);

  std::vector<ImageTensor> inputs;
  for (const auto& s : data) inputs.push_back(vision::normalize(s.image));
  const auto probs = predict_attention(model, inputs);
  int correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i)
    correct += probs[i].argmax() == data[i].label;
  CHECK(static_cast<double>(correct) / data.size() > 0.8);
}

TEST_CASE("predict_gaze: deterministic, shape-checked") {
  const auto model = build_gaze_model(BackboneConfig::tiny(16), 31);
  const auto input = normalized_input(16, 32);
  const auto a = predict_gaze(model, input);
  const auto b = predict_gaze(model, input);
  CHECK(a.pitch == b.pitch);
  CHECK(a.yaw == b.yaw);
  CHECK(std::isfinite(a.pitch));

  CHECK_THROWS_AS(predict_gaze(model, normalized_input(24, 33)), ShapeError);
  CHECK_THROWS_AS(predict_gaze(model, testutil::random_image(16, 16, 34)),
                  ShapeError);  // raw stage not accepted
}

TEST_CASE("predict_attention: batch contract") {
  auto gaze = build_gaze_model(BackboneConfig::tiny(16), 41);
  const auto ckpt =
      checkpoint_from(gaze, TrainConfig::gaze_defaults(), {});
  const auto model = transfer_to_attention(ckpt);

  std::vector<ImageTensor> batch;
  for (int i = 0; i < 5; ++i) batch.push_back(normalized_input(16, 50 + i));
  const auto probs = predict_attention(model, batch);
  REQUIRE(probs.size() == 5);
  for (const auto& p : probs) {
    CHECK(std::abs(p.sum() - 1.0) < 1e-6);
    for (const double v : p.p) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  // Same image at different batch positions gives identical probabilities.
  const auto again = predict_attention(model, {&batch[2], 1});
  CHECK(again[0].p == probs[2].p);
}

TEST_CASE("argmax ties break toward the lowest class index") {
  ClassProbabilities p;
  p.p = {0.4, 0.4, 0.2};
  CHECK(p.argmax() == AttentionClass::Cobot);
  p.p = {0.2, 0.4, 0.4};
  CHECK(p.argmax() == AttentionClass::Table);
}

TEST_CASE("analytic gradients match central finite differences (both losses)") {
  auto mae = testutil::GradCheck::make(false);
  CHECK(mae.max_relative_error(false) < 1e-3);
  auto ce = testutil::GradCheck::make(true);
  CHECK(ce.max_relative_error(true) < 1e-3);
}
