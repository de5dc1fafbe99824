#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "gazeattn/net.hpp"

namespace gazeattn {

enum class Arch { Vgg16, Tiny };

const char* to_string(Arch a);
std::optional<Arch> arch_from_string(std::string_view s);

/// Backbone selection. `vgg16` is the canonical 13-conv-layer layout; `tiny`
/// is a 3-conv-block network small enough (<= 100k parameters) to train and
/// verify on a CPU in minutes.
struct BackboneConfig {
  Arch arch = Arch::Vgg16;
  int input_side = 224;
  int fc_width = 512;  // width of the fully connected layer after the convs
  std::optional<std::string> pretrained;  // checkpoint to seed conv weights

  static BackboneConfig vgg16(int side = 224) {
    return BackboneConfig{Arch::Vgg16, side, 512, std::nullopt};
  }
  static BackboneConfig tiny(int side = 32) {
    return BackboneConfig{Arch::Tiny, side, 32, std::nullopt};
  }

  bool operator==(const BackboneConfig&) const = default;
};

inline constexpr std::int64_t kTinyParamBudget = 100000;

/// Builds the backbone + fully connected layer + prediction head.
/// head_dim is 2 for gaze regression, 3 for attention classification.
/// Deterministic for a given seed. Throws InvalidConfig for sides the
/// architecture cannot pool down, or when tiny exceeds its parameter budget.
nn::Net<float> build_net(const BackboneConfig& cfg, int head_dim,
                         std::uint64_t seed);

/// Same topology with a given scalar type and zeroed parameters; used with
/// nn::copy_params for double-precision finite-difference checks.
template <class S>
nn::Net<S> build_net_topology(const BackboneConfig& cfg, int head_dim);

}  // namespace gazeattn
