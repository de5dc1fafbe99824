#include "gazeattn/backbone.hpp"

namespace gazeattn {

const char* to_string(Arch a) {
  switch (a) {
    case Arch::Vgg16: return "vgg16";
    case Arch::Tiny: return "tiny";
  }
  return "?";
}

std::optional<Arch> arch_from_string(std::string_view s) {
  if (s == "vgg16") return Arch::Vgg16;
  if (s == "tiny") return Arch::Tiny;
  return std::nullopt;
}

namespace {

template <class S>
void add_block(nn::Net<S>& net, int out_channels, const std::string& name) {
  const nn::Shape in = net.tail_shape();
  net.add(std::make_unique<nn::Conv2d<S>>(in, out_channels, 3, 1, 1, name));
  net.add(std::make_unique<nn::ReLU<S>>(net.tail_shape(), name + "_relu"));
}

template <class S>
void add_pool(nn::Net<S>& net, const std::string& name) {
  net.add(std::make_unique<nn::MaxPool2<S>>(net.tail_shape(), name));
}

template <class S>
nn::Net<S> build_tiny(const BackboneConfig& cfg, int head_dim) {
  if (cfg.input_side <= 0 || cfg.input_side % 8 != 0)
    throw InvalidConfig("tiny backbone needs an input side divisible by 8");
  nn::Net<S> net;
  net.input_shape = {cfg.input_side, cfg.input_side, 3};
  add_block(net, 8, "conv1");
  add_pool(net, "pool1");
  add_block(net, 16, "conv2");
  add_pool(net, "pool2");
  add_block(net, 16, "conv3");
  add_pool(net, "pool3");
  net.add(std::make_unique<nn::Dense<S>>(net.tail_shape(), cfg.fc_width,
                                         "fc1"));
  net.add(std::make_unique<nn::ReLU<S>>(net.tail_shape(), "fc1_relu"));
  net.add(std::make_unique<nn::Dense<S>>(net.tail_shape(), head_dim, "head",
                                         nn::InitKind::XavierNormal));
  if (net.param_count() > kTinyParamBudget)
    throw InvalidConfig(
        "tiny backbone exceeds its parameter budget at side " +
        std::to_string(cfg.input_side) + " (" +
        std::to_string(net.param_count()) + " > " +
        std::to_string(kTinyParamBudget) + ")");
  return net;
}

template <class S>
nn::Net<S> build_vgg16(const BackboneConfig& cfg, int head_dim) {
  if (cfg.input_side <= 0 || cfg.input_side % 32 != 0)
    throw InvalidConfig("vgg16 needs an input side divisible by 32");
  nn::Net<S> net;
  net.input_shape = {cfg.input_side, cfg.input_side, 3};
  // Canonical 13-conv layout: 2-2-3-3-3 with pooling between the blocks.
  add_block(net, 64, "conv1_1");
  add_block(net, 64, "conv1_2");
  add_pool(net, "pool1");
  add_block(net, 128, "conv2_1");
  add_block(net, 128, "conv2_2");
  add_pool(net, "pool2");
  add_block(net, 256, "conv3_1");
  add_block(net, 256, "conv3_2");
  add_block(net, 256, "conv3_3");
  add_pool(net, "pool3");
  add_block(net, 512, "conv4_1");
  add_block(net, 512, "conv4_2");
  add_block(net, 512, "conv4_3");
  add_pool(net, "pool4");
  add_block(net, 512, "conv5_1");
  add_block(net, 512, "conv5_2");
  add_block(net, 512, "conv5_3");
  add_pool(net, "pool5");
  net.add(std::make_unique<nn::Dense<S>>(net.tail_shape(), cfg.fc_width,
                                         "fc1"));
  net.add(std::make_unique<nn::ReLU<S>>(net.tail_shape(), "fc1_relu"));
  net.add(std::make_unique<nn::Dense<S>>(net.tail_shape(), head_dim, "head",
                                         nn::InitKind::XavierNormal));
  return net;
}

}  // namespace

template <class S>
nn::Net<S> build_net_topology(const BackboneConfig& cfg, int head_dim) {
  if (head_dim <= 0) throw InvalidConfig("head dimension must be positive");
  if (cfg.fc_width <= 0)
    throw InvalidConfig("fully connected width must be positive");
  switch (cfg.arch) {
    case Arch::Tiny: return build_tiny<S>(cfg, head_dim);
    case Arch::Vgg16: return build_vgg16<S>(cfg, head_dim);
  }
  throw UnknownArchitecture("unknown architecture id");
}

template nn::Net<float> build_net_topology<float>(const BackboneConfig&, int);
template nn::Net<double> build_net_topology<double>(const BackboneConfig&,
                                                    int);

nn::Net<float> build_net(const BackboneConfig& cfg, int head_dim,
                         std::uint64_t seed) {
  auto net = build_net_topology<float>(cfg, head_dim);
  net.init_params(seed);
  return net;
}

}  // namespace gazeattn
