#include "gazeattn/json_io.hpp"

#include "gazeattn/errors.hpp"

namespace gazeattn {

using nlohmann::json;

void to_json(json& j, const BackboneConfig& c) {
  j = json{{"arch", to_string(c.arch)},
           {"input_side", c.input_side},
           {"fc_width", c.fc_width},
           {"pretrained", c.pretrained ? json(*c.pretrained) : json(nullptr)}};
}

void from_json(const json& j, BackboneConfig& c) {
  const auto arch = arch_from_string(j.at("arch").get<std::string>());
  if (!arch)
    throw UnknownArchitecture("unknown architecture id \"" +
                              j.at("arch").get<std::string>() + "\"");
  c.arch = *arch;
  c.input_side = j.at("input_side").get<int>();
  c.fc_width = j.at("fc_width").get<int>();
  c.pretrained = std::nullopt;
  if (j.contains("pretrained") && !j.at("pretrained").is_null())
    c.pretrained = j.at("pretrained").get<std::string>();
}

namespace {

const char* loss_name(nn::LossKind k) {
  return k == nn::LossKind::MeanAbsoluteError ? "mean_absolute_error"
                                              : "categorical_cross_entropy";
}

nn::LossKind loss_from_name(const std::string& s) {
  if (s == "mean_absolute_error") return nn::LossKind::MeanAbsoluteError;
  if (s == "categorical_cross_entropy")
    return nn::LossKind::CategoricalCrossEntropy;
  throw InvalidConfig("unknown loss id \"" + s + "\"");
}

}  // namespace

void to_json(json& j, const TrainConfig& c) {
  j = json{{"learning_rate", c.learning_rate},
           {"batch_size", c.batch_size},
           {"loss", loss_name(c.loss)},
           {"plateau_patience", c.plateau_patience},
           {"plateau_factor", c.plateau_factor},
           {"early_stop_patience", c.early_stop_patience},
           {"max_epochs", c.max_epochs},
           {"min_delta", c.min_delta},
           {"seed", c.seed}};
  if (c.augmentation)
    j["augmentation"] =
        json{{"lo", c.augmentation->lo}, {"hi", c.augmentation->hi}};
  else
    j["augmentation"] = nullptr;
}

void from_json(const json& j, TrainConfig& c) {
  c.learning_rate = j.at("learning_rate").get<double>();
  c.batch_size = j.at("batch_size").get<int>();
  c.loss = loss_from_name(j.at("loss").get<std::string>());
  c.plateau_patience = j.at("plateau_patience").get<int>();
  c.plateau_factor = j.at("plateau_factor").get<double>();
  c.early_stop_patience = j.at("early_stop_patience").get<int>();
  c.max_epochs = j.at("max_epochs").get<int>();
  c.min_delta = j.at("min_delta").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.augmentation = std::nullopt;
  if (j.contains("augmentation") && !j.at("augmentation").is_null())
    c.augmentation = BrightnessRange{j.at("augmentation").at("lo").get<double>(),
                                     j.at("augmentation").at("hi").get<double>()};
}

void to_json(json& j, const EpochStats& s) {
  j = json{{"train_loss", s.train_loss},
           {"val_loss", s.val_loss ? json(*s.val_loss) : json(nullptr)},
           {"learning_rate", s.learning_rate}};
}

void from_json(const json& j, EpochStats& s) {
  s.train_loss = j.at("train_loss").get<double>();
  s.val_loss = std::nullopt;
  if (!j.at("val_loss").is_null())
    s.val_loss = j.at("val_loss").get<double>();
  s.learning_rate = j.at("learning_rate").get<double>();
}

}  // namespace gazeattn
