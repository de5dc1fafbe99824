#pragma once

#include "gazeattn/backbone.hpp"
#include "gazeattn/train.hpp"
#include "json.hpp"

namespace gazeattn {

void to_json(nlohmann::json& j, const BackboneConfig& c);
void from_json(const nlohmann::json& j, BackboneConfig& c);

void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);

void to_json(nlohmann::json& j, const EpochStats& s);
void from_json(const nlohmann::json& j, EpochStats& s);

}  // namespace gazeattn
