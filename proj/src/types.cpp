#include "gazeattn/types.hpp"

namespace gazeattn {

std::optional<AttentionClass> attention_class_from_string(std::string_view s) {
  if (s == "cobot") return AttentionClass::Cobot;
  if (s == "table") return AttentionClass::Table;
  if (s == "distracted") return AttentionClass::Distracted;
  return std::nullopt;
}

}  // namespace gazeattn
