#pragma once

#include <string>

#include <json.hpp>

namespace storval::cli {

// Serializes with every floating-point number at 17 significant digits.
std::string to_json_text(const nlohmann::json& value);

}  // namespace storval::cli
