#pragma once

#include <nlohmann/json.hpp>

#include "nlsgs/flows.hpp"
#include "nlsgs/problem.hpp"

namespace nlsgs {

nlohmann::json to_json(const Potential& v);
nlohmann::json to_json(const ProblemSpec& spec);
nlohmann::json to_json(const DiscretizationSpec& disc);
nlohmann::json to_json(const FlowConfig& cfg);

/// Stable hex digest (FNV-1a) of the compact JSON dump.
std::string digest(const nlohmann::json& j);

}  // namespace nlsgs
