#pragma once

#include <string>
#include <vector>

#include "parl/config.hpp"

namespace parl {

// Built-in environment configurations. `desk` shrinks the maximum order
// quantity to 10 on the larger networks so per-step solves stay cheap;
// the two single-retailer benchmarks keep their native bounds.
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
std::string preset_config_text(const std::string& name);
NetworkConfig make_preset(const std::string& name, bool desk);

}  // namespace parl
