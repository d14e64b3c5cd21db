#pragma once

#include "pepa/model.hpp"

#include <map>
#include <string>
#include <string_view>

namespace pepa {

// Values that replace entries of the `rates` block at parse time. Every
// name must be defined in the block.
using ParameterOverrides = std::map<std::string, double>;

GroupedModel parse_model(std::string_view text, const ParameterOverrides& overrides = {});
GroupedModel parse_model_file(const std::string& path, const ParameterOverrides& overrides = {});

std::string read_text_file(const std::string& path);

} // namespace pepa
