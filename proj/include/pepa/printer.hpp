#pragma once

#include "pepa/model.hpp"

#include <string>

namespace pepa {

// Source text that parses back to a structurally identical model.
std::string print_model(const GroupedModel& model);
std::string print_equation(const SystemEquation& equation);

} // namespace pepa
