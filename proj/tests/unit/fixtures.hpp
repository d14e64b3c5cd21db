#pragma once

#include "pepa/parser.hpp"

#include <string>

namespace fixtures {

inline std::string model_path(const std::string& name) {
    return std::string(PEPA_MODELS_DIR) + "/" + name;
}

inline pepa::GroupedModel load(const std::string& name, const pepa::ParameterOverrides& overrides = {}) {
    return pepa::parse_model_file(model_path(name), overrides);
}

// One group of population one cycling between two states.
inline const char* two_state = R"(
rates { lambda = 2; mu = 3; }
A = (up, lambda).B;
B = (down, mu).A;
system = G{A[1]};
)";

// Independent copies of a two-state component: the count in state A is
// binomially distributed in steady state.
inline const char* independent_copies = R"(
rates { a = 1.5; b = 0.5; }
A = (go, a).B;
B = (come, b).A;
system = G{A[4]};
)";

} // namespace fixtures
