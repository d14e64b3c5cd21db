#pragma once

#include "pepa/kernels.hpp"
#include "pepa/semantics.hpp"

#include <json.hpp>

#include <cstddef>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace pepa {

struct CtmcTransition {
    int source = 0;
    int target = 0;
    int action = 0;
    double rate = 0.0;

    friend bool operator==(const CtmcTransition&, const CtmcTransition&) = default;
};

struct StateHash {
    std::size_t operator()(const StateVector& s) const noexcept;
};

// Labelled CTMC over numerical state vectors. Transitions are grouped by
// source in index order; self-loops may appear but never enter the generator.
struct Ctmc {
    StateLayout layout;
    std::vector<std::string> actions;
    std::vector<StateVector> states;
    int initial = 0;
    std::vector<CtmcTransition> transitions;

    std::size_t size() const { return states.size(); }
    // Linear scan; build a map when many lookups are needed.
    int index_of(const StateVector& state) const;

    // Q with off-diagonal sums and the negated row sum on the diagonal.
    CsrMatrix generator() const;
    // Highest total exit rate over all states.
    double max_exit_rate() const;

    friend bool operator==(const Ctmc&, const Ctmc&) = default;
};

struct GenerationOptions {
    std::size_t state_cap = 10'000'000;
    bool parallel = false;
};

// Level-synchronous breadth-first closure. States are numbered in order of
// discovery; the parallel variant expands each level concurrently and merges
// in frontier order, so both produce the same Ctmc.
Ctmc generate_ctmc(const CompiledModel& model, const StateVector& initial,
                   const GenerationOptions& options = {});
Ctmc generate_ctmc(const GroupedModel& model, const GenerationOptions& options = {});

nlohmann::json to_json(const Ctmc& ctmc);
void write_matrix_market(std::ostream& out, const CsrMatrix& matrix);

} // namespace pepa
