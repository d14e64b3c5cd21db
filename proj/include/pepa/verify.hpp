#pragma once

#include "pepa/analysis.hpp"
#include "pepa/ctmc.hpp"
#include "pepa/odes.hpp"
#include "pepa/semantics.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace pepa {

// Sub-chains of a full CTMC, one per small-group configuration. Chain ids
// follow the lexicographic order of the keys.
struct SubChainPartition {
    StateLayout small_layout;
    std::vector<StateVector> keys;
    std::vector<std::vector<int>> members;
    std::vector<int> chain_of;

    std::size_t size() const { return keys.size(); }
    int find(const StateVector& key) const;
};

// Keys each full state by its small-group sub-vector and checks the result
// against connectivity under large-only transitions.
SubChainPartition partition_subchains(const Ctmc& full, const ActionClassification& classification,
                                      const StateLayout& small_layout);

struct BoundaryReport {
    // blocked[S] is bl'(S): shared actions some small group cannot perform in
    // S because a large partner group offers a zero apparent rate.
    std::vector<ActionSet> blocked;
    std::vector<std::vector<int>> per_chain;

    bool is_boundary(int state) const { return !blocked[static_cast<std::size_t>(state)].empty(); }
    // bl(Y_i, action)
    std::vector<int> blocked_in_chain(const SubChainPartition& chains, int chain,
                                      const std::string& action) const;
    std::size_t count() const;
};

BoundaryReport boundary_states(const Ctmc& full, const CompiledModel& model,
                               const GroupPartition& partition,
                               const ActionClassification& classification,
                               const SubChainPartition& chains);

struct Irregularity {
    std::string action;
    int from_chain = 0;
    int to_chain = -1; // -1 when a state that should move lacks the transition
    int state = 0;
    double rate = 0.0;
    double expected = 0.0;
};

struct CrossRateTable {
    std::map<std::tuple<std::string, int, int>, double> per_action;
    std::map<std::pair<int, int>, double> total;
    bool regular = true;
    std::vector<Irregularity> irregularities;
};

// Equality used for rate regularity: exact, or within 1e-9 relative.
bool rates_agree(double a, double b);

CrossRateTable cross_rates(const Ctmc& full, const SubChainPartition& chains,
                           const BoundaryReport& boundary, const ActionClassification& classification);

// One equation per sub-chain built from the cross-chain totals.
OdeSystem collapse_ck(const SubChainPartition& chains, const CrossRateTable& table,
                      bool force = false);

struct GeneratorDiff {
    double max_abs_diff = 0.0;
    int row = -1;
    int column = -1;
    std::size_t matched = 0;
};

// Matches chains to aggregated states by key and compares coefficients.
GeneratorDiff compare_generators(const OdeSystem& collapsed, const Ctmc& aggregated);

// Full verification pipeline in one report, as emitted by `pepa verify`.
struct VerificationSummary {
    std::size_t full_states = 0;
    std::size_t chains = 0;
    std::size_t aggregated_states = 0;
    std::size_t boundary_states = 0;
    bool regular = true;
    std::vector<Irregularity> irregularities;
    GeneratorDiff diff;
};

VerificationSummary verify_aggregation(const GroupedModel& model, const GroupPartition& partition,
                                       const GenerationOptions& generation = {},
                                       bool force_collapse = false);

nlohmann::json to_json(const VerificationSummary& summary);

} // namespace pepa
