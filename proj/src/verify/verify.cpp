#include "pepa/verify.hpp"
#include "pepa/error.hpp"
#include "pepa/log.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <unordered_map>

namespace pepa {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    int find(int x) {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            auto& p = parent_[static_cast<std::size_t>(x)];
            p = parent_[static_cast<std::size_t>(p)];
            x = p;
        }
        return x;
    }

    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b)
            parent_[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }

private:
    std::vector<int> parent_;
};

// Offsets of each source's block inside the transition list.
std::vector<std::vector<int>> outgoing(const Ctmc& ctmc) {
    std::vector<std::vector<int>> out(ctmc.size());
    for (std::size_t k = 0; k < ctmc.transitions.size(); ++k)
        out[static_cast<std::size_t>(ctmc.transitions[k].source)].push_back(static_cast<int>(k));
    return out;
}

} // namespace

int SubChainPartition::find(const StateVector& key) const {
    auto it = std::lower_bound(keys.begin(), keys.end(), key);
    return it != keys.end() && *it == key ? static_cast<int>(it - keys.begin()) : -1;
}

SubChainPartition partition_subchains(const Ctmc& full, const ActionClassification& classification,
                                      const StateLayout& small_layout) {
    SubChainPartition out;
    out.small_layout = small_layout;
    std::vector<StateVector> projected;
    projected.reserve(full.size());
    for (const auto& s : full.states)
        projected.push_back(full.layout.project(s, small_layout));

    out.keys = projected;
    std::sort(out.keys.begin(), out.keys.end());
    out.keys.erase(std::unique(out.keys.begin(), out.keys.end()), out.keys.end());
    out.members.resize(out.keys.size());
    out.chain_of.resize(full.size());
    for (std::size_t s = 0; s < full.size(); ++s) {
        int c = out.find(projected[s]);
        out.chain_of[s] = c;
        out.members[static_cast<std::size_t>(c)].push_back(static_cast<int>(s));
    }

    // Second characterization: undirected connectivity under large-only moves.
    DisjointSets sets(full.size());
    std::vector<bool> large_only(full.actions.size(), false);
    for (std::size_t a = 0; a < full.actions.size(); ++a)
        large_only[a] = classification.large_only.count(full.actions[a]) > 0;
    for (const auto& t : full.transitions)
        if (large_only[static_cast<std::size_t>(t.action)])
            sets.unite(t.source, t.target);
    for (std::size_t c = 0; c < out.members.size(); ++c) {
        int root = sets.find(out.members[c].front());
        for (int s : out.members[c])
            if (sets.find(s) != root)
                throw Error(ErrorKind::verification,
                            "sub-chain " + format_state(out.keys[c]) +
                                " is not connected by large-only transitions");
    }
    std::vector<int> root_chain(full.size(), -1);
    for (std::size_t s = 0; s < full.size(); ++s) {
        int root = sets.find(static_cast<int>(s));
        int& owner = root_chain[static_cast<std::size_t>(root)];
        if (owner < 0)
            owner = out.chain_of[s];
        else if (owner != out.chain_of[s])
            throw Error(ErrorKind::verification,
                        "a large-only transition changes the small-group configuration at state " +
                            format_state(full.states[s]));
    }
    return out;
}

std::vector<int> BoundaryReport::blocked_in_chain(const SubChainPartition& chains, int chain,
                                                  const std::string& action) const {
    std::vector<int> out;
    for (int s : chains.members.at(static_cast<std::size_t>(chain)))
        if (blocked[static_cast<std::size_t>(s)].count(action))
            out.push_back(s);
    return out;
}

std::size_t BoundaryReport::count() const {
    return static_cast<std::size_t>(
        std::count_if(blocked.begin(), blocked.end(), [](const ActionSet& b) { return !b.empty(); }));
}

BoundaryReport boundary_states(const Ctmc& full, const CompiledModel& model,
                               const GroupPartition& partition,
                               const ActionClassification& classification,
                               const SubChainPartition& chains) {
    struct Check {
        std::string action;
        int action_id;
        std::vector<int> large_partners;
    };
    std::vector<Check> checks;
    const auto& grouped = model.model();
    for (const auto& Hs : grouped.group_order()) {
        if (!partition.is_small(Hs))
            continue;
        for (const auto& a : enabled_actions(grouped, Hs)) {
            if (!classification.shared.count(a))
                continue;
            Check c{a, model.action_id(a), {}};
            for (const auto& Hl : coop_partners(grouped, Hs, a))
                if (partition.is_large(Hl))
                    c.large_partners.push_back(model.layout().group_index(Hl));
            if (!c.large_partners.empty())
                checks.push_back(std::move(c));
        }
    }

    BoundaryReport report;
    report.blocked.resize(full.size());
    for (std::size_t s = 0; s < full.size(); ++s)
        for (const auto& c : checks)
            for (int g : c.large_partners)
                if (model.group_apparent_rate(full.states[s], g, c.action_id).is_zero())
                    report.blocked[s].insert(c.action);

    report.per_chain.resize(chains.size());
    for (std::size_t s = 0; s < full.size(); ++s)
        if (report.is_boundary(static_cast<int>(s)))
            report.per_chain[static_cast<std::size_t>(chains.chain_of[s])].push_back(static_cast<int>(s));
    return report;
}

bool rates_agree(double a, double b) {
    if (a == b)
        return true;
    return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b));
}

CrossRateTable cross_rates(const Ctmc& full, const SubChainPartition& chains,
                           const BoundaryReport& boundary, const ActionClassification& classification) {
    CrossRateTable table;
    auto out = outgoing(full);

    for (std::size_t a = 0; a < full.actions.size(); ++a) {
        const auto& action = full.actions[a];
        if (!classification.small_only.count(action) && !classification.shared.count(action))
            continue;
        for (std::size_t i = 0; i < chains.size(); ++i) {
            // Per source: total alpha rate, and alpha rate into each other chain.
            std::vector<std::map<int, double>> into(chains.members[i].size());
            std::vector<double> apparent(chains.members[i].size(), 0.0);
            std::set<int> targets;
            for (std::size_t m = 0; m < chains.members[i].size(); ++m) {
                int s = chains.members[i][m];
                for (int k : out[static_cast<std::size_t>(s)]) {
                    const auto& t = full.transitions[static_cast<std::size_t>(k)];
                    if (t.action != static_cast<int>(a))
                        continue;
                    apparent[m] += t.rate;
                    int j = chains.chain_of[static_cast<std::size_t>(t.target)];
                    if (j != static_cast<int>(i)) {
                        into[m][j] += t.rate;
                        targets.insert(j);
                    }
                }
            }
            for (int j : targets) {
                std::optional<double> reference;
                for (std::size_t m = 0; m < into.size() && !reference; ++m)
                    if (!boundary.blocked[static_cast<std::size_t>(chains.members[i][m])].count(action) &&
                        into[m].count(j))
                        reference = into[m].at(j);
                for (std::size_t m = 0; m < into.size() && !reference; ++m)
                    if (into[m].count(j))
                        reference = into[m].at(j);

                for (std::size_t m = 0; m < into.size(); ++m) {
                    int s = chains.members[i][m];
                    if (boundary.blocked[static_cast<std::size_t>(s)].count(action) || !(apparent[m] > 0.0))
                        continue;
                    auto it = into[m].find(j);
                    if (it == into[m].end()) {
                        table.irregularities.push_back({action, static_cast<int>(i), -1, s, 0.0, *reference});
                    } else if (!rates_agree(it->second, *reference)) {
                        table.irregularities.push_back(
                            {action, static_cast<int>(i), j, s, it->second, *reference});
                    }
                }
                table.per_action[{action, static_cast<int>(i), j}] = *reference;
                table.total[{static_cast<int>(i), j}] += *reference;
            }
        }
    }
    table.regular = table.irregularities.empty();
    return table;
}

OdeSystem collapse_ck(const SubChainPartition& chains, const CrossRateTable& table, bool force) {
    if (!table.regular && !force)
        throw Error(ErrorKind::verification,
                    "cross-chain rates are irregular (" + std::to_string(table.irregularities.size()) +
                        " counterexamples); pass --force-collapse to collapse anyway");
    const int n = static_cast<int>(chains.size());
    std::vector<CsrMatrix::Triplet> entries;
    for (const auto& [key, rate] : table.total) {
        auto [i, j] = key;
        entries.emplace_back(i, i, -rate);
        entries.emplace_back(j, i, rate);
    }
    for (int i = 0; i < n; ++i)
        entries.emplace_back(i, i, 0.0);
    OdeSystem odes;
    odes.dimension = n;
    odes.rates = CsrMatrix::from_triplets(n, n, std::move(entries));
    odes.labels = chains.keys;
    odes.layout = chains.small_layout;
    return odes;
}

GeneratorDiff compare_generators(const OdeSystem& collapsed, const Ctmc& aggregated) {
    OdeSystem direct = build_marginal_odes(aggregated);
    if (direct.dimension != collapsed.dimension)
        throw Error(ErrorKind::verification,
                    "collapsed system has " + std::to_string(collapsed.dimension) +
                        " equations but the aggregated CTMC has " + std::to_string(direct.dimension) +
                        " states");
    std::vector<int> match(static_cast<std::size_t>(collapsed.dimension), -1);
    std::vector<bool> used(static_cast<std::size_t>(direct.dimension), false);
    std::unordered_map<StateVector, int, StateHash> index;
    for (std::size_t s = 0; s < aggregated.size(); ++s)
        index.emplace(aggregated.states[s], static_cast<int>(s));
    for (std::size_t i = 0; i < collapsed.labels.size(); ++i) {
        auto it = index.find(collapsed.labels[i]);
        if (it == index.end())
            throw Error(ErrorKind::verification, "sub-chain " + format_state(collapsed.labels[i]) +
                                                     " has no aggregated state");
        match[i] = it->second;
        used[static_cast<std::size_t>(it->second)] = true;
    }

    GeneratorDiff diff;
    diff.matched = collapsed.labels.size();
    auto consider = [&](int r, int c) {
        double a = collapsed.rates.at(r, c);
        double b = direct.rates.at(match[static_cast<std::size_t>(r)], match[static_cast<std::size_t>(c)]);
        double d = std::abs(a - b);
        if (diff.row < 0 || d > diff.max_abs_diff) {
            diff.max_abs_diff = d;
            diff.row = r;
            diff.column = c;
        }
    };
    std::vector<int> inverse(static_cast<std::size_t>(direct.dimension), -1);
    for (std::size_t i = 0; i < match.size(); ++i)
        inverse[static_cast<std::size_t>(match[i])] = static_cast<int>(i);
    for (int r = 0; r < collapsed.rates.rows; ++r)
        for (int k = collapsed.rates.row_ptr[static_cast<std::size_t>(r)]; k < collapsed.rates.row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
            consider(r, collapsed.rates.col[static_cast<std::size_t>(k)]);
    for (int r = 0; r < direct.rates.rows; ++r)
        for (int k = direct.rates.row_ptr[static_cast<std::size_t>(r)]; k < direct.rates.row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
            consider(inverse[static_cast<std::size_t>(r)],
                     inverse[static_cast<std::size_t>(direct.rates.col[static_cast<std::size_t>(k)])]);
    return diff;
}

VerificationSummary verify_aggregation(const GroupedModel& model, const GroupPartition& partition,
                                       const GenerationOptions& generation, bool force_collapse) {
    auto condition = check_aggregation_condition(model, partition);
    if (!condition.satisfied)
        throw Error(ErrorKind::condition, "the model does not satisfy the aggregation condition");
    auto classification = classify(model, partition);

    CompiledModel full_model(model);
    Ctmc full = generate_ctmc(full_model, full_model.initial_state(), generation);
    Ctmc aggregated = generate_ctmc(reduce(model, partition), generation);

    auto small_layout = full.layout.restricted(partition.small);
    auto chains = partition_subchains(full, classification, small_layout);
    auto boundary = boundary_states(full, full_model, partition, classification, chains);
    auto table = cross_rates(full, chains, boundary, classification);
    auto collapsed = collapse_ck(chains, table, force_collapse);

    VerificationSummary summary;
    summary.full_states = full.size();
    summary.chains = chains.size();
    summary.aggregated_states = aggregated.size();
    summary.boundary_states = boundary.count();
    summary.regular = table.regular;
    summary.irregularities = table.irregularities;
    summary.diff = compare_generators(collapsed, aggregated);
    return summary;
}

nlohmann::json to_json(const VerificationSummary& summary) {
    nlohmann::json irregular = nlohmann::json::array();
    for (const auto& i : summary.irregularities)
        irregular.push_back({{"action", i.action},
                             {"from_chain", i.from_chain},
                             {"to_chain", i.to_chain},
                             {"state", i.state},
                             {"rate", i.rate},
                             {"expected", i.expected}});
    return {{"full_states", summary.full_states},
            {"chains", summary.chains},
            {"aggregated_states", summary.aggregated_states},
            {"boundary_states", summary.boundary_states},
            {"regular", summary.regular},
            {"irregularities", irregular},
            {"generator_max_diff", summary.diff.max_abs_diff},
            {"matched_chains", summary.diff.matched}};
}

} // namespace pepa
