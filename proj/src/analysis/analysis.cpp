#include "pepa/analysis.hpp"
#include "pepa/error.hpp"

#include <algorithm>
#include <functional>

namespace pepa {

namespace {

GroupSet subtree_groups(const SystemEquation& eq, int n) {
    GroupSet out;
    for (int leaf : eq.leaves_under(n))
        out.insert(eq.at(leaf).label);
    return out;
}

int require_group(const GroupedModel& model, const std::string& H) {
    int n = model.equation.find_group(H);
    if (n < 0)
        throw model_error("unknown group label '" + H + "'");
    return n;
}

bool intersects(const GroupSet& a, const GroupSet& b) {
    return std::any_of(a.begin(), a.end(), [&](const auto& x) { return b.count(x) > 0; });
}

} // namespace

GroupPartition partition_groups(const GroupedModel& model, std::optional<int> threshold_override) {
    std::optional<int> threshold = threshold_override ? threshold_override : model.threshold;
    GroupPartition out;
    for (const auto& label : model.group_order()) {
        auto hint = model.size_hints.find(label);
        bool large = false;
        if (hint != model.size_hints.end())
            large = hint->second == SizeClass::large;
        else if (threshold)
            large = model.group(label).population() > *threshold;
        (large ? out.large : out.small).insert(label);
    }
    return out;
}

void validate_partition(const GroupedModel& model, const GroupPartition& partition) {
    GroupSet all = group_labels(model);
    for (const auto& g : partition.small) {
        if (!all.count(g))
            throw model_error("partition names unknown group '" + g + "'");
        if (partition.large.count(g))
            throw model_error("group '" + g + "' is both small and large");
    }
    for (const auto& g : partition.large)
        if (!all.count(g))
            throw model_error("partition names unknown group '" + g + "'");
    for (const auto& g : all)
        if (!partition.small.count(g) && !partition.large.count(g))
            throw model_error("group '" + g + "' is neither small nor large");
}

GroupSet group_labels(const GroupedModel& model) {
    auto order = model.group_order();
    return GroupSet(order.begin(), order.end());
}

ActionSet group_interface(const GroupedModel& model, const std::string& H) {
    int leaf = require_group(model, H);
    ActionSet out;
    for (int n : model.equation.path_to(leaf)) {
        const auto& node = model.equation.at(n);
        if (node.kind == EquationNode::Kind::cooperation)
            out.insert(node.coop_set.begin(), node.coop_set.end());
    }
    return out;
}

ActionSet enabled_actions(const GroupedModel& model, const std::string& H) {
    return model.component_of(H).actions();
}

GroupSet coop_partners(const GroupedModel& model, const std::string& H, const std::string& action) {
    int leaf = require_group(model, H);
    const auto& eq = model.equation;
    auto path = eq.path_to(leaf);
    GroupSet out;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const auto& node = eq.at(path[i]);
        if (!node.coop_set.count(action))
            continue;
        int sibling = node.left == path[i + 1] ? node.right : node.left;
        auto groups = subtree_groups(eq, sibling);
        out.insert(groups.begin(), groups.end());
    }
    return out;
}

ActionClassification classify(const GroupedModel& model, const GroupPartition& partition) {
    validate_partition(model, partition);
    ActionSet large_only, small_only, shared;
    for (const auto& H : model.group_order()) {
        ActionSet iface = group_interface(model, H);
        bool small = partition.is_small(H);
        const GroupSet& other = small ? partition.large : partition.small;
        for (const auto& a : enabled_actions(model, H)) {
            bool crosses = iface.count(a) && intersects(coop_partners(model, H, a), other);
            if (crosses)
                shared.insert(a);
            else
                (small ? small_only : large_only).insert(a);
        }
    }
    // An action crossing the size boundary anywhere is shared; one that is
    // purely small somewhere and purely large elsewhere counts as small.
    ActionClassification out;
    out.shared = shared;
    for (const auto& a : small_only)
        if (!shared.count(a))
            out.small_only.insert(a);
    for (const auto& a : large_only)
        if (!shared.count(a) && !small_only.count(a))
            out.large_only.insert(a);
    return out;
}

ConditionReport check_aggregation_condition(const GroupedModel& model,
                                            const GroupPartition& partition,
                                            ConditionReading reading) {
    validate_partition(model, partition);
    ConditionReport report;
    for (const auto& H : model.group_order()) {
        if (!partition.is_large(H))
            continue;
        const auto& comp = model.component_of(H);
        ActionSet iface = group_interface(model, H);
        for (const auto& a : comp.actions()) {
            if (!iface.count(a) || !intersects(coop_partners(model, H, a), partition.small))
                continue;
            for (int s = 0; s < static_cast<int>(comp.states.size()); ++s) {
                bool enabled = false;
                bool all_passive = true;
                for (const auto& t : comp.transitions)
                    if (t.source == s && t.action == a) {
                        enabled = true;
                        all_passive = all_passive && t.rate.is_passive();
                    }
                bool ok = enabled ? all_passive : reading == ConditionReading::enabling;
                if (!ok)
                    report.violations.push_back({H, a, comp.states[static_cast<std::size_t>(s)]});
            }
        }
    }
    report.satisfied = report.violations.empty();
    return report;
}

GroupedModel reduce(const GroupedModel& model, const GroupPartition& partition) {
    validate_partition(model, partition);
    const auto& eq = model.equation;
    GroupedModel out;
    out.constants = model.constants;
    out.threshold = model.threshold;

    // Returns the new node index, or -1 when the subtree reduces to Nil.
    std::function<int(int)> rebuild = [&](int n) -> int {
        const auto& node = eq.at(n);
        switch (node.kind) {
        case EquationNode::Kind::nil:
            return -1;
        case EquationNode::Kind::group:
            if (partition.is_large(node.label))
                return -1;
            out.equation.nodes.push_back(node);
            return static_cast<int>(out.equation.nodes.size()) - 1;
        case EquationNode::Kind::cooperation: {
            int l = rebuild(node.left);
            int r = rebuild(node.right);
            if (l < 0)
                return r;
            if (r < 0)
                return l;
            EquationNode coop = node;
            coop.left = l;
            coop.right = r;
            out.equation.nodes.push_back(std::move(coop));
            return static_cast<int>(out.equation.nodes.size()) - 1;
        }
        }
        return -1;
    };
    out.equation.root = rebuild(eq.root);
    if (out.equation.root < 0)
        throw Error(ErrorKind::condition, "reduction leaves no small group (the model reduces to Nil)");

    std::set<std::string> kept_states;
    for (int leaf : out.equation.leaves()) {
        const auto& node = out.equation.at(leaf);
        const auto& comp = model.components.at(node.component);
        out.components.emplace(node.component, comp);
        kept_states.insert(comp.states.begin(), comp.states.end());
        auto hint = model.size_hints.find(node.label);
        if (hint != model.size_hints.end())
            out.size_hints.insert(*hint);
    }
    for (const auto& def : model.definitions)
        if (kept_states.count(def.name))
            out.definitions.push_back(def);
    return out;
}

} // namespace pepa
