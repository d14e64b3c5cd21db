#include "pepa/model.hpp"
#include "pepa/error.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace pepa {

int SequentialComponent::index_of(std::string_view state) const {
    auto it = std::find(states.begin(), states.end(), state);
    return it == states.end() ? -1 : static_cast<int>(it - states.begin());
}

ActionSet SequentialComponent::actions() const {
    ActionSet out;
    for (const auto& t : transitions)
        out.insert(t.action);
    return out;
}

int EquationNode::population() const {
    int total = 0;
    for (const auto& [state, count] : initial_counts)
        total += count;
    return total;
}

std::vector<int> SystemEquation::leaves_under(int start) const {
    std::vector<int> out;
    if (start < 0)
        return out;
    std::function<void(int)> walk = [&](int n) {
        const auto& node = at(n);
        if (node.kind == EquationNode::Kind::cooperation) {
            walk(node.left);
            walk(node.right);
        } else if (node.kind == EquationNode::Kind::group) {
            out.push_back(n);
        }
    };
    walk(start);
    return out;
}

int SystemEquation::find_group(std::string_view label) const {
    for (int n : leaves())
        if (at(n).label == label)
            return n;
    return -1;
}

std::vector<int> SystemEquation::path_to(int target) const {
    std::vector<int> path;
    std::function<bool(int)> walk = [&](int n) {
        path.push_back(n);
        if (n == target)
            return true;
        const auto& node = at(n);
        if (node.kind == EquationNode::Kind::cooperation && (walk(node.left) || walk(node.right)))
            return true;
        path.pop_back();
        return false;
    };
    if (root >= 0)
        walk(root);
    return path;
}

bool operator==(const SystemEquation& a, const SystemEquation& b) {
    std::function<bool(int, int)> same = [&](int x, int y) {
        if ((x < 0) != (y < 0))
            return false;
        if (x < 0)
            return true;
        const auto& nx = a.at(x);
        const auto& ny = b.at(y);
        if (nx.kind != ny.kind)
            return false;
        switch (nx.kind) {
        case EquationNode::Kind::nil:
            return true;
        case EquationNode::Kind::group:
            return nx.label == ny.label && nx.component == ny.component &&
                   nx.initial_counts == ny.initial_counts;
        case EquationNode::Kind::cooperation:
            return nx.coop_set == ny.coop_set && same(nx.left, ny.left) &&
                   same(nx.right, ny.right);
        }
        return false;
    };
    return same(a.root, b.root);
}

std::vector<std::string> GroupedModel::group_order() const {
    std::vector<std::string> out;
    for (int n : equation.leaves())
        out.push_back(equation.at(n).label);
    return out;
}

const EquationNode& GroupedModel::group(std::string_view label) const {
    int n = equation.find_group(label);
    if (n < 0)
        throw model_error("unknown group label '" + std::string(label) + "'");
    return equation.at(n);
}

const SequentialComponent& GroupedModel::component_of(std::string_view label) const {
    const auto& leaf = group(label);
    auto it = components.find(leaf.component);
    if (it == components.end())
        throw model_error("group '" + leaf.label + "' references undefined component '" +
                          leaf.component + "'");
    return it->second;
}

const ProcessDefinition* GroupedModel::definition(std::string_view name) const {
    for (const auto& d : definitions)
        if (d.name == name)
            return &d;
    return nullptr;
}

bool operator==(const GroupedModel& a, const GroupedModel& b) {
    return a.constants == b.constants && a.definitions == b.definitions &&
           a.components == b.components && a.equation == b.equation &&
           a.size_hints == b.size_hints && a.threshold == b.threshold;
}

SequentialComponent local_automaton(const GroupedModel& model, const std::string& start) {
    if (model.definition(start) == nullptr)
        throw model_error("undefined process '" + start + "'");

    std::set<std::string> reached{start};
    std::deque<std::string> queue{start};
    while (!queue.empty()) {
        const auto* def = model.definition(queue.front());
        queue.pop_front();
        for (const auto& act : def->choices) {
            if (model.definition(act.target) == nullptr)
                throw model_error("undefined process '" + act.target + "' in definition of '" +
                                  def->name + "'");
            if (reached.insert(act.target).second)
                queue.push_back(act.target);
        }
    }

    SequentialComponent comp;
    comp.name = start;
    for (const auto& d : model.definitions)
        if (reached.count(d.name))
            comp.states.push_back(d.name);

    for (int s = 0; s < static_cast<int>(comp.states.size()); ++s) {
        const auto* def = model.definition(comp.states[static_cast<std::size_t>(s)]);
        std::map<std::string, Rate::Kind> kind_of_action;
        std::vector<LocalTransition> local;
        for (const auto& act : def->choices) {
            auto [it, fresh] = kind_of_action.emplace(act.action, act.rate.kind());
            if (!fresh && it->second != act.rate.kind())
                throw model_error("state '" + def->name + "' offers action '" + act.action +
                                  "' both actively and passively");
            int target = comp.index_of(act.target);
            auto same = std::find_if(local.begin(), local.end(), [&](const LocalTransition& t) {
                return t.action == act.action && t.target == target;
            });
            if (same != local.end())
                same->rate += act.rate;
            else
                local.push_back({s, act.action, act.rate, target});
        }
        comp.transitions.insert(comp.transitions.end(), local.begin(), local.end());
    }
    return comp;
}

} // namespace pepa
