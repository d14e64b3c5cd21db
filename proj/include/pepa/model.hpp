#pragma once

#include "pepa/rate.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pepa {

using ActionSet = std::set<std::string>;

// One prefix `(action, rate).target` of a process definition.
struct Activity {
    std::string action;
    Rate rate;
    std::string target;

    friend bool operator==(const Activity&, const Activity&) = default;
};

// `Name = a1 + a2 + ...;` as written in the source, rates resolved.
struct ProcessDefinition {
    std::string name;
    std::vector<Activity> choices;

    friend bool operator==(const ProcessDefinition&, const ProcessDefinition&) = default;
};

struct LocalTransition {
    int source = 0;
    std::string action;
    Rate rate;
    int target = 0;

    friend bool operator==(const LocalTransition&, const LocalTransition&) = default;
};

// A sequential component as an explicit local automaton over ds(C).
struct SequentialComponent {
    std::string name;
    std::vector<std::string> states;
    std::vector<LocalTransition> transitions;

    int index_of(std::string_view state) const;
    ActionSet actions() const;

    friend bool operator==(const SequentialComponent&, const SequentialComponent&) = default;
};

enum class SizeClass { small, large };

struct EquationNode {
    enum class Kind { cooperation, group, nil };

    Kind kind = Kind::nil;
    // cooperation
    int left = -1;
    int right = -1;
    ActionSet coop_set;
    // group
    std::string label;
    std::string component;
    std::vector<std::pair<std::string, int>> initial_counts;

    int population() const;

    friend bool operator==(const EquationNode&, const EquationNode&) = default;
};

// Cooperation tree stored in an arena; `root` indexes into `nodes`.
struct SystemEquation {
    std::vector<EquationNode> nodes;
    int root = -1;

    const EquationNode& at(int index) const { return nodes.at(static_cast<std::size_t>(index)); }
    const EquationNode& root_node() const { return at(root); }
    // Group leaves in left-to-right order.
    std::vector<int> leaves() const { return leaves_under(root); }
    std::vector<int> leaves_under(int node) const;
    int find_group(std::string_view label) const;
    // Node indices from the root down to `node`, inclusive.
    std::vector<int> path_to(int node) const;

    friend bool operator==(const SystemEquation& a, const SystemEquation& b);
};

struct GroupedModel {
    std::map<std::string, double> constants;
    std::vector<ProcessDefinition> definitions;
    std::map<std::string, SequentialComponent> components;
    SystemEquation equation;
    std::map<std::string, SizeClass> size_hints;
    std::optional<int> threshold;
    std::vector<std::string> warnings;

    std::vector<std::string> group_order() const;
    const EquationNode& group(std::string_view label) const;
    const SequentialComponent& component_of(std::string_view label) const;
    const ProcessDefinition* definition(std::string_view name) const;

    // Structural identity; warnings are not part of it.
    friend bool operator==(const GroupedModel& a, const GroupedModel& b);
};

// Closure of `start` under the process definitions, states in definition order.
SequentialComponent local_automaton(const GroupedModel& model, const std::string& start);

} // namespace pepa
