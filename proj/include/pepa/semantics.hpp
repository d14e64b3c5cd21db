#pragma once

#include "pepa/analysis.hpp"
#include "pepa/model.hpp"
#include "pepa/rate.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pepa {

// Counts xi(H, C), one coordinate per (group, local state) in layout order.
using StateVector = std::vector<int>;

struct GroupSlot {
    std::string label;
    std::string component;
    std::vector<std::string> states;
    int offset = 0;
    int population = 0;

    friend bool operator==(const GroupSlot&, const GroupSlot&) = default;
};

// Fixed coordinate ordering: groups left to right as in the system equation,
// local states in definition order within each group.
class StateLayout {
public:
    StateLayout() = default;
    explicit StateLayout(const GroupedModel& model);

    const std::vector<GroupSlot>& groups() const { return groups_; }
    int dimension() const { return dimension_; }
    int group_index(std::string_view label) const;
    const GroupSlot& group(std::string_view label) const;
    int coordinate(std::string_view label, std::string_view state) const;
    // `Group.State`, or a bare state name that occurs in exactly one group.
    int resolve(std::string_view name) const;
    std::vector<std::string> coordinate_names() const;

    // Layout holding only `labels`, in this layout's order.
    StateLayout restricted(const GroupSet& labels) const;
    // Coordinates of `state` for the groups present in `sub`.
    StateVector project(const StateVector& state, const StateLayout& sub) const;

    friend bool operator==(const StateLayout&, const StateLayout&) = default;

private:
    std::vector<GroupSlot> groups_;
    int dimension_ = 0;
};

std::string format_state(const StateVector& state);

Rate apparent_rate(const SequentialComponent& component, std::string_view state,
                   std::string_view action);
Rate apparent_rate_to(const SequentialComponent& component, std::string_view state,
                      std::string_view action, std::string_view target);

// Moves one instance from local state `from` to `to` inside a group sub-vector.
StateVector theta(StateVector group_counts, int from, int to);

// Actions some group below `node` can perform.
ActionSet subtree_alphabet(const GroupedModel& model, int node);

struct Successor {
    int action = 0;
    double rate = 0.0;
    StateVector target;

    friend bool operator==(const Successor&, const Successor&) = default;
};

// The count-oriented semantics of a model, precompiled for repeated use.
// Action ids follow the lexicographic order of action names.
class CompiledModel {
public:
    explicit CompiledModel(GroupedModel model);

    const GroupedModel& model() const { return model_; }
    const StateLayout& layout() const { return layout_; }
    const std::vector<std::string>& actions() const { return actions_; }
    int action_id(std::string_view name) const;

    StateVector initial_state() const;
    bool is_valid(const StateVector& state) const;

    Rate group_apparent_rate(const StateVector& state, int group, int action) const;
    Rate group_apparent_rate(const StateVector& state, std::string_view group,
                             std::string_view action) const;

    // One-step transitions, merged by (action, target) and ordered by action
    // name then target vector. Zero-rate moves are dropped; self-loops kept.
    std::vector<Successor> successors(const StateVector& state) const;

private:
    struct Move {
        int action;
        Rate rate;
        std::vector<std::pair<int, int>> delta;
    };
    struct LocalOut {
        int action;
        Rate rate;
        int target;
    };
    struct Component {
        std::vector<std::vector<LocalOut>> out;
        std::vector<std::vector<Rate>> apparent;
    };
    struct Node {
        EquationNode::Kind kind;
        int left = -1;
        int right = -1;
        std::vector<bool> coop;
        int group = -1;
    };

    std::vector<Move> evaluate(int node, const StateVector& state) const;

    GroupedModel model_;
    StateLayout layout_;
    std::vector<std::string> actions_;
    std::vector<Component> components_;
    std::vector<int> group_component_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

std::vector<Successor> successors(const GroupedModel& model, const StateVector& state);

} // namespace pepa
