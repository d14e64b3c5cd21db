#include "pepa/semantics.hpp"
#include "pepa/error.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace pepa {

StateLayout::StateLayout(const GroupedModel& model) {
    for (int leaf : model.equation.leaves()) {
        const auto& node = model.equation.at(leaf);
        const auto& comp = model.components.at(node.component);
        GroupSlot slot;
        slot.label = node.label;
        slot.component = comp.name;
        slot.states = comp.states;
        slot.offset = dimension_;
        slot.population = node.population();
        dimension_ += static_cast<int>(comp.states.size());
        groups_.push_back(std::move(slot));
    }
}

int StateLayout::group_index(std::string_view label) const {
    for (std::size_t g = 0; g < groups_.size(); ++g)
        if (groups_[g].label == label)
            return static_cast<int>(g);
    return -1;
}

const GroupSlot& StateLayout::group(std::string_view label) const {
    int g = group_index(label);
    if (g < 0)
        throw model_error("unknown group label '" + std::string(label) + "'");
    return groups_[static_cast<std::size_t>(g)];
}

int StateLayout::coordinate(std::string_view label, std::string_view state) const {
    int g = group_index(label);
    if (g < 0)
        return -1;
    const auto& slot = groups_[static_cast<std::size_t>(g)];
    auto it = std::find(slot.states.begin(), slot.states.end(), state);
    return it == slot.states.end() ? -1 : slot.offset + static_cast<int>(it - slot.states.begin());
}

int StateLayout::resolve(std::string_view name) const {
    auto dot = name.find('.');
    if (dot != std::string_view::npos) {
        int c = coordinate(name.substr(0, dot), name.substr(dot + 1));
        if (c < 0)
            throw model_error("unknown count '" + std::string(name) + "'");
        return c;
    }
    int found = -1;
    for (const auto& slot : groups_) {
        int c = coordinate(slot.label, name);
        if (c < 0)
            continue;
        if (found >= 0)
            throw model_error("count '" + std::string(name) +
                              "' is ambiguous; qualify it as Group." + std::string(name));
        found = c;
    }
    if (found < 0)
        throw model_error("unknown count '" + std::string(name) + "'");
    return found;
}

std::vector<std::string> StateLayout::coordinate_names() const {
    std::vector<std::string> out;
    for (const auto& slot : groups_)
        for (const auto& s : slot.states)
            out.push_back(slot.label + "." + s);
    return out;
}

StateLayout StateLayout::restricted(const GroupSet& labels) const {
    StateLayout out;
    for (const auto& slot : groups_) {
        if (!labels.count(slot.label))
            continue;
        GroupSlot copy = slot;
        copy.offset = out.dimension_;
        out.dimension_ += static_cast<int>(slot.states.size());
        out.groups_.push_back(std::move(copy));
    }
    return out;
}

StateVector StateLayout::project(const StateVector& state, const StateLayout& sub) const {
    StateVector out;
    out.reserve(static_cast<std::size_t>(sub.dimension()));
    for (const auto& slot : sub.groups()) {
        const auto& mine = group(slot.label);
        out.insert(out.end(), state.begin() + mine.offset,
                   state.begin() + mine.offset + static_cast<int>(mine.states.size()));
    }
    return out;
}

std::string format_state(const StateVector& state) {
    std::ostringstream out;
    out << "<";
    for (std::size_t i = 0; i < state.size(); ++i)
        out << (i ? "," : "") << state[i];
    out << ">";
    return out.str();
}

Rate apparent_rate(const SequentialComponent& component, std::string_view state,
                   std::string_view action) {
    int s = component.index_of(state);
    if (s < 0)
        throw model_error("'" + std::string(state) + "' is not a state of " + component.name);
    Rate total;
    for (const auto& t : component.transitions)
        if (t.source == s && t.action == action)
            total += t.rate;
    return total;
}

Rate apparent_rate_to(const SequentialComponent& component, std::string_view state,
                      std::string_view action, std::string_view target) {
    int s = component.index_of(state);
    int d = component.index_of(target);
    if (s < 0 || d < 0)
        throw model_error("unknown local state of " + component.name);
    Rate total;
    for (const auto& t : component.transitions)
        if (t.source == s && t.target == d && t.action == action)
            total += t.rate;
    return total;
}

StateVector theta(StateVector group_counts, int from, int to) {
    if (from < 0 || to < 0 || from >= static_cast<int>(group_counts.size()) ||
        to >= static_cast<int>(group_counts.size()))
        throw model_error("theta: local state index out of range");
    if (group_counts[static_cast<std::size_t>(from)] <= 0)
        throw model_error("theta: no instance in the source local state");
    --group_counts[static_cast<std::size_t>(from)];
    ++group_counts[static_cast<std::size_t>(to)];
    return group_counts;
}

ActionSet subtree_alphabet(const GroupedModel& model, int node) {
    ActionSet out;
    for (int leaf : model.equation.leaves_under(node)) {
        auto actions = model.components.at(model.equation.at(leaf).component).actions();
        out.insert(actions.begin(), actions.end());
    }
    return out;
}

CompiledModel::CompiledModel(GroupedModel model) : model_(std::move(model)), layout_(model_) {
    ActionSet names;
    for (const auto& [name, comp] : model_.components)
        for (const auto& t : comp.transitions)
            names.insert(t.action);
    for (const auto& node : model_.equation.nodes)
        names.insert(node.coop_set.begin(), node.coop_set.end());
    actions_.assign(names.begin(), names.end());
    const std::size_t n_actions = actions_.size();

    std::map<std::string, int> comp_index;
    for (const auto& slot : layout_.groups()) {
        auto [it, fresh] = comp_index.emplace(slot.component, static_cast<int>(components_.size()));
        if (fresh) {
            const auto& src = model_.components.at(slot.component);
            Component c;
            c.out.resize(src.states.size());
            c.apparent.assign(src.states.size(), std::vector<Rate>(n_actions));
            for (const auto& t : src.transitions) {
                int a = action_id(t.action);
                c.out[static_cast<std::size_t>(t.source)].push_back({a, t.rate, t.target});
                c.apparent[static_cast<std::size_t>(t.source)][static_cast<std::size_t>(a)] += t.rate;
            }
            components_.push_back(std::move(c));
        }
        group_component_.push_back(it->second);
    }

    const auto& eq = model_.equation;
    std::map<std::string, int> group_slot;
    for (std::size_t g = 0; g < layout_.groups().size(); ++g)
        group_slot[layout_.groups()[g].label] = static_cast<int>(g);
    nodes_.resize(eq.nodes.size());
    for (std::size_t n = 0; n < eq.nodes.size(); ++n) {
        const auto& src = eq.nodes[n];
        Node& dst = nodes_[n];
        dst.kind = src.kind;
        dst.left = src.left;
        dst.right = src.right;
        dst.coop.assign(n_actions, false);
        if (src.kind == EquationNode::Kind::group)
            dst.group = group_slot.at(src.label);
        if (src.kind != EquationNode::Kind::cooperation)
            continue;
        // An action synchronizes only when both sides can perform it; a
        // one-sided action in the set proceeds independently.
        ActionSet left = subtree_alphabet(model_, src.left);
        ActionSet right = subtree_alphabet(model_, src.right);
        for (const auto& a : src.coop_set)
            if (left.count(a) && right.count(a))
                dst.coop[static_cast<std::size_t>(action_id(a))] = true;
    }
    root_ = eq.root;
}

int CompiledModel::action_id(std::string_view name) const {
    auto it = std::lower_bound(actions_.begin(), actions_.end(), name);
    if (it == actions_.end() || *it != name)
        return -1;
    return static_cast<int>(it - actions_.begin());
}

StateVector CompiledModel::initial_state() const {
    StateVector state(static_cast<std::size_t>(layout_.dimension()), 0);
    for (int leaf : model_.equation.leaves()) {
        const auto& node = model_.equation.at(leaf);
        for (const auto& [local, count] : node.initial_counts)
            state[static_cast<std::size_t>(layout_.coordinate(node.label, local))] += count;
    }
    return state;
}

bool CompiledModel::is_valid(const StateVector& state) const {
    if (static_cast<int>(state.size()) != layout_.dimension())
        return false;
    for (const auto& slot : layout_.groups()) {
        int total = 0;
        for (std::size_t i = 0; i < slot.states.size(); ++i) {
            int c = state[static_cast<std::size_t>(slot.offset) + i];
            if (c < 0)
                return false;
            total += c;
        }
        if (total != slot.population)
            return false;
    }
    return true;
}

Rate CompiledModel::group_apparent_rate(const StateVector& state, int group, int action) const {
    const auto& slot = layout_.groups().at(static_cast<std::size_t>(group));
    const auto& comp = components_[static_cast<std::size_t>(group_component_[static_cast<std::size_t>(group)])];
    Rate total;
    if (action < 0)
        return total;
    for (std::size_t u = 0; u < slot.states.size(); ++u) {
        int count = state[static_cast<std::size_t>(slot.offset) + u];
        if (count > 0)
            total += comp.apparent[u][static_cast<std::size_t>(action)].scaled(count);
    }
    return total;
}

Rate CompiledModel::group_apparent_rate(const StateVector& state, std::string_view group,
                                        std::string_view action) const {
    int g = layout_.group_index(group);
    if (g < 0)
        throw model_error("unknown group label '" + std::string(group) + "'");
    return group_apparent_rate(state, g, action_id(action));
}

std::vector<CompiledModel::Move> CompiledModel::evaluate(int n, const StateVector& state) const {
    const Node& node = nodes_[static_cast<std::size_t>(n)];
    std::vector<Move> moves;
    if (node.kind == EquationNode::Kind::nil)
        return moves;

    if (node.kind == EquationNode::Kind::group) {
        const auto& slot = layout_.groups()[static_cast<std::size_t>(node.group)];
        const auto& comp = components_[static_cast<std::size_t>(group_component_[static_cast<std::size_t>(node.group)])];
        for (std::size_t u = 0; u < slot.states.size(); ++u) {
            int count = state[static_cast<std::size_t>(slot.offset) + u];
            if (count <= 0)
                continue;
            for (const auto& t : comp.out[u]) {
                Move m{t.action, t.rate.scaled(count), {}};
                if (t.target != static_cast<int>(u)) {
                    m.delta.emplace_back(slot.offset + static_cast<int>(u), -1);
                    m.delta.emplace_back(slot.offset + t.target, +1);
                }
                moves.push_back(std::move(m));
            }
        }
        return moves;
    }

    std::vector<Move> left = evaluate(node.left, state);
    std::vector<Move> right = evaluate(node.right, state);
    const std::size_t n_actions = actions_.size();
    std::vector<Rate> left_total(n_actions), right_total(n_actions);
    for (const auto& m : left)
        if (node.coop[static_cast<std::size_t>(m.action)])
            left_total[static_cast<std::size_t>(m.action)] += m.rate;
    for (const auto& m : right)
        if (node.coop[static_cast<std::size_t>(m.action)])
            right_total[static_cast<std::size_t>(m.action)] += m.rate;

    // Independent moves from either side pass through unchanged.
    for (auto* side : {&left, &right})
        for (auto& m : *side)
            if (!node.coop[static_cast<std::size_t>(m.action)])
                moves.push_back(std::move(m));

    for (const auto& l : left) {
        auto a = static_cast<std::size_t>(l.action);
        if (!node.coop[a])
            continue;
        const Rate& rl = left_total[a];
        const Rate& rr = right_total[a];
        if (rl.is_zero() || rr.is_zero())
            continue;
        Rate shared = min(rl, rr);
        for (const auto& r : right) {
            if (r.action != l.action)
                continue;
            Rate rate = shared.scaled(fraction(l.rate, rl) * fraction(r.rate, rr));
            if (rate.is_zero())
                continue;
            Move m{l.action, rate, l.delta};
            m.delta.insert(m.delta.end(), r.delta.begin(), r.delta.end());
            moves.push_back(std::move(m));
        }
    }
    return moves;
}

std::vector<Successor> CompiledModel::successors(const StateVector& state) const {
    std::vector<Move> moves = evaluate(root_, state);
    std::vector<std::pair<Successor, Rate>> raw;
    raw.reserve(moves.size());
    for (auto& m : moves) {
        if (m.rate.is_zero())
            continue;
        Successor s;
        s.action = m.action;
        s.target = state;
        for (const auto& [coord, d] : m.delta)
            s.target[static_cast<std::size_t>(coord)] += d;
        raw.emplace_back(std::move(s), m.rate);
    }
    std::stable_sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
        if (a.first.action != b.first.action)
            return a.first.action < b.first.action;
        return a.first.target < b.first.target;
    });

    std::vector<Successor> out;
    for (std::size_t i = 0; i < raw.size();) {
        std::size_t j = i;
        Rate total;
        while (j < raw.size() && raw[j].first.action == raw[i].first.action &&
               raw[j].first.target == raw[i].first.target)
            total += raw[j++].second;
        if (total.is_passive() && !total.is_zero())
            throw model_error("action '" + actions_[static_cast<std::size_t>(raw[i].first.action)] +
                              "' is still passive at the top level of the model");
        if (!total.is_zero()) {
            Successor s = std::move(raw[i].first);
            s.rate = total.value();
            out.push_back(std::move(s));
        }
        i = j;
    }
    return out;
}

std::vector<Successor> successors(const GroupedModel& model, const StateVector& state) {
    return CompiledModel(model).successors(state);
}

} // namespace pepa
