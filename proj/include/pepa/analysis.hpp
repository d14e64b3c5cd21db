#pragma once

#include "pepa/model.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pepa {

using GroupSet = std::set<std::string>;

struct GroupPartition {
    GroupSet small;
    GroupSet large;

    bool is_small(const std::string& label) const { return small.count(label) > 0; }
    bool is_large(const std::string& label) const { return large.count(label) > 0; }

    friend bool operator==(const GroupPartition&, const GroupPartition&) = default;
};

struct ActionClassification {
    ActionSet large_only;
    ActionSet small_only;
    ActionSet shared;

    friend bool operator==(const ActionClassification&, const ActionClassification&) = default;
};

struct ConditionViolation {
    std::string group;
    std::string action;
    std::string state;

    friend bool operator==(const ConditionViolation&, const ConditionViolation&) = default;
};

struct ConditionReport {
    bool satisfied = true;
    std::vector<ConditionViolation> violations;
};

// `enabling` only inspects large-group states that offer the action, which is
// what the client-server example needs. `strict` demands a passive offer from
// every local state of the large group.
enum class ConditionReading { enabling, strict };

// Annotations win; otherwise a group is large when its population exceeds the
// threshold. Without a threshold, unannotated groups are small.
GroupPartition partition_groups(const GroupedModel& model,
                                std::optional<int> threshold_override = std::nullopt);
void validate_partition(const GroupedModel& model, const GroupPartition& partition);

GroupSet group_labels(const GroupedModel& model);
// Union of the cooperation sets on the path from the root to H.
ActionSet group_interface(const GroupedModel& model, const std::string& H);
ActionSet enabled_actions(const GroupedModel& model, const std::string& H);
GroupSet coop_partners(const GroupedModel& model, const std::string& H, const std::string& action);

ActionClassification classify(const GroupedModel& model, const GroupPartition& partition);

ConditionReport check_aggregation_condition(const GroupedModel& model,
                                            const GroupPartition& partition,
                                            ConditionReading reading = ConditionReading::enabling);

// Large groups become Nil, then Nil is eliminated bottom-up.
GroupedModel reduce(const GroupedModel& model, const GroupPartition& partition);

} // namespace pepa
