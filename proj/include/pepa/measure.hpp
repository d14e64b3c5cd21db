#pragma once

#include "pepa/semantics.hpp"

#include <memory>
#include <string>
#include <string_view>

namespace pepa {

// Integer expression over count names, e.g. `S_broken == 0` or
// `Servers.S_idle + Servers.S_log >= 2 && !(S_broken > 3)`.
class Predicate {
public:
    static Predicate compile(std::string_view text, const StateLayout& layout);

    bool operator()(const StateVector& state) const;
    const std::string& text() const { return text_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

} // namespace pepa
