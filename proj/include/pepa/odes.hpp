#pragma once

#include "pepa/ctmc.hpp"
#include "pepa/kernels.hpp"
#include "pepa/semantics.hpp"

#include <optional>
#include <vector>

namespace pepa {

// dp/dt = A p. Entry A(S, S') is the coefficient of P(S') in the equation for
// P(S): influx off the diagonal, efflux (negated) on it.
struct OdeSystem {
    int dimension = 0;
    CsrMatrix rates;
    std::vector<StateVector> labels;
    StateLayout layout;

    double max_column_sum_error() const;
};

struct Distribution {
    std::vector<double> probs;
    std::optional<double> time; // empty for a steady-state distribution
};

// Assembles the in/out flux of every state from the labelled transitions,
// skipping self-loops. The result equals the transposed generator.
OdeSystem build_marginal_odes(const Ctmc& ctmc);

} // namespace pepa
