#pragma once

#include "pepa/ctmc.hpp"
#include "pepa/measure.hpp"
#include "pepa/odes.hpp"
#include "pepa/verify.hpp"

#include <iosfwd>
#include <vector>

namespace pepa {

struct SteadyStateOptions {
    // Chains up to this size use a sparse LU factorization; larger ones use
    // uniformized power iteration with Aitken extrapolation.
    std::size_t direct_limit = 20'000;
    double tolerance = 1e-10;
    std::size_t max_iterations = 2'000'000;
};

// Throws a solver error naming a closed class that cannot reach the rest
// when the generator is not irreducible.
void require_irreducible(const CsrMatrix& generator, const std::vector<StateVector>& labels);

// max_j |(pi Q)_j|
double steady_residual(const CsrMatrix& generator, const std::vector<double>& pi);

Distribution steady_state(const CsrMatrix& generator, const std::vector<StateVector>& labels,
                          const SteadyStateOptions& options = {});
Distribution steady_state(const Ctmc& ctmc, const SteadyStateOptions& options = {});
Distribution steady_state(const OdeSystem& odes, const SteadyStateOptions& options = {});

struct TransientOptions {
    enum class Method { rk45, trapezoid };
    Method method = Method::rk45;
    double abs_tol = 1e-8;
    double rel_tol = 1e-6;
};

std::vector<Distribution> transient(const OdeSystem& odes, const Distribution& p0,
                                    const std::vector<double>& times,
                                    const TransientOptions& options = {});

double marginal_measure(const Distribution& dist, const std::vector<StateVector>& labels,
                        const Predicate& predicate);

double boundary_probability(const Distribution& full, const BoundaryReport& boundary);

// Sums a full-chain distribution over sub-chains; entry i belongs to chain i.
Distribution sum_over_chains(const Distribution& full, const SubChainPartition& chains);

// Zeroes negative entries and rescales to total one; warns when the clamped
// mass exceeds 1e-9.
void clamp_and_normalize(std::vector<double>& probs);

void write_distribution_csv(std::ostream& out, const Distribution& dist,
                            const std::vector<StateVector>& labels, const StateLayout& layout);
nlohmann::json distribution_json(const Distribution& dist, const std::vector<StateVector>& labels,
                                 const StateLayout& layout);
void write_trajectory_csv(std::ostream& out, const std::vector<Distribution>& trajectory,
                          const std::vector<StateVector>& labels);

} // namespace pepa
