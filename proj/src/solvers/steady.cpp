#include "pepa/solvers.hpp"
#include "pepa/error.hpp"
#include "pepa/log.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace pepa {

namespace {

// Strongly connected components of the positive off-diagonal pattern, by an
// iterative Tarjan walk. Returns the component id of every state.
std::vector<int> strong_components(const CsrMatrix& Q, int& count) {
    const int n = Q.rows;
    std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0),
        comp(static_cast<std::size_t>(n), -1);
    std::vector<int> stack, call;
    std::vector<int> edge(static_cast<std::size_t>(n), 0);
    std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
    int next = 0;
    count = 0;
    auto at = [](std::vector<int>& v, int i) -> int& { return v[static_cast<std::size_t>(i)]; };

    for (int root = 0; root < n; ++root) {
        if (at(index, root) >= 0)
            continue;
        call.push_back(root);
        at(index, root) = at(low, root) = next++;
        at(edge, root) = Q.row_ptr[static_cast<std::size_t>(root)];
        stack.push_back(root);
        on_stack[static_cast<std::size_t>(root)] = true;
        while (!call.empty()) {
            int v = call.back();
            int& k = at(edge, v);
            if (k < Q.row_ptr[static_cast<std::size_t>(v) + 1]) {
                int w = Q.col[static_cast<std::size_t>(k)];
                double rate = Q.val[static_cast<std::size_t>(k)];
                ++k;
                if (w == v || !(rate > 0.0))
                    continue;
                if (at(index, w) < 0) {
                    at(index, w) = at(low, w) = next++;
                    at(edge, w) = Q.row_ptr[static_cast<std::size_t>(w)];
                    stack.push_back(w);
                    on_stack[static_cast<std::size_t>(w)] = true;
                    call.push_back(w);
                } else if (on_stack[static_cast<std::size_t>(w)]) {
                    at(low, v) = std::min(at(low, v), at(index, w));
                }
                continue;
            }
            call.pop_back();
            if (!call.empty())
                at(low, call.back()) = std::min(at(low, call.back()), at(low, v));
            if (at(low, v) == at(index, v)) {
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[static_cast<std::size_t>(w)] = false;
                    at(comp, w) = count;
                } while (w != v);
                ++count;
            }
        }
    }
    return comp;
}

std::string label_of(const std::vector<StateVector>& labels, int s) {
    if (static_cast<std::size_t>(s) < labels.size())
        return format_state(labels[static_cast<std::size_t>(s)]);
    return "#" + std::to_string(s);
}

Distribution solve_direct(const CsrMatrix& Q, const SteadyStateOptions& options) {
    const int n = Q.rows;
    using SpMat = Eigen::SparseMatrix<double>;
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(Q.nonzeros() + static_cast<std::size_t>(n));
    // pi Q = 0 as Q^T pi = 0, with the last equation replaced by sum(pi) = 1.
    for (int i = 0; i < n; ++i)
        for (int k = Q.row_ptr[static_cast<std::size_t>(i)]; k < Q.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
            int j = Q.col[static_cast<std::size_t>(k)];
            if (j != n - 1)
                entries.emplace_back(j, i, Q.val[static_cast<std::size_t>(k)]);
        }
    for (int i = 0; i < n; ++i)
        entries.emplace_back(n - 1, i, 1.0);
    SpMat A(n, n);
    A.setFromTriplets(entries.begin(), entries.end());
    A.makeCompressed();

    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
        throw Error(ErrorKind::solver, "sparse LU factorization failed: " + lu.lastErrorMessage());
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success)
        throw Error(ErrorKind::solver, "sparse LU solve failed");

    Distribution dist;
    dist.probs.assign(x.data(), x.data() + n);
    clamp_and_normalize(dist.probs);
    for (int round = 0; round < 3 && steady_residual(Q, dist.probs) > options.tolerance; ++round) {
        Eigen::Map<Eigen::VectorXd> p(dist.probs.data(), n);
        Eigen::VectorXd r = b - A * p;
        Eigen::VectorXd d = lu.solve(r);
        p += d;
        clamp_and_normalize(dist.probs);
    }
    return dist;
}

Distribution solve_iterative(const CsrMatrix& Q, const SteadyStateOptions& options) {
    const int n = Q.rows;
    double lambda = 0.0;
    for (int i = 0; i < n; ++i)
        lambda = std::max(lambda, -Q.at(i, i));
    lambda *= 1.05;

    // P^T = I + Q^T / lambda, so that one step is x <- P^T x.
    CsrMatrix PT = Q.transpose();
    for (int r = 0; r < PT.rows; ++r)
        for (int k = PT.row_ptr[static_cast<std::size_t>(r)]; k < PT.row_ptr[static_cast<std::size_t>(r) + 1]; ++k) {
            auto& v = PT.val[static_cast<std::size_t>(k)];
            v /= lambda;
            if (PT.col[static_cast<std::size_t>(k)] == r)
                v += 1.0;
        }

    std::vector<double> x(static_cast<std::size_t>(n), 1.0 / n), y;
    std::vector<double> prev1, prev2;
    double residual = steady_residual(Q, x);
    std::size_t it = 0;
    for (; it < options.max_iterations && residual > options.tolerance; ++it) {
        spmv_parallel(PT, x, y);
        prev2 = std::move(prev1);
        prev1 = std::move(x);
        x = std::move(y);
        y = {};
        if (it % 50 == 49 && !prev2.empty()) {
            // Componentwise Aitken delta-squared; kept only if it helps.
            std::vector<double> acc(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) {
                double d1 = x[i] - prev1[i];
                double d2 = d1 - (prev1[i] - prev2[i]);
                acc[i] = std::abs(d2) > 1e-300 ? x[i] - d1 * d1 / d2 : x[i];
                if (!(acc[i] >= 0.0))
                    acc[i] = x[i];
            }
            clamp_and_normalize(acc);
            double r_acc = steady_residual(Q, acc);
            double r_x = steady_residual(Q, x);
            if (r_acc < r_x)
                x = std::move(acc);
        }
        if (it % 10 == 9)
            residual = steady_residual(Q, x);
    }
    residual = steady_residual(Q, x);
    if (residual > options.tolerance)
        throw Error(ErrorKind::solver, "power iteration did not converge after " + std::to_string(it) +
                                           " iterations (residual " + std::to_string(residual) + ")");
    log::info("power iteration converged after ", it, " iterations");
    Distribution dist;
    dist.probs = std::move(x);
    clamp_and_normalize(dist.probs);
    return dist;
}

} // namespace

void require_irreducible(const CsrMatrix& Q, const std::vector<StateVector>& labels) {
    int count = 0;
    auto comp = strong_components(Q, count);
    if (count <= 1)
        return;
    // A closed class other than the one holding state 0 traps probability.
    std::vector<bool> leaves(static_cast<std::size_t>(count), false);
    for (int i = 0; i < Q.rows; ++i)
        for (int k = Q.row_ptr[static_cast<std::size_t>(i)]; k < Q.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
            int j = Q.col[static_cast<std::size_t>(k)];
            if (Q.val[static_cast<std::size_t>(k)] > 0.0 && comp[static_cast<std::size_t>(i)] != comp[static_cast<std::size_t>(j)])
                leaves[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])] = true;
        }
    int home = comp[0];
    int culprit = -1;
    for (int c = 0; c < count && culprit < 0; ++c)
        if (c != home && !leaves[static_cast<std::size_t>(c)])
            culprit = c;
    if (culprit < 0)
        culprit = home == 0 ? 1 : 0;
    int size = 0, witness = -1;
    for (int i = 0; i < Q.rows; ++i)
        if (comp[static_cast<std::size_t>(i)] == culprit) {
            ++size;
            if (witness < 0)
                witness = i;
        }
    throw Error(ErrorKind::solver,
                "chain is reducible: " + std::to_string(count) +
                    " strongly connected components; the component of state " +
                    label_of(labels, witness) + " (" + std::to_string(size) +
                    " states) and state " + label_of(labels, 0) + " are not mutually reachable");
}

double steady_residual(const CsrMatrix& Q, const std::vector<double>& pi) {
    std::vector<double> flow(static_cast<std::size_t>(Q.cols), 0.0);
    for (int i = 0; i < Q.rows; ++i)
        for (int k = Q.row_ptr[static_cast<std::size_t>(i)]; k < Q.row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
            flow[static_cast<std::size_t>(Q.col[static_cast<std::size_t>(k)])] +=
                pi[static_cast<std::size_t>(i)] * Q.val[static_cast<std::size_t>(k)];
    double worst = 0.0;
    for (double f : flow)
        worst = std::max(worst, std::abs(f));
    return worst;
}

Distribution steady_state(const CsrMatrix& Q, const std::vector<StateVector>& labels,
                          const SteadyStateOptions& options) {
    if (Q.rows == 0)
        throw Error(ErrorKind::solver, "empty chain");
    if (Q.rows == 1)
        return Distribution{{1.0}, std::nullopt};
    require_irreducible(Q, labels);
    Distribution dist = static_cast<std::size_t>(Q.rows) <= options.direct_limit
                            ? solve_direct(Q, options)
                            : solve_iterative(Q, options);
    double residual = steady_residual(Q, dist.probs);
    if (residual > options.tolerance)
        throw Error(ErrorKind::solver, "steady-state residual " + std::to_string(residual) +
                                           " exceeds tolerance");
    return dist;
}

Distribution steady_state(const Ctmc& ctmc, const SteadyStateOptions& options) {
    return steady_state(ctmc.generator(), ctmc.states, options);
}

Distribution steady_state(const OdeSystem& odes, const SteadyStateOptions& options) {
    return steady_state(odes.rates.transpose(), odes.labels, options);
}

void clamp_and_normalize(std::vector<double>& probs) {
    double clamped = 0.0;
    double total = 0.0;
    for (double& p : probs) {
        if (p < 0.0 || !std::isfinite(p)) {
            clamped += std::isfinite(p) ? -p : 0.0;
            p = 0.0;
        }
        total += p;
    }
    if (clamped > 1e-9)
        log::warn("clamped negative probability mass ", clamped);
    if (!(total > 0.0))
        throw Error(ErrorKind::solver, "distribution has no positive mass");
    for (double& p : probs)
        p /= total;
}

double marginal_measure(const Distribution& dist, const std::vector<StateVector>& labels,
                        const Predicate& predicate) {
    if (labels.size() != dist.probs.size())
        throw Error(ErrorKind::usage, "labels do not cover the distribution");
    double sum = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (predicate(labels[i]))
            sum += dist.probs[i];
    return sum;
}

double boundary_probability(const Distribution& full, const BoundaryReport& boundary) {
    double sum = 0.0;
    for (std::size_t i = 0; i < full.probs.size(); ++i)
        if (boundary.is_boundary(static_cast<int>(i)))
            sum += full.probs[i];
    return sum;
}

Distribution sum_over_chains(const Distribution& full, const SubChainPartition& chains) {
    Distribution out;
    out.time = full.time;
    out.probs.assign(chains.size(), 0.0);
    for (std::size_t s = 0; s < full.probs.size(); ++s)
        out.probs[static_cast<std::size_t>(chains.chain_of[s])] += full.probs[s];
    return out;
}

void write_distribution_csv(std::ostream& out, const Distribution& dist,
                            const std::vector<StateVector>& labels, const StateLayout& layout) {
    for (const auto& name : layout.coordinate_names())
        out << name << ',';
    out << "probability\n";
    out.precision(17);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (int c : labels[i])
            out << c << ',';
        out << dist.probs[i] << '\n';
    }
}

nlohmann::json distribution_json(const Distribution& dist, const std::vector<StateVector>& labels,
                                 const StateLayout& layout) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < labels.size(); ++i)
        rows.push_back({{"state", labels[i]}, {"probability", dist.probs[i]}});
    nlohmann::json time = dist.time ? nlohmann::json(*dist.time) : nlohmann::json("steady");
    return {{"coordinates", layout.coordinate_names()}, {"time", time}, {"distribution", rows}};
}

void write_trajectory_csv(std::ostream& out, const std::vector<Distribution>& trajectory,
                          const std::vector<StateVector>& labels) {
    out << "time,state,probability\n";
    out.precision(17);
    for (const auto& d : trajectory)
        for (std::size_t i = 0; i < labels.size(); ++i)
            out << (d.time ? *d.time : 0.0) << ",\"" << format_state(labels[i]) << "\"," << d.probs[i]
                << '\n';
}

} // namespace pepa
