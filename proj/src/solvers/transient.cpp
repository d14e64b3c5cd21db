#include "pepa/error.hpp"
#include "pepa/solvers.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>

namespace pepa {

namespace {

namespace odeint = boost::numeric::odeint;
using StateType = std::vector<double>;
using SpMat = Eigen::SparseMatrix<double>;

double max_rate(const CsrMatrix& A) {
    double worst = 0.0;
    for (int i = 0; i < A.rows; ++i)
        worst = std::max(worst, std::abs(A.at(i, i)));
    return worst;
}

SpMat to_eigen(const CsrMatrix& A) {
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(A.nonzeros());
    for (int r = 0; r < A.rows; ++r)
        for (int k = A.row_ptr[static_cast<std::size_t>(r)]; k < A.row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
            entries.emplace_back(r, A.col[static_cast<std::size_t>(k)], A.val[static_cast<std::size_t>(k)]);
    SpMat m(A.rows, A.cols);
    m.setFromTriplets(entries.begin(), entries.end());
    return m;
}

Distribution snapshot(const StateType& x, double t) {
    Distribution d;
    d.probs = x;
    d.time = t;
    clamp_and_normalize(d.probs);
    return d;
}

std::vector<Distribution> integrate_rk45(const OdeSystem& odes, StateType x,
                                         const std::vector<double>& times,
                                         const TransientOptions& options) {
    const CsrMatrix& A = odes.rates;
    auto system = [&A](const StateType& p, StateType& dpdt, double) { spmv_serial(A, p, dpdt); };

    // integrate_times reports the state at its first time point, which is
    // where integration starts; begin at zero and drop it if not requested.
    std::vector<double> grid;
    bool prepend = times.front() > 0.0;
    if (prepend)
        grid.push_back(0.0);
    grid.insert(grid.end(), times.begin(), times.end());

    double rate = max_rate(A);
    double dt = rate > 0.0 ? 0.1 / rate : 1.0;
    std::vector<Distribution> out;
    double last_time = grid.front();
    auto observer = [&](const StateType& p, double t) {
        last_time = t;
        out.push_back(snapshot(p, t));
    };
    try {
        auto stepper = odeint::make_dense_output(options.abs_tol, options.rel_tol,
                                                 odeint::runge_kutta_dopri5<StateType>());
        odeint::integrate_times(stepper, system, x, grid.begin(), grid.end(), dt, observer,
                                odeint::max_step_checker(100'000'000));
    } catch (const std::exception& e) {
        throw Error(ErrorKind::solver, "integration failed after t=" + std::to_string(last_time) +
                                           ": " + e.what());
    }
    if (prepend)
        out.erase(out.begin());
    return out;
}

std::vector<Distribution> integrate_trapezoid(const OdeSystem& odes, StateType x,
                                              const std::vector<double>& times) {
    const int n = odes.dimension;
    double rate = max_rate(odes.rates);
    std::vector<Distribution> out;
    if (rate == 0.0) {
        for (double t : times)
            out.push_back(snapshot(x, t));
        return out;
    }
    const double h_max = 0.1 / rate;
    SpMat A = to_eigen(odes.rates);
    SpMat I(n, n);
    I.setIdentity();

    Eigen::SparseLU<SpMat> lu;
    SpMat forward;
    double cached_h = -1.0;
    Eigen::VectorXd p = Eigen::Map<Eigen::VectorXd>(x.data(), n);
    double now = 0.0;
    for (double target : times) {
        double span = target - now;
        if (span > 0.0) {
            auto steps = static_cast<long>(std::ceil(span / h_max));
            double h = span / static_cast<double>(steps);
            if (h != cached_h) {
                SpMat backward = I - (h / 2.0) * A;
                forward = I + (h / 2.0) * A;
                lu.compute(backward);
                if (lu.info() != Eigen::Success)
                    throw Error(ErrorKind::solver, "trapezoid factorization failed at t=" + std::to_string(now));
                cached_h = h;
            }
            for (long s = 0; s < steps; ++s) {
                Eigen::VectorXd rhs = forward * p;
                p = lu.solve(rhs);
            }
            now = target;
        }
        StateType copy(p.data(), p.data() + n);
        out.push_back(snapshot(copy, target));
    }
    return out;
}

} // namespace

std::vector<Distribution> transient(const OdeSystem& odes, const Distribution& p0,
                                    const std::vector<double>& times, const TransientOptions& options) {
    if (static_cast<int>(p0.probs.size()) != odes.dimension)
        throw Error(ErrorKind::usage, "initial distribution has the wrong length");
    if (times.empty())
        return {};
    if (times.front() < 0.0 || !std::is_sorted(times.begin(), times.end()) ||
        std::adjacent_find(times.begin(), times.end()) != times.end())
        throw Error(ErrorKind::usage, "output times must be nonnegative and strictly ascending");
    StateType x = p0.probs;
    if (options.method == TransientOptions::Method::trapezoid)
        return integrate_trapezoid(odes, std::move(x), times);
    return integrate_rk45(odes, std::move(x), times, options);
}

} // namespace pepa
