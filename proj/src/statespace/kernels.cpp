#include "pepa/kernels.hpp"
#include "pepa/error.hpp"

#include <algorithm>
#include <exception>

namespace pepa {

CsrMatrix CsrMatrix::from_triplets(int rows, int cols, std::vector<Triplet> entries) {
    std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    CsrMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.row_ptr.assign(static_cast<std::size_t>(rows) + 1, 0);
    for (std::size_t i = 0; i < entries.size();) {
        auto [r, c, v] = entries[i];
        if (r < 0 || r >= rows || c < 0 || c >= cols)
            throw Error(ErrorKind::solver, "matrix entry out of range");
        std::size_t j = i + 1;
        while (j < entries.size() && std::get<0>(entries[j]) == r && std::get<1>(entries[j]) == c)
            v += std::get<2>(entries[j++]);
        m.col.push_back(c);
        m.val.push_back(v);
        ++m.row_ptr[static_cast<std::size_t>(r) + 1];
        i = j;
    }
    for (int r = 0; r < rows; ++r)
        m.row_ptr[static_cast<std::size_t>(r) + 1] += m.row_ptr[static_cast<std::size_t>(r)];
    return m;
}

double CsrMatrix::at(int row, int column) const {
    auto begin = col.begin() + row_ptr[static_cast<std::size_t>(row)];
    auto end = col.begin() + row_ptr[static_cast<std::size_t>(row) + 1];
    auto it = std::lower_bound(begin, end, column);
    return it != end && *it == column ? val[static_cast<std::size_t>(it - col.begin())] : 0.0;
}

CsrMatrix CsrMatrix::transpose() const {
    std::vector<Triplet> entries;
    entries.reserve(val.size());
    for (int r = 0; r < rows; ++r)
        for (int k = row_ptr[static_cast<std::size_t>(r)]; k < row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
            entries.emplace_back(col[static_cast<std::size_t>(k)], r, val[static_cast<std::size_t>(k)]);
    return from_triplets(cols, rows, std::move(entries));
}

namespace {

inline double row_dot(const CsrMatrix& A, int r, const std::vector<double>& x) {
    double sum = 0.0;
    for (int k = A.row_ptr[static_cast<std::size_t>(r)]; k < A.row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
        sum += A.val[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(A.col[static_cast<std::size_t>(k)])];
    return sum;
}

void check_shapes(const CsrMatrix& A, const std::vector<double>& x, std::vector<double>& y) {
    if (static_cast<int>(x.size()) != A.cols)
        throw Error(ErrorKind::solver, "spmv: vector length does not match matrix columns");
    y.resize(static_cast<std::size_t>(A.rows));
}

} // namespace

void spmv_serial(const CsrMatrix& A, const std::vector<double>& x, std::vector<double>& y) {
    check_shapes(A, x, y);
    for (int r = 0; r < A.rows; ++r)
        y[static_cast<std::size_t>(r)] = row_dot(A, r, x);
}

void spmv_parallel(const CsrMatrix& A, const std::vector<double>& x, std::vector<double>& y) {
    check_shapes(A, x, y);
#pragma omp parallel for schedule(static)
    for (int r = 0; r < A.rows; ++r)
        y[static_cast<std::size_t>(r)] = row_dot(A, r, x);
}

std::vector<std::vector<Successor>> expand_serial(const CompiledModel& model,
                                                  const std::vector<StateVector>& frontier) {
    std::vector<std::vector<Successor>> out(frontier.size());
    for (std::size_t i = 0; i < frontier.size(); ++i)
        out[i] = model.successors(frontier[i]);
    return out;
}

std::vector<std::vector<Successor>> expand_parallel(const CompiledModel& model,
                                                    const std::vector<StateVector>& frontier) {
    std::vector<std::vector<Successor>> out(frontier.size());
    std::exception_ptr failure;
    const auto n = static_cast<long>(frontier.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (long i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = model.successors(frontier[static_cast<std::size_t>(i)]);
        } catch (...) {
#pragma omp critical(pepa_expand_failure)
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

} // namespace pepa
