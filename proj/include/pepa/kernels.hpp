#pragma once

#include "pepa/semantics.hpp"

#include <tuple>
#include <vector>

namespace pepa {

// Compressed sparse row matrix with sorted, duplicate-free columns per row.
struct CsrMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<int> row_ptr{0};
    std::vector<int> col;
    std::vector<double> val;

    using Triplet = std::tuple<int, int, double>;
    // Duplicate (row, col) entries are summed.
    static CsrMatrix from_triplets(int rows, int cols, std::vector<Triplet> entries);

    double at(int row, int column) const;
    CsrMatrix transpose() const;
    std::size_t nonzeros() const { return val.size(); }
};

// y = A x. The serial version is the reference for the OpenMP one; both
// produce bit-identical results because each row is summed in column order.
void spmv_serial(const CsrMatrix& A, const std::vector<double>& x, std::vector<double>& y);
void spmv_parallel(const CsrMatrix& A, const std::vector<double>& x, std::vector<double>& y);

// Successors of every frontier state, in frontier order.
std::vector<std::vector<Successor>> expand_serial(const CompiledModel& model,
                                                  const std::vector<StateVector>& frontier);
std::vector<std::vector<Successor>> expand_parallel(const CompiledModel& model,
                                                    const std::vector<StateVector>& frontier);

} // namespace pepa
