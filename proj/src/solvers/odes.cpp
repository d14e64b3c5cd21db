#include "pepa/odes.hpp"

#include <algorithm>
#include <cmath>

namespace pepa {

double OdeSystem::max_column_sum_error() const {
    std::vector<double> sum(static_cast<std::size_t>(dimension), 0.0);
    std::vector<double> scale(static_cast<std::size_t>(dimension), 0.0);
    for (int r = 0; r < rates.rows; ++r)
        for (int k = rates.row_ptr[static_cast<std::size_t>(r)]; k < rates.row_ptr[static_cast<std::size_t>(r) + 1]; ++k) {
            auto c = static_cast<std::size_t>(rates.col[static_cast<std::size_t>(k)]);
            sum[c] += rates.val[static_cast<std::size_t>(k)];
            scale[c] += std::abs(rates.val[static_cast<std::size_t>(k)]);
        }
    double worst = 0.0;
    for (std::size_t c = 0; c < sum.size(); ++c)
        worst = std::max(worst, std::abs(sum[c]) / std::max(scale[c], 1.0));
    return worst;
}

OdeSystem build_marginal_odes(const Ctmc& ctmc) {
    const int n = static_cast<int>(ctmc.size());
    std::vector<CsrMatrix::Triplet> entries;
    entries.reserve(2 * ctmc.transitions.size());
    // For every transition S -> S' at rate r: out(S) gains -r * P(S) and
    // in(S') gains +r * P(S).
    for (const auto& t : ctmc.transitions) {
        if (t.source == t.target)
            continue;
        entries.emplace_back(t.source, t.source, -t.rate);
        entries.emplace_back(t.target, t.source, t.rate);
    }
    for (int i = 0; i < n; ++i)
        entries.emplace_back(i, i, 0.0);

    OdeSystem odes;
    odes.dimension = n;
    odes.rates = CsrMatrix::from_triplets(n, n, std::move(entries));
    odes.labels = ctmc.states;
    odes.layout = ctmc.layout;
    return odes;
}

} // namespace pepa
