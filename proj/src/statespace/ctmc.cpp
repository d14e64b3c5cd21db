#include "pepa/ctmc.hpp"
#include "pepa/error.hpp"
#include "pepa/log.hpp"

#include <boost/container_hash/hash.hpp>

#include <algorithm>
#include <iomanip>
#include <ostream>

namespace pepa {

std::size_t StateHash::operator()(const StateVector& s) const noexcept {
    return boost::hash_range(s.begin(), s.end());
}

int Ctmc::index_of(const StateVector& state) const {
    auto it = std::find(states.begin(), states.end(), state);
    return it == states.end() ? -1 : static_cast<int>(it - states.begin());
}

CsrMatrix Ctmc::generator() const {
    const int n = static_cast<int>(states.size());
    std::vector<CsrMatrix::Triplet> entries;
    entries.reserve(transitions.size() + states.size());
    std::vector<double> exit(states.size(), 0.0);
    for (const auto& t : transitions) {
        if (t.source == t.target)
            continue;
        entries.emplace_back(t.source, t.target, t.rate);
        exit[static_cast<std::size_t>(t.source)] += t.rate;
    }
    for (int i = 0; i < n; ++i)
        entries.emplace_back(i, i, -exit[static_cast<std::size_t>(i)]);
    return CsrMatrix::from_triplets(n, n, std::move(entries));
}

double Ctmc::max_exit_rate() const {
    std::vector<double> exit(states.size(), 0.0);
    for (const auto& t : transitions)
        if (t.source != t.target)
            exit[static_cast<std::size_t>(t.source)] += t.rate;
    return exit.empty() ? 0.0 : *std::max_element(exit.begin(), exit.end());
}

Ctmc generate_ctmc(const CompiledModel& model, const StateVector& initial,
                   const GenerationOptions& options) {
    if (!model.is_valid(initial))
        throw model_error("initial state " + format_state(initial) +
                          " does not match the model's group populations");
    Ctmc ctmc;
    ctmc.layout = model.layout();
    ctmc.actions = model.actions();
    ctmc.initial = 0;

    std::unordered_map<StateVector, int, StateHash> index;
    auto admit = [&](const StateVector& s) {
        auto [it, fresh] = index.emplace(s, static_cast<int>(ctmc.states.size()));
        if (fresh) {
            if (ctmc.states.size() >= options.state_cap)
                throw Error(ErrorKind::state_cap, "state space exceeds the cap of " +
                                                      std::to_string(options.state_cap) + " states");
            ctmc.states.push_back(s);
        }
        return it->second;
    };
    admit(initial);

    std::size_t level_begin = 0;
    while (level_begin < ctmc.states.size()) {
        std::size_t level_end = ctmc.states.size();
        std::vector<StateVector> frontier(ctmc.states.begin() + static_cast<long>(level_begin),
                                          ctmc.states.begin() + static_cast<long>(level_end));
        auto expanded = options.parallel ? expand_parallel(model, frontier)
                                         : expand_serial(model, frontier);
        for (std::size_t i = 0; i < expanded.size(); ++i) {
            int source = static_cast<int>(level_begin + i);
            for (const auto& s : expanded[i])
                ctmc.transitions.push_back({source, admit(s.target), s.action, s.rate});
        }
        log::debug("generated level ending at ", level_end, " states");
        level_begin = level_end;
    }
    log::info("generated CTMC with ", ctmc.states.size(), " states and ", ctmc.transitions.size(),
              " transitions");
    return ctmc;
}

Ctmc generate_ctmc(const GroupedModel& model, const GenerationOptions& options) {
    CompiledModel compiled(model);
    return generate_ctmc(compiled, compiled.initial_state(), options);
}

nlohmann::json to_json(const Ctmc& ctmc) {
    nlohmann::json layout = nlohmann::json::array();
    for (const auto& g : ctmc.layout.groups())
        layout.push_back({{"group", g.label}, {"component", g.component}, {"states", g.states}});
    nlohmann::json transitions = nlohmann::json::array();
    for (const auto& t : ctmc.transitions)
        transitions.push_back({{"source", t.source},
                               {"target", t.target},
                               {"action", ctmc.actions[static_cast<std::size_t>(t.action)]},
                               {"rate", t.rate}});
    return {{"layout", layout},
            {"actions", ctmc.actions},
            {"initial", ctmc.initial},
            {"states", ctmc.states},
            {"transitions", transitions}};
}

void write_matrix_market(std::ostream& out, const CsrMatrix& matrix) {
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << matrix.rows << ' ' << matrix.cols << ' ' << matrix.nonzeros() << '\n';
    out << std::setprecision(17);
    for (int r = 0; r < matrix.rows; ++r)
        for (int k = matrix.row_ptr[static_cast<std::size_t>(r)];
             k < matrix.row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
            out << r + 1 << ' ' << matrix.col[static_cast<std::size_t>(k)] + 1 << ' '
                << matrix.val[static_cast<std::size_t>(k)] << '\n';
}

} // namespace pepa
