// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "pepa/analysis.hpp"
#include "pepa/ctmc.hpp"
#include "pepa/error.hpp"
#include "pepa/experiment.hpp"
#include "pepa/parser.hpp"
#include "pepa/rate.hpp"
#include "pepa/semantics.hpp"
#include "pepa/solvers.hpp"
#include "pepa/verify.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back(what);
        }
    }
};

std::string fmt(double v, int digits = 4) {
    std::ostringstream s;
    s << std::setprecision(digits) << v;
    return s.str();
}

double elapsed(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

std::string models_dir() { return PEPA_MODELS_DIR; }

pepa::GroupedModel load(const std::string& name, const pepa::ParameterOverrides& o = {}) {
    return pepa::parse_model_file(models_dir() + "/" + name, o);
}

const nlohmann::json& golden() {
    static const nlohmann::json g = nlohmann::json::parse(pepa::read_text_file(pepa::table1_golden_path()));
    return g;
}

// The full client-server run is shared by several criteria.
struct Table1Run {
    std::vector<pepa::CaseResult> results;
    double seconds = 0.0;
};

const Table1Run& table1_run() {
    static const Table1Run run = [] {
        Table1Run r;
        auto start = std::chrono::steady_clock::now();
        r.results = pepa::run_experiment(pepa::table1_spec(pepa::read_text_file(pepa::table1_model_path())));
        r.seconds = elapsed(start);
        return r;
    }();
    return run;
}

Outcome approximate_column() {
    Outcome out;
    auto spec = pepa::table1_spec(pepa::read_text_file(pepa::table1_model_path()));
    spec.mode = pepa::Mode::approximate;
    auto start = std::chrono::steady_clock::now();
    auto results = pepa::run_experiment(spec);
    double seconds = elapsed(start);
    out.require(seconds < 1.0, "runtime " + fmt(seconds) + " s");
    out.require(results.front().aggregated_states == 21,
                "aggregated states " + std::to_string(results.front().aggregated_states));
    const auto names = golden().at("measures").get<std::vector<std::string>>();
    const double tol = golden().at("tolerance").at("approximate").get<double>();
    for (std::size_t c = 0; c < results.size(); ++c)
        for (std::size_t m = 0; m < names.size(); ++m) {
            double got = *results[c].rows[m].approximate;
            double want = golden().at("cases")[c].at("approximate")[m].get<double>();
            if (c == 0)
                out.require(std::abs(got - want) <= tol, names[m] + " " + fmt(got) + " vs " + fmt(want));
            out.require(got == *results[0].rows[m].approximate,
                        names[m] + " differs between case 1 and case " + std::to_string(c + 1));
        }
    return out;
}

Outcome exact_column() {
    Outcome out;
    const auto& run = table1_run();
    out.require(run.seconds < 60.0, "runtime " + fmt(run.seconds) + " s");
    const auto names = golden().at("measures").get<std::vector<std::string>>();
    const double tol = golden().at("tolerance").at("exact").get<double>();
    for (std::size_t c = 0; c < run.results.size(); ++c) {
        out.require(run.results[c].full_states == 2121,
                    "case " + std::to_string(c + 1) + " full states " + std::to_string(run.results[c].full_states));
        for (std::size_t m = 0; m < names.size(); ++m) {
            double got = *run.results[c].rows[m].exact;
            double want = golden().at("cases")[c].at("exact")[m].get<double>();
            out.require(std::abs(got - want) <= tol,
                        "case " + std::to_string(c + 1) + " " + names[m] + " " + fmt(got) + " vs " + fmt(want));
        }
    }
    return out;
}

Outcome error_trend() {
    Outcome out;
    const auto& results = table1_run().results;
    for (std::size_t m = 0; m < results.front().rows.size(); ++m)
        for (std::size_t c = 1; c < results.size(); ++c) {
            double before = *results[c - 1].rows[m].error_pct;
            double now = *results[c].rows[m].error_pct;
            out.require(now >= before, results[c].rows[m].measure + " error falls from " + fmt(before) + "% to " +
                                           fmt(now) + "% at case " + std::to_string(c + 1));
        }
    return out;
}

Outcome boundary_probability() {
    Outcome out;
    const auto& results = table1_run().results;
    std::vector<double> p;
    for (const auto& r : results)
        p.push_back(*r.boundary_probability);
    out.require(p[0] < 0.01, "case 1 boundary probability " + fmt(p[0]));
    for (std::size_t c = 1; c < p.size(); ++c)
        out.require(p[c] > p[c - 1], "boundary probability not increasing at case " + std::to_string(c + 1));
    const auto& bt = golden().at("boundary_tolerance");
    for (std::size_t c = 0; c < p.size(); ++c) {
        double want = golden().at("cases")[c].at("boundary_probability").get<double>();
        double tol = std::max(bt.at("absolute").get<double>(), bt.at("relative").get<double>() * want);
        out.require(std::abs(p[c] - want) <= tol,
                    "case " + std::to_string(c + 1) + " boundary " + fmt(p[c], 12) + " vs frozen " + fmt(want, 12));
    }
    return out;
}

Outcome oracle_equivalence() {
    Outcome out;
    for (const char* name : {"client_server_small.pepa", "client_server.pepa"}) {
        auto m = load(name);
        auto s = pepa::verify_aggregation(m, pepa::partition_groups(m));
        out.require(s.regular, std::string(name) + " has irregular cross rates");
        out.require(s.diff.matched == s.aggregated_states, std::string(name) + " unmatched chains");
        out.require(s.diff.max_abs_diff <= 1e-12, std::string(name) + " max diff " + fmt(s.diff.max_abs_diff));
    }
    return out;
}

Outcome structure_independence() {
    Outcome out;
    std::vector<pepa::Ctmc> chains;
    for (double n : {2.0, 10.0, 100.0}) {
        auto m = load("client_server.pepa", {{"n_c", n}});
        chains.push_back(pepa::generate_ctmc(pepa::reduce(m, pepa::partition_groups(m))));
    }
    for (std::size_t i = 1; i < chains.size(); ++i) {
        out.require(chains[i].states == chains[0].states, "state sets differ");
        out.require(chains[i].transitions == chains[0].transitions, "transitions or rates differ");
    }
    return out;
}

Outcome cross_rate_regularity() {
    Outcome out;
    int checked = 0;
    std::set<std::string> seen;
    for (const auto& entry : std::filesystem::directory_iterator(models_dir())) {
        if (entry.path().extension() != ".pepa")
            continue;
        auto m = pepa::parse_model_file(entry.path().string());
        auto partition = pepa::partition_groups(m);
        if (!pepa::check_aggregation_condition(m, partition).satisfied)
            continue;
        auto s = pepa::verify_aggregation(m, partition);
        out.require(s.regular, entry.path().filename().string() + " irregular");
        seen.insert(entry.path().filename().string());
        ++checked;
    }
    out.require(checked >= 5, "only " + std::to_string(checked) + " models satisfy the condition");
    for (const char* required : {"client_server.pepa", "client_server_two_types.pepa", "three_small.pepa"})
        out.require(seen.count(required) > 0, std::string(required) + " not checked");
    return out;
}

Outcome state_counts() {
    Outcome out;
    auto text = pepa::read_text_file(pepa::table1_model_path());
    for (int n : {2, 5}) {
        auto t = text;
        t.replace(t.find("S_idle[5]"), 9, "S_idle[" + std::to_string(n) + "]");
        auto m = pepa::parse_model(t);
        auto agg = pepa::generate_ctmc(pepa::reduce(m, pepa::partition_groups(m)));
        std::size_t want = static_cast<std::size_t>((n + 2) * (n + 1) / 2);
        out.require(agg.size() == want, "n_s=" + std::to_string(n) + ": " + std::to_string(agg.size()) +
                                            " aggregated states, expected " + std::to_string(want));
    }
    auto full = pepa::generate_ctmc(load("client_server_small.pepa"));
    out.require(full.size() == 18, "2s/2c full CTMC has " + std::to_string(full.size()) + " states");
    return out;
}

Outcome property_suites() {
    Outcome out;
    std::mt19937 rng(2024);

    // Passive arithmetic.
    std::uniform_real_distribution<double> w(0.0, 10.0);
    for (int i = 0; i < 10000; ++i) {
        double a = w(rng), b = w(rng), r = w(rng) + 0.01;
        auto pa = pepa::Rate::passive(a), pb = pepa::Rate::passive(b);
        bool ok = (pa + pb) == pepa::Rate::passive(a + b) &&
                  pa.scaled(r) == pepa::Rate::passive(a * r) &&
                  pepa::min(pa, pb) == pepa::Rate::passive(std::min(a, b)) &&
                  pepa::min(pepa::Rate::active(r), pa) == pepa::Rate::active(r) &&
                  pepa::min(pepa::Rate::active(r), pepa::Rate::passive(0)).is_zero();
        if (!ok) {
            out.require(false, "passive arithmetic law fails for " + fmt(a) + ", " + fmt(b));
            break;
        }
    }

    // Population conservation along a random walk.
    pepa::CompiledModel compiled(load("client_server.pepa"));
    auto state = compiled.initial_state();
    for (int step = 0; step < 10000; ++step) {
        auto succ = compiled.successors(state);
        std::vector<double> rates;
        for (const auto& s : succ)
            rates.push_back(s.rate);
        std::discrete_distribution<std::size_t> pick(rates.begin(), rates.end());
        state = succ[pick(rng)].target;
        for (const auto& g : compiled.layout().groups()) {
            int total = 0;
            for (std::size_t k = 0; k < g.states.size(); ++k)
                total += state[static_cast<std::size_t>(g.offset) + k];
            if (total != g.population) {
                out.require(false, "population of " + g.label + " changed at step " + std::to_string(step));
                step = 10000;
            }
        }
    }

    // Column sums of the probability ODEs.
    for (const char* name : {"client_server.pepa", "three_small.pepa", "weighted_passive.pepa"}) {
        auto odes = pepa::build_marginal_odes(pepa::generate_ctmc(load(name)));
        out.require(odes.max_column_sum_error() < 1e-12, std::string(name) + " column sums " +
                                                             fmt(odes.max_column_sum_error()));
    }

    // Two-state birth-death process against its closed form.
    auto two = pepa::generate_ctmc(pepa::parse_model("rates { l = 2; m = 3; }\n"
                                                     "A = (birth, l).B; B = (death, m).A;\n"
                                                     "system = G{A[1]};"));
    auto odes = pepa::build_marginal_odes(two);
    pepa::Distribution p0{{0.0, 0.0}, 0.0};
    p0.probs[static_cast<std::size_t>(two.initial)] = 1.0;
    std::vector<double> times{0.01, 0.1, 0.3, 1.0, 3.0};
    auto traj = pepa::transient(odes, p0, times);
    const auto b = static_cast<std::size_t>(two.index_of({0, 1}));
    for (std::size_t i = 0; i < times.size(); ++i) {
        double exact = 0.4 * (1.0 - std::exp(-5.0 * times[i]));
        out.require(std::abs(traj[i].probs[b] - exact) <= 1e-6,
                    "two-state transient off by " + fmt(std::abs(traj[i].probs[b] - exact)));
    }

    // Transient convergence to the steady state.
    auto m = load("client_server_small.pepa", {{"r_b", 0.5}, {"r_f", 0.5}});
    auto agg = pepa::generate_ctmc(pepa::reduce(m, pepa::partition_groups(m)));
    auto pi = pepa::steady_state(agg);
    pepa::Distribution start{std::vector<double>(agg.size(), 0.0), 0.0};
    start.probs[static_cast<std::size_t>(agg.initial)] = 1.0;
    auto late = pepa::transient(pepa::build_marginal_odes(agg), start, {200.0}).back();
    double worst = 0.0;
    for (std::size_t s = 0; s < agg.size(); ++s)
        worst = std::max(worst, std::abs(late.probs[s] - pi.probs[s]));
    out.require(worst <= 1e-5, "transient differs from steady state by " + fmt(worst));
    return out;
}

Outcome negative_control() {
    Outcome out;
    auto m = load("model1_active.pepa");
    auto r = pepa::check_aggregation_condition(m, pepa::partition_groups(m));
    out.require(!r.satisfied, "condition reported as satisfied");
    out.require(r.violations.size() == 1, std::to_string(r.violations.size()) + " violations");
    if (!r.violations.empty())
        out.require(r.violations[0].group == "Clients" && r.violations[0].action == "req",
                    "violation names (" + r.violations[0].group + ", " + r.violations[0].action + ")");
    return out;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"approximate column of the client-server table", approximate_column},
        {"exact column of the client-server table", exact_column},
        {"approximation error grows from case 1 to case 3", error_trend},
        {"boundary probability increases and matches the frozen values", boundary_probability},
        {"collapsed full generator equals the aggregated generator", oracle_equivalence},
        {"aggregated chain is independent of the client population", structure_independence},
        {"cross rates are regular on every eligible corpus model", cross_rate_regularity},
        {"state counts of full and aggregated chains", state_counts},
        {"property suites", property_suites},
        {"active clients violate the aggregation condition", negative_control},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first;
        if (!o.pass) {
            ++failures;
            std::size_t shown = 0;
            std::cout << " [";
            for (const auto& n : o.notes) {
                if (shown == 6) {
                    std::cout << "; ... " << o.notes.size() - shown << " more";
                    break;
                }
                std::cout << (shown ? "; " : "") << n;
                ++shown;
            }
            std::cout << "]";
        }
        std::cout << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
              << " criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
