#include "pepa/experiment.hpp"
#include "pepa/error.hpp"
#include "pepa/log.hpp"
#include "pepa/measure.hpp"
#include "pepa/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace pepa {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string describe(const ParameterOverrides& parameters) {
    std::ostringstream out;
    bool first = true;
    for (const auto& [name, value] : parameters) {
        out << (first ? "" : " ") << name << "=" << value;
        first = false;
    }
    return out.str();
}

std::vector<double> evaluate(const std::vector<MeasureSpec>& measures, const Distribution& dist,
                             const std::vector<StateVector>& labels, const StateLayout& layout) {
    std::vector<double> out;
    for (const auto& m : measures)
        out.push_back(marginal_measure(dist, labels, Predicate::compile(m.expression, layout)));
    return out;
}

} // namespace

std::optional<double> error_percent(double exact, double approximate) {
    if (!(exact > 0.0))
        return std::nullopt;
    return 100.0 * std::abs(approximate - exact) / exact;
}

std::vector<ParameterOverrides> expand_overrides(const std::map<std::string, std::vector<double>>& values,
                                                 bool zipped) {
    std::vector<ParameterOverrides> out{{}};
    if (values.empty())
        return out;
    if (zipped) {
        std::size_t n = values.begin()->second.size();
        for (const auto& [name, list] : values)
            if (list.size() != n)
                throw Error(ErrorKind::usage, "zipped parameter lists differ in length");
        out.assign(n, {});
        for (const auto& [name, list] : values)
            for (std::size_t i = 0; i < n; ++i)
                out[i][name] = list[i];
        return out;
    }
    for (const auto& [name, list] : values) {
        std::vector<ParameterOverrides> next;
        for (const auto& base : out)
            for (double v : list) {
                auto o = base;
                o[name] = v;
                next.push_back(std::move(o));
            }
        out = std::move(next);
    }
    return out;
}

CaseResult run_case(const ExperimentSpec& spec, const ParameterOverrides& parameters) {
    GroupedModel model = parse_model(spec.model_text, parameters);
    GroupPartition partition = partition_groups(model, spec.threshold);
    if (partition.small.empty())
        throw Error(ErrorKind::condition, "no small groups: nothing to aggregate");

    CaseResult result;
    result.parameters = parameters;
    std::vector<double> approx, exact;

    if (spec.mode != Mode::exact) {
        auto start = std::chrono::steady_clock::now();
        auto report = check_aggregation_condition(model, partition);
        if (!report.satisfied) {
            std::string what;
            for (const auto& v : report.violations)
                what += " (" + v.group + ", " + v.action + ", " + v.state + ")";
            throw Error(ErrorKind::condition, "aggregation condition fails:" + what);
        }
        Ctmc aggregated = generate_ctmc(reduce(model, partition), spec.generation);
        Distribution pi = steady_state(aggregated, spec.steady);
        approx = evaluate(spec.measures, pi, aggregated.states, aggregated.layout);
        result.aggregated_states = aggregated.size();
        result.approximate_seconds = seconds_since(start);
    }

    if (spec.mode != Mode::approximate) {
        auto start = std::chrono::steady_clock::now();
        CompiledModel compiled(model);
        Ctmc full = generate_ctmc(compiled, compiled.initial_state(), spec.generation);
        Distribution pi = steady_state(full, spec.steady);
        auto classification = classify(model, partition);
        auto small_layout = full.layout.restricted(partition.small);
        auto chains = partition_subchains(full, classification, small_layout);
        Distribution summed = sum_over_chains(pi, chains);
        exact = evaluate(spec.measures, summed, chains.keys, small_layout);
        auto boundary = boundary_states(full, compiled, partition, classification, chains);
        result.boundary_probability = boundary_probability(pi, boundary);
        result.full_states = full.size();
        result.exact_seconds = seconds_since(start);
    }

    for (std::size_t m = 0; m < spec.measures.size(); ++m) {
        ComparisonRow row;
        row.measure = spec.measures[m].name;
        if (!exact.empty())
            row.exact = exact[m];
        if (!approx.empty())
            row.approximate = approx[m];
        if (row.exact && row.approximate)
            row.error_pct = error_percent(*row.exact, *row.approximate);
        result.rows.push_back(std::move(row));
    }
    log::info("case ", describe(parameters), ": approximate ", result.approximate_seconds,
              " s, exact ", result.exact_seconds, " s");
    return result;
}

std::vector<CaseResult> run_experiment(const ExperimentSpec& spec) {
    std::vector<ParameterOverrides> cases = spec.cases.empty() ? std::vector<ParameterOverrides>{{}} : spec.cases;
    std::vector<CaseResult> results(cases.size());
    std::vector<std::exception_ptr> failures(cases.size());
    const auto n = static_cast<long>(cases.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
        try {
            results[static_cast<std::size_t>(i)] = run_case(spec, cases[static_cast<std::size_t>(i)]);
        } catch (...) {
            failures[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& f : failures)
        if (f)
            std::rethrow_exception(f);
    return results;
}

void write_comparison_csv(std::ostream& out, const std::vector<CaseResult>& results) {
    out << "case,parameters,measure,exact,approximate,error_pct\n";
    out << std::setprecision(17);
    auto cell = [&](const std::optional<double>& v) {
        if (v)
            out << *v;
        else
            out << "NA";
    };
    for (std::size_t c = 0; c < results.size(); ++c)
        for (const auto& row : results[c].rows) {
            out << c + 1 << ",\"" << describe(results[c].parameters) << "\"," << row.measure << ',';
            cell(row.exact);
            out << ',';
            cell(row.approximate);
            out << ',';
            cell(row.error_pct);
            out << '\n';
        }
    for (std::size_t c = 0; c < results.size(); ++c)
        if (results[c].boundary_probability) {
            out << c + 1 << ",\"" << describe(results[c].parameters) << "\",boundary,";
            cell(results[c].boundary_probability);
            out << ",NA,NA\n";
        }
}

nlohmann::json comparison_json(const std::vector<CaseResult>& results) {
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); };
    nlohmann::json cases = nlohmann::json::array();
    for (const auto& r : results) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : r.rows)
            rows.push_back({{"measure", row.measure},
                            {"exact", opt(row.exact)},
                            {"approximate", opt(row.approximate)},
                            {"error_pct", opt(row.error_pct)}});
        cases.push_back({{"parameters", r.parameters},
                         {"full_states", r.full_states},
                         {"aggregated_states", r.aggregated_states},
                         {"boundary_probability", opt(r.boundary_probability)},
                         {"rows", rows}});
    }
    return {{"cases", cases}};
}

void print_comparison_table(std::ostream& out, const std::vector<CaseResult>& results) {
    auto cell = [&](const std::optional<double>& v, int precision) {
        std::ostringstream s;
        if (v)
            s << std::fixed << std::setprecision(precision) << *v;
        else
            s << "N/A";
        return s.str();
    };
    for (std::size_t c = 0; c < results.size(); ++c) {
        const auto& r = results[c];
        out << "case " << c + 1 << " (" << describe(r.parameters) << ")";
        if (r.full_states)
            out << "  full states " << r.full_states;
        if (r.aggregated_states)
            out << "  aggregated states " << r.aggregated_states;
        out << '\n';
        out << std::left << std::setw(14) << "  measure" << std::right << std::setw(9) << "exact"
            << std::setw(9) << "approx" << std::setw(10) << "error %" << '\n';
        for (const auto& row : r.rows)
            out << "  " << std::left << std::setw(12) << row.measure << std::right << std::setw(9)
                << cell(row.exact, 3) << std::setw(9) << cell(row.approximate, 3) << std::setw(10)
                << cell(row.error_pct, 1) << '\n';
        if (r.boundary_probability) {
            std::ostringstream b;
            b << std::scientific << std::setprecision(4) << *r.boundary_probability;
            out << "  boundary probability " << b.str() << '\n';
        }
    }
}

std::string table1_model_path() { return std::string(PEPA_MODELS_DIR) + "/client_server.pepa"; }

std::string table1_golden_path() { return std::string(PEPA_MODELS_DIR) + "/table1_golden.json"; }

std::vector<MeasureSpec> table1_measures() {
    return {
        {"P(5,0,0)", "S_idle == 5 && S_log == 0 && S_broken == 0"},
        {"P(3,1,1)", "S_idle == 3 && S_log == 1 && S_broken == 1"},
        {"P(0,0,5)", "S_idle == 0 && S_log == 0 && S_broken == 5"},
        {"E5", "S_broken == 0"},
        {"E2", "S_broken == 3"},
        {"E1", "S_broken == 4"},
    };
}

ExperimentSpec table1_spec(const std::string& model_text) {
    ExperimentSpec spec;
    spec.model_text = model_text;
    spec.cases = {{{"r_t", 15.0}}, {{"r_t", 0.2}}, {{"r_t", 0.1}}};
    spec.measures = table1_measures();
    spec.mode = Mode::both;
    return spec;
}

std::vector<std::string> check_against_golden(const std::vector<CaseResult>& results,
                                              const nlohmann::json& golden) {
    std::vector<std::string> breaches;
    const auto& cases = golden.at("cases");
    if (cases.size() != results.size())
        return {"golden file has " + std::to_string(cases.size()) + " cases, run produced " +
                std::to_string(results.size())};
    const double tol_approx = golden.at("tolerance").at("approximate").get<double>();
    const double tol_exact = golden.at("tolerance").at("exact").get<double>();
    const auto names = golden.at("measures").get<std::vector<std::string>>();

    auto check = [&](std::size_t c, const std::string& measure, const char* column,
                     const std::optional<double>& got, double want, double tol) {
        if (!got)
            return;
        if (std::abs(*got - want) <= tol)
            return;
        std::ostringstream msg;
        msg << "case " << c + 1 << " (" << describe(results[c].parameters) << ") " << measure << ' '
            << column << ": got " << std::fixed << std::setprecision(4) << *got << ", golden "
            << std::setprecision(3) << want << " (tolerance " << tol << ")";
        breaches.push_back(msg.str());
    };

    for (std::size_t c = 0; c < results.size(); ++c) {
        const auto& g = cases[c];
        for (std::size_t m = 0; m < names.size(); ++m) {
            auto row = std::find_if(results[c].rows.begin(), results[c].rows.end(),
                                    [&](const ComparisonRow& r) { return r.measure == names[m]; });
            if (row == results[c].rows.end()) {
                breaches.push_back("measure " + names[m] + " missing from case " + std::to_string(c + 1));
                continue;
            }
            check(c, names[m], "approximate", row->approximate, g.at("approximate").at(m).get<double>(),
                  tol_approx);
            check(c, names[m], "exact", row->exact, g.at("exact").at(m).get<double>(), tol_exact);
        }
        if (g.contains("boundary_probability") && results[c].boundary_probability) {
            double want = g.at("boundary_probability").get<double>();
            double got = *results[c].boundary_probability;
            const auto& bt = golden.at("boundary_tolerance");
            double tol = std::max(bt.at("absolute").get<double>(), bt.at("relative").get<double>() * want);
            if (std::abs(got - want) > tol) {
                std::ostringstream msg;
                msg << "case " << c + 1 << " boundary probability: got " << std::scientific
                    << std::setprecision(10) << got << ", golden " << want;
                breaches.push_back(msg.str());
            }
        }
    }
    return breaches;
}

} // namespace pepa
