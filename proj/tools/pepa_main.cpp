// Command-line front end: parse, check, reduce, aggregate, solve, verify,
// compare, table1 and analyze.

#include "pepa/analysis.hpp"
#include "pepa/ctmc.hpp"
#include "pepa/error.hpp"
#include "pepa/experiment.hpp"
#include "pepa/log.hpp"
#include "pepa/parser.hpp"
#include "pepa/printer.hpp"
#include "pepa/solvers.hpp"
#include "pepa/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOptions {
    std::string model_path;
    std::optional<int> threshold;
    std::size_t state_cap = 10'000'000;
    std::vector<std::string> sets;
    std::string out_dir;
    std::string format = "json";
    bool parallel = false;
};

void add_model_options(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("model", o.model_path, "Model file")->required();
    cmd->add_option("--threshold", o.threshold, "Population above which a group is large");
    cmd->add_option("--state-cap", o.state_cap, "Maximum number of CTMC states")->capture_default_str();
    cmd->add_option("--set", o.sets, "Override a rate constant: name=value");
    cmd->add_flag("--parallel", o.parallel, "Expand state-space levels with OpenMP");
}

pepa::ParameterOverrides single_overrides(const std::vector<std::string>& sets) {
    pepa::ParameterOverrides out;
    for (const auto& s : sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw pepa::Error(pepa::ErrorKind::usage, "--set expects name=value, got '" + s + "'");
        try {
            out[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
        } catch (const std::exception&) {
            throw pepa::Error(pepa::ErrorKind::usage, "--set value is not a number: '" + s + "'");
        }
    }
    return out;
}

std::map<std::string, std::vector<double>> list_overrides(const std::vector<std::string>& sets) {
    std::map<std::string, std::vector<double>> out;
    for (const auto& s : sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw pepa::Error(pepa::ErrorKind::usage, "--set expects name=v1,v2,..., got '" + s + "'");
        auto& list = out[s.substr(0, eq)];
        std::stringstream values(s.substr(eq + 1));
        std::string item;
        while (std::getline(values, item, ','))
            try {
                list.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw pepa::Error(pepa::ErrorKind::usage, "--set value is not a number: '" + item + "'");
            }
    }
    return out;
}

std::vector<pepa::MeasureSpec> parse_measures(const std::vector<std::string>& raw) {
    std::vector<pepa::MeasureSpec> out;
    for (const auto& m : raw) {
        auto eq = m.find('=');
        if (eq == std::string::npos || m.compare(eq, 2, "==") == 0)
            throw pepa::Error(pepa::ErrorKind::usage, "--measure expects name=expression, got '" + m + "'");
        out.push_back({m.substr(0, eq), m.substr(eq + 1)});
    }
    return out;
}

pepa::GroupedModel load(const CommonOptions& o) {
    return pepa::parse_model_file(o.model_path, single_overrides(o.sets));
}

pepa::GenerationOptions generation(const CommonOptions& o) {
    return {o.state_cap, o.parallel};
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw pepa::Error(pepa::ErrorKind::io, "cannot write '" + path.string() + "'");
    out << content;
}

fs::path ensure_dir(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec)
        throw pepa::Error(pepa::ErrorKind::io, "cannot create '" + dir + "': " + ec.message());
    return p;
}

json classification_json(const pepa::GroupPartition& partition, const pepa::ActionClassification& c) {
    return {{"small_groups", partition.small},
            {"large_groups", partition.large},
            {"large_only", c.large_only},
            {"small_only", c.small_only},
            {"shared", c.shared}};
}

json condition_json(const pepa::ConditionReport& report) {
    json violations = json::array();
    for (const auto& v : report.violations)
        violations.push_back({{"group", v.group}, {"action", v.action}, {"state", v.state}});
    return {{"satisfied", report.satisfied}, {"violations", violations}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void require_condition(const pepa::GroupedModel& model, const pepa::GroupPartition& partition) {
    auto report = pepa::check_aggregation_condition(model, partition);
    if (!report.satisfied) {
        std::cout << dump(condition_json(report));
        throw pepa::Error(pepa::ErrorKind::condition, "the model does not satisfy the aggregation condition");
    }
}

int run(int argc, char** argv) {
    CLI::App app{"Grouped PEPA aggregation toolkit"};
    app.require_subcommand(1);
    CommonOptions o;

    auto* parse = app.add_subcommand("parse", "Parse a model and pretty-print it");
    add_model_options(parse, o);
    parse->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));

    bool strict = false;
    auto* check = app.add_subcommand("check", "Classify actions and check the aggregation condition");
    add_model_options(check, o);
    check->add_flag("--strict", strict, "Require passive offers from every large-group state");

    auto* reduce = app.add_subcommand("reduce", "Print the reduced model");
    add_model_options(reduce, o);

    auto* aggregate = app.add_subcommand("aggregate", "Generate the aggregated CTMC");
    add_model_options(aggregate, o);
    aggregate->add_option("--out", o.out_dir, "Write aggregated.json and generator.mtx here");

    std::string mode = "approx";
    std::vector<std::string> measures;
    std::vector<double> times;
    std::string method = "rk45";
    auto* solve = app.add_subcommand("solve", "Steady-state or transient marginal distribution");
    add_model_options(solve, o);
    solve->add_option("--mode", mode, "approx or exact")->check(CLI::IsMember({"approx", "exact"}));
    solve->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    solve->add_option("--measure", measures, "name=predicate over small-group counts");
    solve->add_option("--times", times, "Transient output times (steady state when absent)")->delimiter(',');
    solve->add_option("--method", method, "rk45 or trapezoid")->check(CLI::IsMember({"rk45", "trapezoid"}));
    solve->add_option("--out", o.out_dir, "Write the result here instead of stdout");

    bool force_collapse = false;
    auto* verify = app.add_subcommand("verify", "Check the aggregation against the full CTMC");
    add_model_options(verify, o);
    verify->add_flag("--force-collapse", force_collapse, "Collapse even if cross rates are irregular");

    bool zipped = false;
    std::string compare_mode = "both";
    auto* compare = app.add_subcommand("compare", "Compare exact and approximate marginals");
    add_model_options(compare, o);
    compare->add_option("--mode", compare_mode, "exact, approx or both")->check(CLI::IsMember({"exact", "approx", "both"}));
    compare->add_option("--measure", measures, "name=predicate over small-group counts")->required();
    compare->add_flag("--zip", zipped, "Pair --set value lists instead of taking their product");
    compare->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    compare->add_option("--out", o.out_dir, "Write comparison files here");

    std::string golden_path = pepa::table1_golden_path();
    std::string table_model = pepa::table1_model_path();
    auto* table1 = app.add_subcommand("table1", "Run the client-server experiment against the golden table");
    table1->add_option("--model", table_model, "Client-server model file")->capture_default_str();
    table1->add_option("--golden", golden_path, "Golden table file")->capture_default_str();
    table1->add_option("--out", o.out_dir, "Write table1.csv, boundary.csv and boundary.gp here");

    auto* analyze = app.add_subcommand("analyze", "Write classification, reduced model, CTMC and marginals");
    add_model_options(analyze, o);
    analyze->add_option("--out", o.out_dir, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (*parse) {
        auto model = load(o);
        if (o.format == "text") {
            std::cout << pepa::print_model(model);
        } else {
            json groups = json::array();
            for (const auto& label : model.group_order()) {
                const auto& g = model.group(label);
                groups.push_back({{"label", label}, {"component", g.component}, {"population", g.population()}});
            }
            json comps = json::object();
            for (const auto& [name, c] : model.components)
                comps[name] = {{"states", c.states}, {"transitions", c.transitions.size()}};
            std::cout << dump({{"groups", groups}, {"components", comps},
                               {"equation", pepa::print_equation(model.equation)},
                               {"warnings", model.warnings}});
        }
        return 0;
    }

    if (*check) {
        auto model = load(o);
        auto partition = pepa::partition_groups(model, o.threshold);
        auto classification = pepa::classify(model, partition);
        auto report = pepa::check_aggregation_condition(
            model, partition, strict ? pepa::ConditionReading::strict : pepa::ConditionReading::enabling);
        json out = classification_json(partition, classification);
        out["condition"] = condition_json(report);
        std::cout << dump(out);
        return report.satisfied ? 0 : pepa::exit_code(pepa::ErrorKind::condition);
    }

    if (*reduce) {
        auto model = load(o);
        auto partition = pepa::partition_groups(model, o.threshold);
        require_condition(model, partition);
        std::cout << pepa::print_model(pepa::reduce(model, partition));
        return 0;
    }

    if (*aggregate) {
        auto model = load(o);
        auto partition = pepa::partition_groups(model, o.threshold);
        require_condition(model, partition);
        auto ctmc = pepa::generate_ctmc(pepa::reduce(model, partition), generation(o));
        if (o.out_dir.empty()) {
            std::cout << dump(pepa::to_json(ctmc));
        } else {
            auto dir = ensure_dir(o.out_dir);
            write_file(dir / "aggregated.json", dump(pepa::to_json(ctmc)));
            std::ostringstream mtx;
            pepa::write_matrix_market(mtx, ctmc.generator());
            write_file(dir / "generator.mtx", mtx.str());
        }
        return 0;
    }

    if (*solve) {
        auto model = load(o);
        auto partition = pepa::partition_groups(model, o.threshold);
        pepa::Ctmc ctmc;
        std::vector<pepa::StateVector> labels;
        pepa::StateLayout layout;
        std::optional<pepa::SubChainPartition> chains;
        if (mode == "approx") {
            require_condition(model, partition);
            ctmc = pepa::generate_ctmc(pepa::reduce(model, partition), generation(o));
            labels = ctmc.states;
            layout = ctmc.layout;
        } else {
            ctmc = pepa::generate_ctmc(model, generation(o));
            layout = ctmc.layout.restricted(partition.small);
            chains = pepa::partition_subchains(ctmc, pepa::classify(model, partition), layout);
            labels = chains->keys;
        }
        std::vector<pepa::Distribution> results;
        if (times.empty()) {
            results.push_back(pepa::steady_state(ctmc));
        } else {
            pepa::Distribution p0{std::vector<double>(ctmc.size(), 0.0), 0.0};
            p0.probs[static_cast<std::size_t>(ctmc.initial)] = 1.0;
            pepa::TransientOptions topt;
            topt.method = method == "trapezoid" ? pepa::TransientOptions::Method::trapezoid
                                                : pepa::TransientOptions::Method::rk45;
            results = pepa::transient(pepa::build_marginal_odes(ctmc), p0, times, topt);
        }
        if (chains)
            for (auto& d : results)
                d = pepa::sum_over_chains(d, *chains);

        std::ostringstream out;
        auto specs = parse_measures(measures);
        if (!specs.empty()) {
            json rows = json::array();
            for (const auto& d : results)
                for (const auto& m : specs)
                    rows.push_back({{"measure", m.name},
                                    {"time", d.time ? json(*d.time) : json("steady")},
                                    {"value", pepa::marginal_measure(d, labels, pepa::Predicate::compile(m.expression, layout))}});
            if (o.format == "csv") {
                out << "measure,time,value\n" << std::setprecision(17);
                for (const auto& r : rows)
                    out << r["measure"].get<std::string>() << ',' << r["time"].dump() << ','
                        << r["value"].get<double>() << '\n';
            } else {
                out << dump(rows);
            }
        } else if (o.format == "csv") {
            if (times.empty())
                pepa::write_distribution_csv(out, results.front(), labels, layout);
            else
                pepa::write_trajectory_csv(out, results, labels);
        } else {
            json all = json::array();
            for (const auto& d : results)
                all.push_back(pepa::distribution_json(d, labels, layout));
            out << dump(times.empty() ? all.front() : all);
        }
        if (o.out_dir.empty())
            std::cout << out.str();
        else
            write_file(ensure_dir(o.out_dir) / (o.format == "csv" ? "solution.csv" : "solution.json"), out.str());
        return 0;
    }

    if (*verify) {
        auto model = load(o);
        auto partition = pepa::partition_groups(model, o.threshold);
        auto summary = pepa::verify_aggregation(model, partition, generation(o), force_collapse);
        std::cout << dump(pepa::to_json(summary));
        if (!summary.regular || summary.diff.max_abs_diff > 1e-12)
            return pepa::exit_code(pepa::ErrorKind::verification);
        return 0;
    }

    if (*compare) {
        pepa::ExperimentSpec spec;
        spec.model_text = pepa::read_text_file(o.model_path);
        spec.cases = pepa::expand_overrides(list_overrides(o.sets), zipped);
        spec.measures = parse_measures(measures);
        spec.mode = compare_mode == "exact"    ? pepa::Mode::exact
                    : compare_mode == "approx" ? pepa::Mode::approximate
                                               : pepa::Mode::both;
        spec.threshold = o.threshold;
        spec.generation = generation(o);
        auto results = pepa::run_experiment(spec);
        pepa::print_comparison_table(std::cout, results);
        if (!o.out_dir.empty()) {
            auto dir = ensure_dir(o.out_dir);
            if (o.format == "csv") {
                std::ostringstream csv;
                pepa::write_comparison_csv(csv, results);
                write_file(dir / "comparison.csv", csv.str());
            } else {
                write_file(dir / "comparison.json", dump(pepa::comparison_json(results)));
            }
        }
        return 0;
    }

    if (*table1) {
        auto spec = pepa::table1_spec(pepa::read_text_file(table_model));
        auto results = pepa::run_experiment(spec);
        pepa::print_comparison_table(std::cout, results);
        if (!o.out_dir.empty()) {
            auto dir = ensure_dir(o.out_dir);
            std::ostringstream csv;
            pepa::write_comparison_csv(csv, results);
            write_file(dir / "table1.csv", csv.str());
            std::ostringstream boundary;
            boundary << "case,r_t,boundary_probability\n" << std::setprecision(17);
            for (std::size_t c = 0; c < results.size(); ++c)
                boundary << c + 1 << ',' << results[c].parameters.at("r_t") << ','
                         << results[c].boundary_probability.value_or(0.0) << '\n';
            write_file(dir / "boundary.csv", boundary.str());
            write_file(dir / "boundary.gp",
                       "set datafile separator ','\n"
                       "set key off\n"
                       "set xlabel 'case'\n"
                       "set ylabel 'P(C_r = 0)'\n"
                       "set style fill solid 0.5\n"
                       "set boxwidth 0.6\n"
                       "plot 'boundary.csv' every ::1 using 1:3:xtic(2) with boxes\n");
        }
        json golden = json::parse(pepa::read_text_file(golden_path));
        auto breaches = pepa::check_against_golden(results, golden);
        if (!breaches.empty()) {
            std::cerr << breaches.size() << " cells outside the golden tolerances:\n";
            for (const auto& b : breaches)
                std::cerr << "  " << b << '\n';
            return pepa::exit_code(pepa::ErrorKind::tolerance);
        }
        std::cout << "all cells within the golden tolerances\n";
        return 0;
    }

    if (*analyze) {
        auto model = load(o);
        auto partition = pepa::partition_groups(model, o.threshold);
        auto dir = ensure_dir(o.out_dir);
        auto classification = pepa::classify(model, partition);
        auto report = pepa::check_aggregation_condition(model, partition);
        write_file(dir / "classification.json", dump(classification_json(partition, classification)));
        write_file(dir / "condition.json", dump(condition_json(report)));
        if (!report.satisfied) {
            std::cout << dump(condition_json(report));
            return pepa::exit_code(pepa::ErrorKind::condition);
        }
        auto reduced = pepa::reduce(model, partition);
        write_file(dir / "reduced.pepa", pepa::print_model(reduced));
        auto ctmc = pepa::generate_ctmc(reduced, generation(o));
        write_file(dir / "aggregated.json", dump(pepa::to_json(ctmc)));
        std::ostringstream csv;
        pepa::write_distribution_csv(csv, pepa::steady_state(ctmc), ctmc.states, ctmc.layout);
        write_file(dir / "marginal.csv", csv.str());
        std::cout << "aggregated states: " << ctmc.size() << "\n";
        return 0;
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const pepa::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return pepa::exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
