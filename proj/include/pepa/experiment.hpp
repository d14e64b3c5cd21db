#pragma once

#include "pepa/analysis.hpp"
#include "pepa/ctmc.hpp"
#include "pepa/parser.hpp"
#include "pepa/solvers.hpp"

#include <json.hpp>

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pepa {

struct MeasureSpec {
    std::string name;
    std::string expression;
};

enum class Mode { exact, approximate, both };

struct ComparisonRow {
    std::string measure;
    std::optional<double> exact;
    std::optional<double> approximate;
    std::optional<double> error_pct;
};

// 100 |approx - exact| / exact; empty when exact is zero.
std::optional<double> error_percent(double exact, double approximate);

struct CaseResult {
    ParameterOverrides parameters;
    std::vector<ComparisonRow> rows;
    std::optional<double> boundary_probability;
    std::size_t full_states = 0;
    std::size_t aggregated_states = 0;
    double exact_seconds = 0.0;
    double approximate_seconds = 0.0;
};

struct ExperimentSpec {
    std::string model_text;
    std::vector<ParameterOverrides> cases;
    std::vector<MeasureSpec> measures;
    Mode mode = Mode::both;
    std::optional<int> threshold;
    GenerationOptions generation;
    SteadyStateOptions steady;
};

// name -> values; Cartesian product in name order, or position-wise pairs
// when zipped (all lists must then have the same length).
std::vector<ParameterOverrides> expand_overrides(const std::map<std::string, std::vector<double>>& values,
                                                 bool zipped);

CaseResult run_case(const ExperimentSpec& spec, const ParameterOverrides& parameters);
// Cases run concurrently; results come back in case order.
std::vector<CaseResult> run_experiment(const ExperimentSpec& spec);

void write_comparison_csv(std::ostream& out, const std::vector<CaseResult>& results);
nlohmann::json comparison_json(const std::vector<CaseResult>& results);
// Fixed-width table at three decimals.
void print_comparison_table(std::ostream& out, const std::vector<CaseResult>& results);

// The client-server experiment: five servers, one hundred passive clients,
// think rate 15, 0.2 and 0.1.
std::string table1_model_path();
std::string table1_golden_path();
std::vector<MeasureSpec> table1_measures();
ExperimentSpec table1_spec(const std::string& model_text);

// Cells outside the golden tolerances, one message each.
std::vector<std::string> check_against_golden(const std::vector<CaseResult>& results,
                                              const nlohmann::json& golden);

} // namespace pepa
