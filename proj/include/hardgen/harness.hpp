#pragma once

#include "hardgen/core.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace hardgen {

enum class GenMethod { Ru, MroEx, MroCg, MroHeu, MroLdr, MroLsHeu, Mid };

std::string to_string(GenMethod method);
GenMethod gen_method_from_string(const std::string& name);

struct HardenOutcome {
    Instance instance;
    nlohmann::json log;  // method, budget, stop reason, bound trace, timings
};

/// Runs one hardening method on an instance. `Ru` returns the input unchanged.
HardenOutcome harden_instance(const Instance& instance, GenMethod method, double budget,
                              std::optional<double> time_limit_s = std::nullopt);

/// Exact evaluation record: robust optimum, node count, solution, optimality.
nlohmann::json evaluate_to_json(const Instance& instance,
                                std::optional<double> time_limit_s = std::nullopt);

struct BatchCell {
    ProblemKind problem = ProblemKind::Selection;
    int n = 0;
    int scenarios = 0;
    int p_or_m = 0;
    double max_cost = 100.0;
    double budget = 1.0;
    std::vector<GenMethod> methods;
    int count = 10;
    std::uint64_t seed = 1;
    std::optional<double> generate_time_limit_s;
    std::optional<double> evaluate_time_limit_s;
};

struct BatchConfig {
    std::vector<BatchCell> cells;
    int jobs = 1;
};

BatchConfig parse_batch_config(const nlohmann::json& config);

/// Samples, hardens and evaluates every cell; per-row failures are recorded
/// and the run continues. Cells run in parallel up to config.jobs; the report
/// layout does not depend on scheduling.
nlohmann::json run_batch(const BatchConfig& config);

/// Aligned text table of mean (max) node-count ratios per budget, method and n.
std::string render_batch_table(const nlohmann::json& report);

/// Copy of a report with every wall-clock dependent field removed; two runs
/// with equal seeds must agree byte-for-byte on the stripped form.
nlohmann::json strip_time_fields(const nlohmann::json& report);

}  // namespace hardgen
