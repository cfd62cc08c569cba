#include "hardgen/core.hpp"
#include "hardgen/harness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using nlohmann::json;

namespace {

int run_generate(const std::string& in_path, const std::string& out_path,
                 const std::string& problem, int n, int scenarios, int p, int m,
                 double max_cost, const std::string& method_name, double budget,
                 std::uint64_t seed, double time_limit, bool symmetric) {
    using namespace hardgen;
    Instance base;
    if (!in_path.empty()) {
        base = read_instance_file(in_path);
    } else {
        ProblemKind kind = problem_kind_from_string(problem);
        if (kind == ProblemKind::Selection) {
            if (n <= 0) {
                std::cerr << "generate: --n is required for selection\n";
                return 2;
            }
            if (p <= 0) p = std::max(1, n / 2);
            if (scenarios <= 0) scenarios = n;
            base = sample_ru(kind, n, scenarios, max_cost, p, seed, symmetric);
        } else {
            if (m <= 0) {
                std::cerr << "generate: --m is required for tsp\n";
                return 2;
            }
            if (scenarios <= 0) scenarios = m;
            base = sample_ru(kind, m * m, scenarios, max_cost, m, seed, symmetric);
        }
    }

    GenMethod method = gen_method_from_string(method_name);
    if (method == GenMethod::Ru) {
        write_instance_file(base, out_path);
        std::cout << "wrote " << out_path << "\n";
        return 0;
    }

    HardenOutcome outcome = harden_instance(base, method, budget, time_limit);
    write_instance_file(outcome.instance, out_path);
    outcome.log["input"] = in_path.empty() ? json("ru:" + std::to_string(seed)) : json(in_path);
    outcome.log["seed"] = seed;
    std::ofstream log_out(out_path + ".log.json");
    log_out << outcome.log.dump(2) << "\n";
    std::cout << "wrote " << out_path << " (+ run log " << out_path << ".log.json)\n";
    return 0;
}

int run_evaluate(const std::string& in_path, const std::string& out_path, double time_limit) {
    using namespace hardgen;
    Instance inst = read_instance_file(in_path);
    json result = evaluate_to_json(inst, time_limit);
    result["file"] = in_path;
    std::cout << result.dump(2) << "\n";
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << result.dump(2) << "\n";
    }
    return 0;
}

int run_batch(const std::string& config_path, const std::string& out_path,
              const std::string& table_path, int jobs_override) {
    using namespace hardgen;
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "batch: cannot open config '" << config_path << "'\n";
        return 2;
    }
    json config = json::parse(in);
    BatchConfig batch = parse_batch_config(config);
    if (jobs_override > 0) batch.jobs = jobs_override;
    json report = run_batch(batch);
    std::string table = render_batch_table(report);
    std::cout << table;
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << report.dump(2) << "\n";
    }
    if (!table_path.empty()) {
        std::ofstream out(table_path);
        out << table;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hardgen: generate and evaluate hard min-max robust optimization instances"};
    app.require_subcommand(1);

    std::string in_path, out_path, problem = "selection", method = "ru";
    std::string config_path, table_path;
    int n = 0, scenarios = 0, p = 0, m = 0, jobs = 0;
    double max_cost = 100.0, budget = 1.0, time_limit = 3600.0;
    std::uint64_t seed = 1;
    bool symmetric = false;

    auto* gen = app.add_subcommand("generate", "Sample an RU instance or harden one");
    gen->add_option("--in", in_path, "Input instance file (instead of sampling)");
    gen->add_option("--out", out_path, "Output instance file")->required();
    gen->add_option("--problem", problem, "selection or tsp")
        ->check(CLI::IsMember({"selection", "tsp"}));
    gen->add_option("--n", n, "Items (selection)");
    gen->add_option("--scenarios", scenarios, "Scenario count N (defaults: n, or m for tsp)");
    gen->add_option("--p", p, "Items to select (default n/2)");
    gen->add_option("--m", m, "Nodes (tsp)");
    gen->add_option("--maxcost", max_cost, "Global coefficient cap C")->capture_default_str();
    gen->add_option("--method", method,
                    "ru, mro-ex, mro-cg, mro-heu, mro-ldr, mro-lsheu or mid")
        ->capture_default_str();
    gen->add_option("--budget", budget, "Per-coefficient deviation budget b")
        ->capture_default_str();
    gen->add_option("--seed", seed, "RNG seed")->capture_default_str();
    gen->add_option("--time-limit", time_limit, "Generation time limit in seconds")
        ->capture_default_str();
    gen->add_flag("--symmetric", symmetric, "Sample symmetric tsp costs");

    auto* ev = app.add_subcommand("evaluate", "Solve an instance exactly, report hardness");
    ev->add_option("--in", in_path, "Instance file")->required();
    ev->add_option("--out", out_path, "Also write the JSON record here");
    ev->add_option("--time-limit", time_limit, "Evaluation time limit in seconds")
        ->capture_default_str();

    auto* bat = app.add_subcommand("batch", "Run a sample/harden/evaluate campaign");
    bat->add_option("--config", config_path, "Batch config JSON")->required();
    bat->add_option("--out", out_path, "Report JSON path");
    bat->add_option("--table", table_path, "Aligned text table path");
    bat->add_option("--jobs", jobs, "Parallel cells (overrides the config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed())
            return run_generate(in_path, out_path, problem, n, scenarios, p, m, max_cost,
                                method, budget, seed, time_limit, symmetric);
        if (ev->parsed()) return run_evaluate(in_path, out_path, time_limit);
        return run_batch(config_path, out_path, table_path, jobs);
    } catch (const hardgen::TimeLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const hardgen::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const hardgen::InvariantError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
