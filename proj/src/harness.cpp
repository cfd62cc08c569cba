#include "hardgen/harness.hpp"

#include "hardgen/ldr.hpp"
#include "hardgen/midgen.hpp"
#include "hardgen/mro.hpp"
#include "hardgen/robust.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace hardgen {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

double elapsed_s(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::string to_string(GenMethod method) {
    switch (method) {
        case GenMethod::Ru: return "ru";
        case GenMethod::MroEx: return "mro-ex";
        case GenMethod::MroCg: return "mro-cg";
        case GenMethod::MroHeu: return "mro-heu";
        case GenMethod::MroLdr: return "mro-ldr";
        case GenMethod::MroLsHeu: return "mro-lsheu";
        case GenMethod::Mid: return "mid";
    }
    return "unknown";
}

GenMethod gen_method_from_string(const std::string& name) {
    if (name == "ru" || name == "none") return GenMethod::Ru;
    if (name == "mro-ex") return GenMethod::MroEx;
    if (name == "mro-cg") return GenMethod::MroCg;
    if (name == "mro-heu") return GenMethod::MroHeu;
    if (name == "mro-ldr") return GenMethod::MroLdr;
    if (name == "mro-lsheu") return GenMethod::MroLsHeu;
    if (name == "mid") return GenMethod::Mid;
    throw InvariantError("unknown method '" + name + "'");
}

HardenOutcome harden_instance(const Instance& instance, GenMethod method, double budget,
                              std::optional<double> time_limit_s) {
    HardenOutcome outcome;
    outcome.log["method"] = to_string(method);
    outcome.log["budget"] = budget;
    const auto start = Clock::now();

    switch (method) {
        case GenMethod::Ru: {
            outcome.instance = instance;
            outcome.log["stop_reason"] = "identity";
            break;
        }
        case GenMethod::MroEx:
        case GenMethod::MroCg:
        case GenMethod::MroHeu:
        case GenMethod::MroLsHeu: {
            MroOptions options;
            options.budget = budget;
            options.time_limit_s = time_limit_s;
            options.inner = method == GenMethod::MroLsHeu ? InnerMethod::Heuristic
                                                          : InnerMethod::Exact;
            options.master = MasterMethod::Alternating;
            if (method == GenMethod::MroEx) options.master = MasterMethod::Exact;
            if (method == GenMethod::MroCg) options.master = MasterMethod::ColGen;
            auto [hardened, run] = mro_generate(instance, options);
            outcome.instance = std::move(hardened);
            outcome.log["stop_reason"] = to_string(run.stop);
            outcome.log["iterations"] = json::array();
            for (const auto& it : run.iterations)
                outcome.log["iterations"].push_back(
                    json{{"upper", it.upper}, {"lower", it.lower}});
            outcome.log["inner_nodes"] = run.inner_nodes;
            break;
        }
        case GenMethod::MroLdr: {
            LdrResult res = ldr_solve(instance, budget);
            outcome.instance = std::move(res.hardened);
            outcome.log["stop_reason"] = "converged";
            outcome.log["reported_value"] = res.reported_value;
            outcome.log["objective_trace"] = res.trace;
            break;
        }
        case GenMethod::Mid: {
            MidResult res = mid_generate(instance, budget, time_limit_s);
            outcome.instance = std::move(res.hardened);
            outcome.log["stop_reason"] = res.hit_time_limit ? "time_limit" : "converged";
            outcome.log["value"] = res.value;
            outcome.log["nodes"] = res.nodes;
            break;
        }
    }
    outcome.log["generation_seconds"] = elapsed_s(start);
    return outcome;
}

json evaluate_to_json(const Instance& instance, std::optional<double> time_limit_s) {
    RobustResult res = robust_solve_exact(instance, time_limit_s);
    json out;
    out["kind"] = to_string(instance.kind);
    out["n"] = instance.n;
    out["N"] = instance.N;
    out["value"] = res.value;
    out["nodes"] = res.nodes;
    out["lp_solves"] = res.lp_solves;
    out["optimal"] = res.proven_optimal;
    out["wall_seconds"] = res.wall_time;
    if (instance.kind == ProblemKind::Selection) {
        std::vector<int> picked;
        for (int k = 0; k < instance.n; ++k)
            if (res.x[k]) picked.push_back(k + 1);  // 1-based item ids
        out["solution"] = picked;
    } else {
        out["tour"] = Tour::from_arcs(res.x, instance.m).order;
    }
    return out;
}

BatchConfig parse_batch_config(const json& config) {
    BatchConfig out;
    out.jobs = config.value("jobs", 1);
    if (!config.contains("cells") || !config["cells"].is_array())
        throw InvariantError("batch config requires a 'cells' array");
    for (const auto& c : config["cells"]) {
        BatchCell cell;
        cell.problem = problem_kind_from_string(c.value("problem", std::string("selection")));
        if (cell.problem == ProblemKind::Selection) {
            cell.n = c.at("n").get<int>();
            cell.p_or_m = c.value("p", std::max(1, cell.n / 2));
            cell.scenarios = c.value("scenarios", cell.n);
        } else {
            cell.p_or_m = c.at("m").get<int>();
            cell.n = cell.p_or_m * cell.p_or_m;
            cell.scenarios = c.value("scenarios", cell.p_or_m);
        }
        cell.max_cost = c.value("maxcost", 100.0);
        cell.budget = c.value("budget", 1.0);
        cell.count = c.value("count", 10);
        cell.seed = c.value("seed", 1ULL);
        if (c.contains("generate_time_limit_seconds"))
            cell.generate_time_limit_s = c["generate_time_limit_seconds"].get<double>();
        if (c.contains("evaluate_time_limit_seconds"))
            cell.evaluate_time_limit_s = c["evaluate_time_limit_seconds"].get<double>();
        if (!c.contains("methods") || !c["methods"].is_array())
            throw InvariantError("each batch cell requires a 'methods' array");
        for (const auto& mname : c["methods"])
            cell.methods.push_back(gen_method_from_string(mname.get<std::string>()));
        out.cells.push_back(std::move(cell));
    }
    return out;
}

namespace {

json run_cell(const BatchCell& cell) {
    json cell_json;
    cell_json["problem"] = to_string(cell.problem);
    cell_json["n"] = cell.n;
    cell_json["N"] = cell.scenarios;
    cell_json[cell.problem == ProblemKind::Selection ? "p" : "m"] = cell.p_or_m;
    cell_json["budget"] = cell.budget;
    cell_json["count"] = cell.count;
    cell_json["seed"] = cell.seed;
    cell_json["instances"] = json::array();

    struct Ratios {
        std::vector<double> node_ratios, time_ratios;
        int unsolved = 0, failures = 0, harder_value = 0;
    };
    std::map<std::string, Ratios> agg;

    for (int idx = 0; idx < cell.count; ++idx) {
        const std::uint64_t seed = cell.seed + static_cast<std::uint64_t>(idx);
        json rec;
        rec["seed"] = seed;
        Instance original = sample_ru(cell.problem, cell.n, cell.scenarios, cell.max_cost,
                                      cell.p_or_m, seed);
        json orig_eval;
        try {
            orig_eval = evaluate_to_json(original, cell.evaluate_time_limit_s);
        } catch (const std::exception& e) {
            rec["error"] = e.what();
            cell_json["instances"].push_back(std::move(rec));
            for (GenMethod m : cell.methods) ++agg[to_string(m)].failures;
            continue;
        }
        rec["original"] = orig_eval;
        rec["methods"] = json::object();
        for (GenMethod method : cell.methods) {
            const std::string name = to_string(method);
            json mrec;
            try {
                HardenOutcome hardened =
                    harden_instance(original, method, cell.budget, cell.generate_time_limit_s);
                mrec["generation"] = hardened.log;
                json eval = evaluate_to_json(hardened.instance, cell.evaluate_time_limit_s);
                mrec["hardened"] = eval;
                const bool solved = orig_eval["optimal"].get<bool>() &&
                                    eval["optimal"].get<bool>();
                mrec["solved_pair"] = solved;
                if (solved) {
                    double node_ratio = eval["nodes"].get<double>() /
                                        std::max(1.0, orig_eval["nodes"].get<double>());
                    double time_ratio = eval["wall_seconds"].get<double>() /
                                        std::max(1e-9, orig_eval["wall_seconds"].get<double>());
                    mrec["node_ratio"] = node_ratio;
                    mrec["time_ratio_seconds"] = time_ratio;
                    mrec["value_increased"] =
                        eval["value"].get<double>() > orig_eval["value"].get<double>() + 1e-9;
                    auto& a = agg[name];
                    a.node_ratios.push_back(node_ratio);
                    a.time_ratios.push_back(time_ratio);
                    if (mrec["value_increased"].get<bool>()) ++a.harder_value;
                } else {
                    ++agg[name].unsolved;
                }
            } catch (const std::exception& e) {
                mrec["error"] = e.what();
                ++agg[name].failures;
            }
            rec["methods"][name] = std::move(mrec);
        }
        cell_json["instances"].push_back(std::move(rec));
    }

    cell_json["aggregates"] = json::object();
    for (const auto& [name, r] : agg) {
        json a;
        a["solved_pairs"] = r.node_ratios.size();
        a["unsolved"] = r.unsolved;
        a["failures"] = r.failures;
        a["value_increased_count"] = r.harder_value;
        if (!r.node_ratios.empty()) {
            double mean = 0.0, mx = 0.0;
            for (double v : r.node_ratios) {
                mean += v;
                mx = std::max(mx, v);
            }
            a["mean_node_ratio"] = mean / r.node_ratios.size();
            a["max_node_ratio"] = mx;
            double tmean = 0.0, tmx = 0.0;
            for (double v : r.time_ratios) {
                tmean += v;
                tmx = std::max(tmx, v);
            }
            a["mean_time_ratio_seconds"] = tmean / r.time_ratios.size();
            a["max_time_ratio_seconds"] = tmx;
        }
        cell_json["aggregates"][name] = std::move(a);
    }
    return cell_json;
}

}  // namespace

json run_batch(const BatchConfig& config) {
    const auto start = Clock::now();
    std::vector<json> cells(config.cells.size());
    const int jobs = std::max(1, config.jobs);
    if (jobs == 1 || config.cells.size() <= 1) {
        for (std::size_t i = 0; i < config.cells.size(); ++i)
            cells[i] = run_cell(config.cells[i]);
    } else {
        std::mutex mu;
        std::size_t next = 0;
        auto worker = [&] {
            for (;;) {
                std::size_t i;
                {
                    std::lock_guard<std::mutex> lock(mu);
                    if (next >= config.cells.size()) return;
                    i = next++;
                }
                cells[i] = run_cell(config.cells[i]);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    json report;
    report["cells"] = json::array();
    for (auto& c : cells) report["cells"].push_back(std::move(c));
    report["total_seconds"] = elapsed_s(start);
    return report;
}

std::string render_batch_table(const json& report) {
    // Rows: budget x method; columns: n. Entries: mean (max) node ratio.
    std::vector<int> ns;
    struct Key {
        double budget;
        std::string method;
        bool operator<(const Key& o) const {
            if (budget != o.budget) return budget < o.budget;
            return method < o.method;
        }
    };
    std::map<Key, std::map<int, std::string>> table;
    for (const auto& cell : report["cells"]) {
        int n = cell["n"].get<int>();
        if (std::find(ns.begin(), ns.end(), n) == ns.end()) ns.push_back(n);
        double budget = cell["budget"].get<double>();
        for (auto it = cell["aggregates"].begin(); it != cell["aggregates"].end(); ++it) {
            const auto& a = it.value();
            std::ostringstream entry;
            if (a.contains("mean_node_ratio")) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%.2f (%.2f)", a["mean_node_ratio"].get<double>(),
                              a["max_node_ratio"].get<double>());
                entry << buf;
                if (a["unsolved"].get<int>() > 0 || a["failures"].get<int>() > 0)
                    entry << " [" << a["solved_pairs"].get<int>() << " solved]";
            } else {
                entry << "- [0 solved]";
            }
            table[Key{budget, it.key()}][n] = entry.str();
        }
    }
    std::sort(ns.begin(), ns.end());

    std::ostringstream out;
    out << "Node-count increase relative to the original instances, mean (max)\n";
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-8s %-10s", "budget", "method");
    out << buf;
    for (int n : ns) {
        std::snprintf(buf, sizeof(buf), " %18s", ("n=" + std::to_string(n)).c_str());
        out << buf;
    }
    out << "\n";
    for (const auto& [key, cols] : table) {
        std::snprintf(buf, sizeof(buf), "%-8g %-10s", key.budget, key.method.c_str());
        out << buf;
        for (int n : ns) {
            auto it = cols.find(n);
            std::snprintf(buf, sizeof(buf), " %18s", it == cols.end() ? "-" : it->second.c_str());
            out << buf;
        }
        out << "\n";
    }
    return out.str();
}

json strip_time_fields(const json& report) {
    if (report.is_object()) {
        json out = json::object();
        for (auto it = report.begin(); it != report.end(); ++it) {
            if (it.key().find("seconds") != std::string::npos) continue;
            out[it.key()] = strip_time_fields(it.value());
        }
        return out;
    }
    if (report.is_array()) {
        json out = json::array();
        for (const auto& v : report) out.push_back(strip_time_fields(v));
        return out;
    }
    return report;
}

}  // namespace hardgen
