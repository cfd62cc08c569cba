#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hardgen/harness.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace hardgen;
using nlohmann::json;
using test::section2_instance;

TEST_CASE("method names round trip") {
    for (auto m : {GenMethod::Ru, GenMethod::MroEx, GenMethod::MroCg, GenMethod::MroHeu,
                   GenMethod::MroLdr, GenMethod::MroLsHeu, GenMethod::Mid})
        CHECK(gen_method_from_string(to_string(m)) == m);
    CHECK(gen_method_from_string("none") == GenMethod::Ru);
    CHECK_THROWS_AS(gen_method_from_string("cplex"), InvariantError);
}

TEST_CASE("evaluation record for the worked fixture") {
    json rec = evaluate_to_json(section2_instance());
    CHECK(rec["value"].get<double>() == doctest::Approx(8.0));
    CHECK(rec["optimal"].get<bool>());
    CHECK(rec["solution"] == json::array({1, 4}));
    CHECK(rec["nodes"].get<long long>() >= 1);
}

TEST_CASE("every generator is the identity at zero budget") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        Instance inst = sample_ru(ProblemKind::Selection, 8, 4, 100.0, 4, seed * 19);
        for (auto m : {GenMethod::MroEx, GenMethod::MroCg, GenMethod::MroHeu, GenMethod::MroLdr,
                       GenMethod::Mid}) {
            HardenOutcome out = harden_instance(inst, m, 0.0);
            REQUIRE(out.instance.costs.size() == inst.costs.size());
            for (int i = 0; i < inst.N; ++i)
                for (int k = 0; k < inst.n; ++k)
                    CHECK_MESSAGE(std::abs(out.instance.costs[i][k] - inst.costs[i][k]) <= 1e-9,
                                  to_string(m), " moved cost ", i, ",", k);
        }
    }
}

TEST_CASE("batch configs apply the documented defaults") {
    json config = {{"cells", json::array({{{"problem", "selection"},
                                           {"n", 10},
                                           {"methods", json::array({"mro-heu"})}}})}};
    BatchConfig parsed = parse_batch_config(config);
    REQUIRE(parsed.cells.size() == 1);
    CHECK(parsed.cells[0].p_or_m == 5);       // p defaults to n/2
    CHECK(parsed.cells[0].scenarios == 10);   // N defaults to n
    CHECK(parsed.cells[0].max_cost == 100.0);
}

TEST_CASE("zero-budget batch rows have unit ratios") {
    json config = {{"cells", json::array({{{"problem", "selection"},
                                           {"n", 6},
                                           {"scenarios", 3},
                                           {"p", 3},
                                           {"budget", 0.0},
                                           {"count", 3},
                                           {"seed", 11},
                                           {"methods", json::array({"mro-heu", "mid"})}}})}};
    json report = run_batch(parse_batch_config(config));
    const auto& agg = report["cells"][0]["aggregates"];
    for (const auto& name : {"mro-heu", "mid"}) {
        CHECK(agg[name]["solved_pairs"].get<int>() == 3);
        CHECK(agg[name]["mean_node_ratio"].get<double>() == doctest::Approx(1.0));
        CHECK(agg[name]["max_node_ratio"].get<double>() == doctest::Approx(1.0));
        CHECK(agg[name]["value_increased_count"].get<int>() == 0);
    }
}

TEST_CASE("hardening batches report ratio fields") {
    json config = {{"cells", json::array({{{"problem", "selection"},
                                           {"n", 8},
                                           {"scenarios", 4},
                                           {"p", 4},
                                           {"budget", 2.0},
                                           {"count", 10},
                                           {"seed", 3},
                                           {"methods", json::array({"mro-heu"})}}})}};
    json report = run_batch(parse_batch_config(config));
    const auto& agg = report["cells"][0]["aggregates"]["mro-heu"];
    CHECK(agg.contains("mean_node_ratio"));
    CHECK(agg["solved_pairs"].get<int>() == 10);
    for (const auto& inst : report["cells"][0]["instances"]) {
        CHECK(inst["methods"]["mro-heu"].contains("hardened"));
        CHECK(inst["methods"]["mro-heu"]["hardened"]["value"].get<double>() >=
              inst["original"]["value"].get<double>() - 1e-9);
    }
}

TEST_CASE("reports are byte-identical across reruns once times are stripped") {
    json config = {{"jobs", 2},
                   {"cells", json::array({{{"problem", "selection"},
                                           {"n", 7},
                                           {"scenarios", 3},
                                           {"p", 3},
                                           {"budget", 1.0},
                                           {"count", 4},
                                           {"seed", 21},
                                           {"methods", json::array({"mro-heu", "mid"})}},
                                          {{"problem", "selection"},
                                           {"n", 6},
                                           {"scenarios", 2},
                                           {"p", 3},
                                           {"budget", 2.0},
                                           {"count", 4},
                                           {"seed", 4},
                                           {"methods", json::array({"mro-cg"})}}})}};
    BatchConfig parsed = parse_batch_config(config);
    json a = run_batch(parsed);
    json b = run_batch(parsed);
    CHECK(strip_time_fields(a).dump() == strip_time_fields(b).dump());
    // Sanity: the stripped form still carries the load-bearing fields.
    CHECK(strip_time_fields(a)["cells"][0]["instances"][0]["original"].contains("nodes"));
    CHECK(!strip_time_fields(a).contains("total_seconds"));
}

TEST_CASE("the text table lists methods by budget and size") {
    json config = {{"cells", json::array({{{"problem", "selection"},
                                           {"n", 6},
                                           {"scenarios", 3},
                                           {"p", 3},
                                           {"budget", 1.0},
                                           {"count", 2},
                                           {"seed", 5},
                                           {"methods", json::array({"mro-heu"})}}})}};
    json report = run_batch(parse_batch_config(config));
    std::string table = render_batch_table(report);
    CHECK(table.find("mro-heu") != std::string::npos);
    CHECK(table.find("n=6") != std::string::npos);
    CHECK(table.find("budget") != std::string::npos);
}

TEST_CASE("hardened instances in reports satisfy the box constraints") {
    Instance inst = sample_ru(ProblemKind::Selection, 8, 4, 100.0, 4, 17);
    for (auto m : {GenMethod::MroHeu, GenMethod::Mid, GenMethod::MroLdr}) {
        HardenOutcome out = harden_instance(inst, m, 2.0);
        out.instance.validate();
        auto boxes = build_uncertainty(inst, 2.0);
        for (int i = 0; i < inst.N; ++i) CHECK(boxes[i].contains(out.instance.costs[i]));
    }
}
