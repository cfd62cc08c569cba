#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hardgen/ldr.hpp"

#include "hardgen/lp.hpp"
#include "hardgen/problems.hpp"
#include "hardgen/robust.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace hardgen;
using test::section2_instance;

namespace {

// Exact value of max over the box of the single-scenario nominal optimum:
// one epigraph row per feasible solution.
double single_scenario_oracle(const Instance& inst, const UncertaintyBox& box) {
    SelectionProblem sel(inst.n, inst.p);
    LpModel lp;
    lp.sense = Sense::Maximize;
    for (int k = 0; k < inst.n; ++k) lp.add_var(box.lower[k], box.upper[k], 0.0);
    const int t = lp.add_var(-kInf, kInf, 1.0);
    lp.add_row([&] {
        std::vector<double> row(inst.n + 1, 1.0);
        row[t] = 0.0;
        return row;
    }(), Rel::Eq, box.target_sum);
    sel.for_each_feasible([&](const BinaryVec& x) {
        std::vector<double> row(inst.n + 1, 0.0);
        for (int k = 0; k < inst.n; ++k) row[k] = -static_cast<double>(x[k]);
        row[t] = 1.0;
        lp.add_row(std::move(row), Rel::Le, 0.0);
    });
    auto out = solve_lp(lp);
    REQUIRE(out.status == LpStatus::Optimal);
    return out.objective;
}

}  // namespace

TEST_CASE("template row families for a two-item instance") {
    Instance inst;
    inst.kind = ProblemKind::Selection;
    inst.n = 2;
    inst.N = 1;
    inst.max_cost = 100.0;
    inst.p = 1;
    inst.costs = {{3, 5}};
    auto boxes = build_uncertainty(inst, 1.0);
    LdrTemplate t = ldr_build(inst, boxes);
    CHECK(t.rows_rule_value() == 2);
    CHECK(t.rows_rule_quadratic() == 4);
    CHECK(t.rows_weight_budget() == 1);
    CHECK(t.rows_weight_items() == 2);
    CHECK(t.rows_nonneg_rule() == 1);
    CHECK(t.rows_nonneg_items() == 2);
    CHECK(t.rows_scenario_sums() == 1);
    CHECK(static_cast<int>(t.model.rows.size()) ==
          t.rows_rule_value() + t.rows_rule_quadratic() + t.rows_weight_budget() +
              t.rows_weight_items() + t.rows_nonneg_rule() + t.rows_nonneg_items() +
              t.rows_scenario_sums());
    // Every bilinear term sits in the first two row families.
    for (const auto& term : t.terms)
        CHECK(term.row < t.rows_rule_value() + t.rows_rule_quadratic());
    CHECK(static_cast<int>(t.terms.size()) == inst.N * (inst.n + inst.n * inst.n));
}

TEST_CASE("fixture template audit") {
    Instance inst = section2_instance();
    auto boxes = build_uncertainty(inst, 1.0);
    LdrTemplate t = ldr_build(inst, boxes);
    const int n = 4, N = 2;
    CHECK(static_cast<int>(t.model.rows.size()) == n + n * n + 1 + n + N + n * N + N);
    CHECK(t.model.num_vars() ==
          n * n + n * n + n + 1 + 1 + n + N + n * N + N + n * N + n * N);
}

TEST_CASE("tsp inputs are refused") {
    Instance inst = sample_ru(ProblemKind::Tsp, 9, 3, 100.0, 3, 1);
    auto boxes = build_uncertainty(inst, 1.0);
    CHECK_THROWS_AS(ldr_build(inst, boxes), InvariantError);
    CHECK_THROWS_AS(ldr_solve(inst, 1.0), InvariantError);
}

TEST_CASE("zero budget reports at most the fixed robust optimum") {
    Instance inst = section2_instance();
    LdrResult res = ldr_solve(inst, 0.0);
    CHECK(res.hardened.costs == inst.costs);
    double exact = robust_solve_exact(inst).value;
    CHECK(res.reported_value <= exact + 1e-6);
}

TEST_CASE("single scenario alternation reaches the box optimum") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        Instance inst = sample_ru(ProblemKind::Selection, 6, 1, 100.0, 3, seed * 71);
        auto boxes = build_uncertainty(inst, 2.0);
        LdrResult res = ldr_solve(inst, 2.0);
        double oracle = single_scenario_oracle(inst, boxes[0]);
        CHECK_MESSAGE(res.reported_value == doctest::Approx(oracle).epsilon(1e-6), "seed ",
                      seed);
        // The hardened costs should realize the reported value exactly.
        double exact = robust_solve_exact(res.hardened).value;
        CHECK(exact >= res.reported_value - 1e-6);
    }
}

TEST_CASE("fixture value stays below the outer optimum") {
    Instance inst = section2_instance();
    LdrResult res = ldr_solve(inst, 1.0);
    // The outer optimum for this fixture is 10.
    CHECK(res.reported_value <= 10.0 + 1e-6);
    double exact = robust_solve_exact(res.hardened).value;
    CHECK(exact >= res.reported_value - 1e-6);
}

TEST_CASE("reported values are sound on random instances") {
    Rng rng(606);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 5 + static_cast<int>(rng.next_below(5));  // 5..10
        int N = 1 + static_cast<int>(rng.next_below(3));  // 1..4
        double b = 1.0 + static_cast<double>(trial % 2);
        Instance inst = sample_ru(ProblemKind::Selection, n, N, 100.0, std::max(1, n / 2),
                                  7000 + trial);
        LdrResult res = ldr_solve(inst, b);
        double exact = robust_solve_exact(res.hardened).value;
        CHECK_MESSAGE(res.reported_value <= exact + 1e-6, "trial ", trial, " reported ",
                      res.reported_value, " exact ", exact);
        for (std::size_t i = 1; i < res.trace.size(); ++i)
            CHECK(res.trace[i] >= res.trace[i - 1] - 1e-6 * (1.0 + std::abs(res.trace[i - 1])));
        auto boxes = build_uncertainty(inst, b);
        for (int i = 0; i < inst.N; ++i) CHECK(boxes[i].contains(res.hardened.costs[i]));
    }
}
