#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hardgen/robust.hpp"

#include "oracles.hpp"

#include <algorithm>

using namespace hardgen;
using test::brute_force_robust;
using test::section2_hardened_instance;
using test::section2_instance;

TEST_CASE("worst cases over the two-scenario fixture") {
    Instance inst = section2_instance();
    CHECK(robust_value(inst, {1, 0, 0, 1}) == doctest::Approx(8.0));
    CHECK(robust_value(inst, {0, 1, 0, 1}) == doctest::Approx(11.0));
    Instance hard = section2_hardened_instance();
    CHECK(robust_value(hard, {1, 0, 0, 1}) == doctest::Approx(10.0));
}

TEST_CASE("exact solve recovers the fixture optima") {
    Instance inst = section2_instance();
    auto res = robust_solve_exact(inst);
    CHECK(res.proven_optimal);
    CHECK(res.value == doctest::Approx(8.0));
    CHECK(res.x == BinaryVec{1, 0, 0, 1});
    CHECK(res.nodes >= 1);

    Instance hard = section2_hardened_instance();
    auto res2 = robust_solve_exact(hard);
    CHECK(res2.value == doctest::Approx(10.0));
    CHECK(res2.x == BinaryVec{1, 0, 0, 1});
}

TEST_CASE("sorted objective vectors match the fixture") {
    auto vec = sorted_objective_vector(section2_instance());
    CHECK(vec == std::vector<double>{8, 11, 11, 11, 11, 13});
    auto hard = sorted_objective_vector(section2_hardened_instance());
    CHECK(hard == std::vector<double>{10, 11, 11, 11, 12, 13});
}

TEST_CASE("sorted vector of a single scenario is the cost list") {
    Instance inst;
    inst.kind = ProblemKind::Selection;
    inst.n = 3;
    inst.N = 1;
    inst.max_cost = 100.0;
    inst.p = 1;
    inst.costs = {{1, 2, 3}};
    CHECK(sorted_objective_vector(inst) == std::vector<double>{1, 2, 3});
    auto res = robust_solve_exact(inst);
    CHECK(res.value == doctest::Approx(1.0));
    CHECK(sorted_objective_vector(inst).front() == doctest::Approx(res.value));
}

TEST_CASE("single scenario equals the nominal solve") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Instance inst = sample_ru(ProblemKind::Selection, 9, 1, 100.0, 4, seed);
        auto res = robust_solve_exact(inst);
        SelectionProblem sel(9, 4);
        CHECK(res.value == doctest::Approx(sel.solve_nominal(inst.costs[0]).value));
    }
}

TEST_CASE("exact selection solver equals enumeration") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        int n = 6 + static_cast<int>(seed % 8);  // 6..13
        int N = 1 + static_cast<int>(seed % 5);
        Instance inst = sample_ru(ProblemKind::Selection, n, N, 100.0, n / 2, seed * 17);
        auto res = robust_solve_exact(inst);
        auto [best, bx] = brute_force_robust(inst);
        CHECK_MESSAGE(res.value == best, "seed ", seed, " n ", n);
        CHECK(robust_value(inst, res.x) == res.value);
    }
}

TEST_CASE("exact tsp solver equals enumeration") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        int m = 4 + static_cast<int>(seed % 4);  // 4..7
        int N = 1 + static_cast<int>(seed % 3);
        Instance inst = sample_ru(ProblemKind::Tsp, m * m, N, 100.0, m, seed * 13 + 5);
        auto res = robust_solve_exact(inst);
        auto [best, bx] = brute_force_robust(inst);
        CHECK_MESSAGE(res.value == best, "seed ", seed, " m ", m);
        CHECK(res.nodes >= 1);
    }
}

TEST_CASE("node counts are deterministic") {
    Instance inst = sample_ru(ProblemKind::Selection, 12, 6, 100.0, 6, 99);
    auto a = robust_solve_exact(inst);
    auto b = robust_solve_exact(inst);
    CHECK(a.nodes == b.nodes);
    CHECK(a.lp_solves == b.lp_solves);
    CHECK(a.value == b.value);
    CHECK(a.x == b.x);
}

TEST_CASE("heuristic is optimal for one selection scenario") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Instance inst = sample_ru(ProblemKind::Selection, 10, 1, 100.0, 5, seed + 40);
        auto heu = robust_solve_heuristic(inst);
        auto ex = robust_solve_exact(inst);
        CHECK(!heu.proven_optimal);
        CHECK(heu.value == doctest::Approx(ex.value));
    }
}

TEST_CASE("heuristic values bracket the exact optimum") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        int n = 6 + static_cast<int>(seed % 7);  // 6..12
        int N = 1 + static_cast<int>(seed % 6);
        Instance inst = sample_ru(ProblemKind::Selection, n, N, 100.0, n / 2, seed * 7 + 1);
        auto heu = robust_solve_heuristic(inst);
        auto ex = robust_solve_exact(inst);
        CHECK(heu.value >= ex.value - 1e-9);
    }
}

TEST_CASE("tsp heuristic rounds to feasible tours above the optimum") {
    TspProblem tsp(6);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Instance inst = sample_ru(ProblemKind::Tsp, 36, 3, 100.0, 6, seed * 3);
        auto heu = robust_solve_heuristic(inst);
        CHECK(tsp.is_feasible(heu.x));
        auto ex = robust_solve_exact(inst);
        CHECK(heu.value >= ex.value - 1e-9);
    }
}

TEST_CASE("time limits return the incumbent unproven") {
    Instance inst = sample_ru(ProblemKind::Selection, 40, 20, 100.0, 20, 5);
    auto res = robust_solve_exact(inst, 0.05);
    if (res.hit_time_limit) {
        CHECK(!res.proven_optimal);
        CHECK(robust_value(inst, res.x) == res.value);
    }
}
