#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hardgen/mro.hpp"

#include "hardgen/robust.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>

using namespace hardgen;
using test::section2_instance;

namespace {

// Hitting-set master fixture: seven elements, two scenarios with unit mass to
// distribute, three candidate sets.
std::vector<UncertaintyBox> theorem1_boxes() {
    UncertaintyBox box;
    box.lower.assign(7, 0.0);
    box.upper.assign(7, 1.0);
    box.target_sum = 1.0;
    return {box, box};
}

CandidatePool theorem1_pool() {
    CandidatePool pool;
    pool.add({1, 1, 1, 0, 0, 0, 0});
    pool.add({0, 0, 1, 1, 1, 0, 0});
    pool.add({0, 0, 0, 0, 0, 1, 1});
    return pool;
}

CandidatePool random_pool(const Instance& inst, int K, Rng& rng) {
    SelectionProblem sel(inst.n, inst.p);
    std::vector<BinaryVec> all;
    sel.for_each_feasible([&](const BinaryVec& x) { all.push_back(x); });
    CandidatePool pool;
    while (pool.size() < K) pool.add(all[rng.next_below(all.size() - 1)]);
    return pool;
}

double pool_min_max(const CandidatePool& pool, const std::vector<std::vector<double>>& costs) {
    double worst_min = kInf;
    for (const auto& x : pool.solutions) {
        double best = -kInf;
        for (const auto& c : costs) {
            double v = 0.0;
            for (std::size_t k = 0; k < c.size(); ++k)
                if (x[k]) v += c[k];
            best = std::max(best, v);
        }
        worst_min = std::min(worst_min, best);
    }
    return worst_min;
}

}  // namespace

TEST_CASE("candidate pools reject duplicates") {
    CandidatePool pool;
    CHECK(pool.add({1, 0, 1}));
    CHECK(!pool.add({1, 0, 1}));
    CHECK(pool.add({0, 1, 1}));
    CHECK(pool.size() == 2);
    CHECK(pool.contains({1, 0, 1}));
}

TEST_CASE("hitting-set fixture reaches objective one") {
    auto pool = theorem1_pool();
    auto boxes = theorem1_boxes();
    MasterSolution sol = master_solve_exact(pool, boxes);
    CHECK(sol.value == doctest::Approx(1.0).epsilon(1e-6));
    // A 0/1 scenario choice covering all three candidate sets.
    for (const auto& c : sol.scenarios)
        for (double v : c) CHECK(std::min(std::abs(v), std::abs(v - 1.0)) <= 1e-6);
    for (const auto& x : pool.solutions) {
        double best = 0.0;
        for (const auto& c : sol.scenarios) {
            double v = 0.0;
            for (int k = 0; k < 7; ++k)
                if (x[k]) v += c[k];
            best = std::max(best, v);
        }
        CHECK(best >= 1.0 - 1e-6);
    }
}

TEST_CASE("single-candidate master raises the worst scenario") {
    Instance inst = section2_instance();
    auto boxes = build_uncertainty(inst, 1.0);
    CandidatePool pool;
    pool.add({1, 0, 0, 1});
    MasterSolution sol = master_solve_exact(pool, boxes);
    CHECK(sol.value == doctest::Approx(10.0));
    CHECK(sol.assignment == std::vector<int>{1});
    for (int i = 0; i < inst.N; ++i) CHECK(boxes[i].contains(sol.scenarios[i]));
}

TEST_CASE("zero budget master reduces to the fixed-cost min-max") {
    Instance inst = section2_instance();
    auto boxes = build_uncertainty(inst, 0.0);
    CandidatePool pool;
    pool.add({1, 0, 0, 1});
    pool.add({0, 1, 0, 1});
    MasterSolution sol = master_solve_exact(pool, boxes);
    CHECK(sol.value == doctest::Approx(pool_min_max(pool, inst.costs)));
    CHECK(sol.scenarios == inst.costs);
}

TEST_CASE("alternating heuristic matches the exact master for one candidate") {
    Instance inst = section2_instance();
    auto boxes = build_uncertainty(inst, 1.0);
    CandidatePool pool;
    pool.add({1, 0, 0, 1});
    MasterSolution sol = master_solve_alternating(pool, boxes, inst.costs);
    CHECK(sol.value == doctest::Approx(10.0));
    for (std::size_t i = 1; i < sol.trace.size(); ++i)
        CHECK(sol.trace[i] >= sol.trace[i - 1] - 1e-9);
}

TEST_CASE("alternating heuristic returns the fixed value under zero budget") {
    Instance inst = section2_instance();
    auto boxes = build_uncertainty(inst, 0.0);
    CandidatePool pool;
    pool.add({1, 0, 0, 1});
    pool.add({0, 0, 1, 1});
    MasterSolution sol = master_solve_alternating(pool, boxes, inst.costs);
    CHECK(sol.value == doctest::Approx(pool_min_max(pool, inst.costs)));
    CHECK(sol.scenarios == inst.costs);
}

TEST_CASE("alternating heuristic never beats the exact master") {
    Rng rng(314);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 4 + static_cast<int>(rng.next_below(4));  // 4..8
        int N = 1 + static_cast<int>(rng.next_below(2));  // 1..3
        int K = 1 + static_cast<int>(rng.next_below(2));  // 1..3
        Instance inst = sample_ru(ProblemKind::Selection, n, N, 100.0, std::max(1, n / 2),
                                  1000 + trial);
        auto boxes = build_uncertainty(inst, 3.0);
        CandidatePool pool = random_pool(inst, K, rng);
        MasterSolution exact = master_solve_exact(pool, boxes);
        MasterSolution heur = master_solve_alternating(pool, boxes, inst.costs);
        CHECK_MESSAGE(heur.value <= exact.value + 1e-6, "trial ", trial);
        // The exact master value equals the pool min-max at its scenarios.
        CHECK(exact.value == doctest::Approx(pool_min_max(pool, exact.scenarios)).epsilon(1e-6));
    }
}

TEST_CASE("generation on the worked fixture reaches the enumeration optimum") {
    Instance inst = section2_instance();
    MroOptions options;
    options.budget = 1.0;

    auto [hardened, run] = mro_generate(inst, options);
    CHECK(run.stop == StopReason::Converged);
    CHECK(run.iterations.size() <= 6);

    double exact_value = robust_solve_exact(hardened).value;
    CHECK(exact_value >= 10.0 - 1e-6);

    // Full-pool master over all six selections is the MRO optimum.
    CandidatePool full;
    SelectionProblem sel(4, 2);
    sel.for_each_feasible([&](const BinaryVec& x) { full.add(x); });
    auto boxes = build_uncertainty(inst, 1.0);
    MasterSolution oracle = master_solve_exact(full, boxes);
    CHECK(exact_value == doctest::Approx(oracle.value).epsilon(1e-6));
    CHECK(oracle.value == doctest::Approx(10.0));

    for (int i = 0; i < inst.N; ++i) CHECK(boxes[i].contains(hardened.costs[i]));
}

TEST_CASE("zero budget returns the input after one iteration") {
    Instance inst = section2_instance();
    MroOptions options;
    options.budget = 0.0;
    auto [hardened, run] = mro_generate(inst, options);
    CHECK(hardened.costs == inst.costs);
    CHECK(run.iterations.size() == 1);
    CHECK(run.stop == StopReason::Converged);
}

TEST_CASE("hardened instances never get easier in exact mode") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        int n = 6 + static_cast<int>(seed % 5);  // 6..10
        int N = 1 + static_cast<int>(seed % 5);  // 1..5
        Instance inst = sample_ru(ProblemKind::Selection, n, N, 100.0, n / 2, seed * 11 + 3);
        MroOptions options;
        options.budget = 2.0;
        auto [hardened, run] = mro_generate(inst, options);
        double before = robust_solve_exact(inst).value;
        double after = robust_solve_exact(hardened).value;
        CHECK_MESSAGE(after >= before - 1e-9, "seed ", seed);
        // Bound monotonicity along the run.
        for (std::size_t t = 0; t + 1 < run.iterations.size(); ++t)
            CHECK(run.iterations[t + 1].upper <= run.iterations[t].upper + 1e-6);
        for (const auto& it : run.iterations) CHECK(it.lower <= it.upper + 1e-6);
        auto boxes = build_uncertainty(inst, 2.0);
        for (int i = 0; i < inst.N; ++i) CHECK(boxes[i].contains(hardened.costs[i]));
    }
}

TEST_CASE("heuristic inner mode stops on repeats and stays feasible") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Instance inst = sample_ru(ProblemKind::Selection, 14, 7, 100.0, 7, seed * 5);
        MroOptions options;
        options.master = MasterMethod::Alternating;
        options.inner = InnerMethod::Heuristic;
        options.budget = 20.0;
        auto [hardened, run] = mro_generate(inst, options);
        CHECK(run.stop != StopReason::TimeLimit);
        auto boxes = build_uncertainty(inst, 20.0);
        for (int i = 0; i < inst.N; ++i) CHECK(boxes[i].contains(hardened.costs[i]));
        hardened.validate();
    }
}

TEST_CASE("tsp instances harden end to end") {
    Instance inst = sample_ru(ProblemKind::Tsp, 25, 5, 100.0, 5, 21);
    MroOptions options;
    options.master = MasterMethod::Alternating;
    options.budget = 5.0;
    auto [hardened, run] = mro_generate(inst, options);
    hardened.validate();
    if (run.stop == StopReason::Converged) {
        double before = robust_solve_exact(inst).value;
        double after = robust_solve_exact(hardened).value;
        CHECK(after >= before - 1e-6);
    }
}
