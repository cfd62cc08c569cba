#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hardgen/core.hpp"
#include "hardgen/lp.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace hardgen;

TEST_CASE("two bounded variables") {
    LpModel lp;
    lp.sense = Sense::Maximize;
    lp.add_var(0.0, kInf, 1.0);
    lp.add_var(0.0, kInf, 1.0);
    lp.add_row({1.0, 0.0}, Rel::Le, 1.0);
    lp.add_row({0.0, 1.0}, Rel::Le, 2.0);
    auto out = solve_lp(lp);
    REQUIRE(out.status == LpStatus::Optimal);
    CHECK(out.objective == doctest::Approx(3.0));
    CHECK(out.primal[0] == doctest::Approx(1.0));
    CHECK(out.primal[1] == doctest::Approx(2.0));
    // Shadow prices of both rows are one for this maximization.
    CHECK(out.dual[0] == doctest::Approx(1.0));
    CHECK(out.dual[1] == doctest::Approx(1.0));
}

TEST_CASE("epigraph over a budget box") {
    // max t, t <= c1 + c4 with c in the budget box around (4,7,4,4), b=1 and
    // a fixed coefficient sum of 19.
    LpModel lp;
    lp.sense = Sense::Maximize;
    lp.add_var(3.0, 5.0, 0.0);
    lp.add_var(6.0, 8.0, 0.0);
    lp.add_var(3.0, 5.0, 0.0);
    lp.add_var(3.0, 5.0, 0.0);
    int t = lp.add_var(-kInf, kInf, 1.0);
    lp.add_row({1.0, 1.0, 1.0, 1.0, 0.0}, Rel::Eq, 19.0);
    std::vector<double> row(5, 0.0);
    row[t] = 1.0;
    row[0] = -1.0;
    row[3] = -1.0;
    lp.add_row(std::move(row), Rel::Le, 0.0);
    auto out = solve_lp(lp);
    REQUIRE(out.status == LpStatus::Optimal);
    CHECK(out.objective == doctest::Approx(10.0));
    // The paper's hardened scenario (5,6,3,5) attains the same value.
    CHECK(5.0 + 5.0 == doctest::Approx(out.objective));
}

TEST_CASE("unsatisfiable coefficient sums are infeasible") {
    LpModel lp;
    lp.sense = Sense::Maximize;
    lp.add_var(0.0, 2.0, 1.0);
    lp.add_var(0.0, 2.0, 0.0);
    lp.add_row({1.0, 1.0}, Rel::Eq, 10.0);
    auto out = solve_lp(lp);
    CHECK(out.status == LpStatus::Infeasible);
}

TEST_CASE("unbounded rays are detected") {
    LpModel lp;
    lp.sense = Sense::Maximize;
    lp.add_var(0.0, kInf, 1.0);
    lp.add_var(0.0, 1.0, 0.0);
    lp.add_row({1.0, -1.0}, Rel::Ge, 0.0);
    auto out = solve_lp(lp);
    CHECK(out.status == LpStatus::Unbounded);

    LpModel no_rows;
    no_rows.sense = Sense::Minimize;
    no_rows.add_var(-kInf, 5.0, 1.0);
    CHECK(solve_lp(no_rows).status == LpStatus::Unbounded);
}

TEST_CASE("free variables and equality rows") {
    // min x + y s.t. x + y = 4, x - y >= 1, y free in [-10, 10].
    LpModel lp;
    lp.sense = Sense::Minimize;
    lp.add_var(-kInf, kInf, 1.0);
    lp.add_var(-10.0, 10.0, 1.0);
    lp.add_row({1.0, 1.0}, Rel::Eq, 4.0);
    lp.add_row({1.0, -1.0}, Rel::Ge, 1.0);
    auto out = solve_lp(lp);
    REQUIRE(out.status == LpStatus::Optimal);
    CHECK(out.objective == doctest::Approx(4.0));
}

TEST_CASE("random small LPs match the vertex enumeration oracle") {
    Rng rng(2024);
    int optimal_count = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int nvars = 2 + static_cast<int>(rng.next_below(4));   // 2..6
        const int nrows = 1 + static_cast<int>(rng.next_below(5));   // 1..6
        LpModel lp;
        lp.sense = rng.next_below(1) ? Sense::Maximize : Sense::Minimize;
        for (int j = 0; j < nvars; ++j) {
            double lo = static_cast<double>(rng.next_below(3));
            double hi = lo + 1.0 + static_cast<double>(rng.next_below(4));
            double obj = static_cast<double>(rng.next_below(10)) - 5.0;
            lp.add_var(lo, hi, obj);
        }
        for (int r = 0; r < nrows; ++r) {
            std::vector<double> coeffs(nvars);
            for (auto& c : coeffs) c = static_cast<double>(rng.next_below(10)) - 5.0;
            Rel rel = Rel::Le;
            auto pick = rng.next_below(3);
            if (pick == 1) rel = Rel::Ge;
            if (pick == 2) rel = Rel::Eq;
            double rhs = static_cast<double>(rng.next_below(20)) - 5.0;
            lp.add_row(std::move(coeffs), rel, rhs);
        }
        auto oracle = test::lp_vertex_oracle(lp);
        auto out = solve_lp(lp);
        if (out.status == LpStatus::Optimal) {
            ++optimal_count;
            REQUIRE_MESSAGE(oracle.has_value(), "oracle found no vertex on trial ", trial);
            CHECK_MESSAGE(std::abs(out.objective - *oracle) <= 1e-6 * (1.0 + std::abs(*oracle)),
                          "trial ", trial, ": simplex ", out.objective, " oracle ", *oracle);
        } else {
            CHECK_MESSAGE(!oracle.has_value(), "trial ", trial,
                          ": simplex infeasible but oracle found ", *oracle);
        }
    }
    CHECK(optimal_count > 50);  // the generator must exercise the optimal path
}

TEST_CASE("duals are sign-consistent with row relations") {
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const int nvars = 2 + static_cast<int>(rng.next_below(3));
        const int nrows = 1 + static_cast<int>(rng.next_below(3));
        LpModel lp;
        lp.sense = rng.next_below(1) ? Sense::Maximize : Sense::Minimize;
        for (int j = 0; j < nvars; ++j)
            lp.add_var(0.0, 1.0 + static_cast<double>(rng.next_below(4)),
                       static_cast<double>(rng.next_below(10)) - 5.0);
        for (int r = 0; r < nrows; ++r) {
            std::vector<double> coeffs(nvars);
            for (auto& c : coeffs) c = static_cast<double>(rng.next_below(10)) - 5.0;
            Rel rel = rng.next_below(1) ? Rel::Le : Rel::Ge;
            lp.add_row(std::move(coeffs), rel, static_cast<double>(rng.next_below(10)) - 2.0);
        }
        auto out = solve_lp(lp);
        if (out.status != LpStatus::Optimal) continue;
        const double sign = lp.sense == Sense::Maximize ? 1.0 : -1.0;
        for (std::size_t r = 0; r < lp.rows.size(); ++r) {
            if (lp.rows[r].rel == Rel::Le) CHECK(sign * out.dual[r] >= -1e-6);
            if (lp.rows[r].rel == Rel::Ge) CHECK(sign * out.dual[r] <= 1e-6);
        }
    }
}

TEST_CASE("degenerate duplicated rows still solve") {
    LpModel lp;
    lp.sense = Sense::Maximize;
    lp.add_var(0.0, 5.0, 1.0);
    lp.add_var(0.0, 5.0, 1.0);
    for (int rep = 0; rep < 4; ++rep) lp.add_row({1.0, 1.0}, Rel::Le, 4.0);
    lp.add_row({1.0, -1.0}, Rel::Le, 0.0);
    auto out = solve_lp(lp);
    REQUIRE(out.status == LpStatus::Optimal);
    CHECK(out.objective == doctest::Approx(4.0));
}
