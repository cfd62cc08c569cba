#include "hardgen/colgen.hpp"

#include "hardgen/lp.hpp"

#include <algorithm>
#include <cmath>

namespace hardgen {

namespace {

double column_value(const Column& column, const BinaryVec& xj) {
    double v = 0.0;
    for (std::size_t k = 0; k < column.cost_vec.size(); ++k)
        if (xj[k]) v += column.cost_vec[k];
    return v;
}

// Deterministic feasible point of a box: start at the lower bounds and push
// coordinates up in index order until the target sum is met.
std::vector<double> box_feasible_point(const UncertaintyBox& box) {
    std::vector<double> c(box.lower);
    double need = box.target_sum;
    for (double v : c) need -= v;
    for (std::size_t k = 0; k < c.size() && need > 1e-12; ++k) {
        double room = box.upper[k] - c[k];
        double step = std::min(room, need);
        c[k] += step;
        need -= step;
    }
    return c;
}

}  // namespace

RmpSolution rmp_solve(const std::vector<Column>& columns, const CandidatePool& pool,
                      const std::vector<UncertaintyBox>& boxes) {
    const int K = pool.size();
    const int N = static_cast<int>(boxes.size());
    const int n = static_cast<int>(boxes.front().lower.size());
    std::vector<std::vector<int>> cols_of(K);
    for (std::size_t p = 0; p < columns.size(); ++p) {
        const Column& col = columns[p];
        if (col.candidate < 0 || col.candidate >= K || col.scenario < 0 || col.scenario >= N)
            throw InvariantError("column references an unknown candidate or scenario");
        cols_of[col.candidate].push_back(static_cast<int>(p));
    }
    for (int j = 0; j < K; ++j)
        if (cols_of[j].empty())
            throw InvariantError("every candidate needs at least one column");

    LpModel lp;
    lp.sense = Sense::Maximize;
    std::vector<int> base_c(N);
    for (int i = 0; i < N; ++i) {
        base_c[i] = lp.num_vars();
        for (int k = 0; k < n; ++k) lp.add_var(boxes[i].lower[k], boxes[i].upper[k], 0.0);
    }
    std::vector<int> alpha_var(columns.size());
    for (std::size_t p = 0; p < columns.size(); ++p) alpha_var[p] = lp.add_var(0.0, kInf, 0.0);
    const int t = lp.add_var(-kInf, kInf, 1.0);
    const int nvars = lp.num_vars();

    // Row order: epigraph per j, convexity per j, linking, scenario sums.
    std::vector<int> epi_row(K), conv_row(K);
    for (int j = 0; j < K; ++j) {
        std::vector<double> row(nvars, 0.0);
        row[t] = 1.0;
        for (int p : cols_of[j]) row[alpha_var[p]] = -column_value(columns[p], pool.solutions[j]);
        epi_row[j] = static_cast<int>(lp.rows.size());
        lp.add_row(std::move(row), Rel::Le, 0.0);
    }
    for (int j = 0; j < K; ++j) {
        std::vector<double> row(nvars, 0.0);
        for (int p : cols_of[j]) row[alpha_var[p]] = 1.0;
        conv_row[j] = static_cast<int>(lp.rows.size());
        lp.add_row(std::move(row), Rel::Eq, 1.0);
    }
    // Linking rows only where a column can load them: candidate j's columns
    // for scenario i, on the support of x^j.
    struct LinkRow { int i, j, k, row; };
    std::vector<LinkRow> links;
    for (int j = 0; j < K; ++j) {
        std::vector<char> uses(N, 0);
        for (int p : cols_of[j]) uses[columns[p].scenario] = 1;
        for (int i = 0; i < N; ++i) {
            if (!uses[i]) continue;
            for (int k = 0; k < n; ++k) {
                if (!pool.solutions[j][k]) continue;
                std::vector<double> row(nvars, 0.0);
                for (int p : cols_of[j])
                    if (columns[p].scenario == i) row[alpha_var[p]] = columns[p].cost_vec[k];
                row[base_c[i] + k] = -1.0;
                links.push_back(LinkRow{i, j, k, static_cast<int>(lp.rows.size())});
                lp.add_row(std::move(row), Rel::Le, 0.0);
            }
        }
    }
    for (int i = 0; i < N; ++i) {
        std::vector<double> row(nvars, 0.0);
        for (int k = 0; k < n; ++k) row[base_c[i] + k] = 1.0;
        lp.add_row(std::move(row), Rel::Eq, boxes[i].target_sum);
    }

    LpOutcome out = solve_lp(lp);
    if (out.status != LpStatus::Optimal)
        throw InvariantError("restricted master infeasible; initial columns must prevent this");

    RmpSolution sol;
    sol.value = out.objective;
    sol.alpha.resize(columns.size());
    for (std::size_t p = 0; p < columns.size(); ++p) sol.alpha[p] = out.primal[alpha_var[p]];
    sol.scenarios.assign(N, std::vector<double>(n, 0.0));
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < n; ++k)
            sol.scenarios[i][k] =
                std::clamp(out.primal[base_c[i] + k], boxes[i].lower[k], boxes[i].upper[k]);
    sol.duals.gamma.resize(K);
    sol.duals.delta.resize(K);
    for (int j = 0; j < K; ++j) {
        sol.duals.gamma[j] = out.dual[epi_row[j]];
        sol.duals.delta[j] = out.dual[conv_row[j]];
    }
    sol.duals.pi.assign(N, std::vector<std::vector<double>>(K, std::vector<double>(n, 0.0)));
    for (const LinkRow& lr : links) sol.duals.pi[lr.i][lr.j][lr.k] = out.dual[lr.row];
    return sol;
}

double column_reduced_cost(const Column& column, const RmpDuals& duals, const BinaryVec& xj) {
    const int j = column.candidate;
    const int i = column.scenario;
    double rc = -duals.delta[j];
    for (std::size_t k = 0; k < column.cost_vec.size(); ++k) {
        if (!xj[k]) continue;
        rc += column.cost_vec[k] * (duals.gamma[j] - duals.pi[i][j][k]);
    }
    return rc;
}

namespace {

// Best cost vector of a single box for a linear objective, subject to the
// fixed coefficient sum.
std::vector<double> best_in_box(const UncertaintyBox& box, const std::vector<double>& weight) {
    const int n = static_cast<int>(box.lower.size());
    LpModel lp;
    lp.sense = Sense::Maximize;
    for (int k = 0; k < n; ++k) lp.add_var(box.lower[k], box.upper[k], weight[k]);
    lp.add_row(std::vector<double>(n, 1.0), Rel::Eq, box.target_sum);
    LpOutcome out = solve_lp(lp);
    if (out.status != LpStatus::Optimal) throw NumericalError("box LP did not solve");
    std::vector<double> c(n);
    for (int k = 0; k < n; ++k) c[k] = std::clamp(out.primal[k], box.lower[k], box.upper[k]);
    return c;
}

}  // namespace

std::optional<Column> price(int j, const RmpDuals& duals,
                            const std::vector<UncertaintyBox>& boxes, const BinaryVec& xj) {
    const int N = static_cast<int>(boxes.size());
    const int n = static_cast<int>(xj.size());
    std::optional<Column> best;
    double best_rc = 1e-6;
    for (int i = 0; i < N; ++i) {
        // Contribution LP: d_k in [0, c_k], maximizing the dual-weighted
        // contribution of assigning scenario i's vector to x^j.
        LpModel lp;
        lp.sense = Sense::Maximize;
        std::vector<int> c_var(n), d_var(n);
        for (int k = 0; k < n; ++k)
            c_var[k] = lp.add_var(boxes[i].lower[k], boxes[i].upper[k], 0.0);
        for (int k = 0; k < n; ++k) {
            const double w = (xj[k] ? duals.gamma[j] : 0.0) - duals.pi[i][j][k];
            d_var[k] = lp.add_var(0.0, kInf, w);
        }
        const int nvars = lp.num_vars();
        {
            std::vector<double> row(nvars, 0.0);
            for (int k = 0; k < n; ++k) row[c_var[k]] = 1.0;
            lp.add_row(std::move(row), Rel::Eq, boxes[i].target_sum);
        }
        for (int k = 0; k < n; ++k) {
            std::vector<double> row(nvars, 0.0);
            row[d_var[k]] = 1.0;
            row[c_var[k]] = -1.0;
            lp.add_row(std::move(row), Rel::Le, 0.0);
        }
        LpOutcome out = solve_lp(lp);
        if (out.status != LpStatus::Optimal) throw NumericalError("pricing LP did not solve");

        Column cand;
        cand.candidate = j;
        cand.scenario = i;
        cand.cost_vec.resize(n);
        for (int k = 0; k < n; ++k)
            cand.cost_vec[k] = std::clamp(out.primal[c_var[k]], boxes[i].lower[k], boxes[i].upper[k]);
        double rc = column_reduced_cost(cand, duals, xj);
        if (rc <= 1e-6) {
            // The contribution relaxation can overshoot under degenerate
            // duals; re-solve for the cost vector maximizing the reduced
            // cost itself.
            std::vector<double> weight(n, 0.0);
            for (int k = 0; k < n; ++k)
                if (xj[k]) weight[k] = duals.gamma[j] - duals.pi[i][j][k];
            Column direct;
            direct.candidate = j;
            direct.scenario = i;
            direct.cost_vec = best_in_box(boxes[i], weight);
            double rc2 = column_reduced_cost(direct, duals, xj);
            if (rc2 > rc) {
                cand = std::move(direct);
                rc = rc2;
            }
        }
        if (rc > best_rc + 1e-12) {
            best = std::move(cand);
            best_rc = rc;
        }
    }
    return best;
}

MasterSolution colgen_master(const CandidatePool& pool,
                             const std::vector<UncertaintyBox>& boxes) {
    if (pool.size() < 1) throw InvariantError("column generation requires a candidate");
    const int K = pool.size();
    const int N = static_cast<int>(boxes.size());

    // One guaranteed-feasible initial column per candidate, generated from a
    // deterministic interior point of the most promising box.
    std::vector<std::vector<double>> anchor(N);
    for (int i = 0; i < N; ++i) anchor[i] = box_feasible_point(boxes[i]);
    std::vector<Column> columns;
    for (int j = 0; j < K; ++j) {
        int pick = 0;
        double best = -kInf;
        for (int i = 0; i < N; ++i) {
            double v = 0.0;
            for (std::size_t k = 0; k < anchor[i].size(); ++k)
                if (pool.solutions[j][k]) v += anchor[i][k];
            if (v > best + 1e-12) {
                best = v;
                pick = i;
            }
        }
        columns.push_back(Column{j, pick, anchor[pick]});
    }

    MasterSolution sol;
    double prev_value = -kInf;
    RmpSolution rmp;
    for (;;) {
        rmp = rmp_solve(columns, pool, boxes);
        if (rmp.value < prev_value - 1e-7)
            throw InvariantError("RMP value decreased after adding columns");
        prev_value = rmp.value;
        sol.trace.push_back(rmp.value);

        std::vector<Column> added;
        for (int j = 0; j < K; ++j) {
            auto col = price(j, rmp.duals, boxes, pool.solutions[j]);
            if (col) added.push_back(std::move(*col));
        }
        if (added.empty()) break;
        for (auto& col : added) columns.push_back(std::move(col));
        if (columns.size() > 10000)
            throw NumericalError("column generation exceeded the 10^4 column cap");
    }

    sol.scenarios = rmp.scenarios;
    sol.value = rmp.value;
    sol.assignment.assign(K, 0);
    for (int j = 0; j < K; ++j) {
        double best = -kInf;
        for (int i = 0; i < N; ++i) {
            double v = 0.0;
            for (int k = 0; k < static_cast<int>(sol.scenarios[i].size()); ++k)
                if (pool.solutions[j][k]) v += sol.scenarios[i][k];
            if (v > best + 1e-12) {
                best = v;
                sol.assignment[j] = i;
            }
        }
    }
    return sol;
}

}  // namespace hardgen
