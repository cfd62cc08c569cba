#include "hardgen/robust.hpp"

#include "hardgen/lp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace hardgen {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Epigraph LP over the selection polytope with branch-fixed items: variables
// x in [0,1]^n (some pinned) plus t, minimizing t s.t. t >= c^j x.
LpModel selection_epigraph_lp(const Instance& inst, const std::vector<int>& fixed) {
    LpModel lp;
    lp.sense = Sense::Minimize;
    for (int k = 0; k < inst.n; ++k) {
        double lo = 0.0, hi = 1.0;
        if (fixed[k] == 0) hi = 0.0;
        if (fixed[k] == 1) lo = 1.0;
        lp.add_var(lo, hi, 0.0);
    }
    const int t = lp.add_var(-kInf, kInf, 1.0);
    std::vector<double> ones(inst.n + 1, 1.0);
    ones[t] = 0.0;
    lp.add_row(ones, Rel::Eq, static_cast<double>(inst.p));
    for (int j = 0; j < inst.N; ++j) {
        std::vector<double> row(inst.n + 1, 0.0);
        for (int k = 0; k < inst.n; ++k) row[k] = inst.costs[j][k];
        row[t] = -1.0;
        lp.add_row(std::move(row), Rel::Le, 0.0);
    }
    return lp;
}

struct SelectionNode {
    std::vector<int> fixed;  // -1 free, 0 out, 1 in
};

RobustResult solve_exact_selection(const Instance& inst, std::optional<double> limit) {
    const auto start = Clock::now();
    RobustResult best;
    bool have_incumbent = false;

    std::vector<SelectionNode> stack;
    stack.push_back(SelectionNode{std::vector<int>(inst.n, -1)});
    RobustResult result;
    while (!stack.empty()) {
        if (limit && elapsed_s(start) > *limit) {
            result.hit_time_limit = true;
            break;
        }
        SelectionNode node = std::move(stack.back());
        stack.pop_back();
        ++result.nodes;

        LpOutcome lp = solve_lp(selection_epigraph_lp(inst, node.fixed));
        ++result.lp_solves;
        if (lp.status != LpStatus::Optimal) continue;  // branch fixings infeasible
        if (have_incumbent && lp.objective >= best.value - 1e-9) continue;

        int branch_var = -1;
        double most_frac = 1e-6;
        for (int k = 0; k < inst.n; ++k) {
            double frac = std::abs(lp.primal[k] - std::round(lp.primal[k]));
            if (frac > most_frac) {
                most_frac = frac;
                branch_var = k;
            }
        }
        if (branch_var < 0) {
            BinaryVec x(inst.n);
            for (int k = 0; k < inst.n; ++k) x[k] = static_cast<int>(std::round(lp.primal[k]));
            double value = robust_value(inst, x);
            if (!have_incumbent || value < best.value) {
                best.x = std::move(x);
                best.value = value;
                have_incumbent = true;
            }
            continue;
        }
        // Depth-first, x_k = 1 explored first.
        SelectionNode out = node;
        out.fixed[branch_var] = 0;
        stack.push_back(std::move(out));
        node.fixed[branch_var] = 1;
        stack.push_back(std::move(node));
    }

    if (!have_incumbent)
        throw TimeLimitError("time limit reached before any incumbent was found");
    result.x = best.x;
    result.value = best.value;
    result.proven_optimal = !result.hit_time_limit;
    result.wall_time = elapsed_s(start);
    return result;
}

struct TspSearch {
    const Instance& inst;
    int m;
    std::optional<double> limit;
    Clock::time_point start;
    RobustResult result;
    BinaryVec best_x;
    double best_value = kInf;
    bool have_incumbent = false;
    std::vector<int> path;
    std::vector<char> visited;
    std::vector<double> prefix_cost;  // per scenario
    bool aborted = false;

    explicit TspSearch(const Instance& inst_, std::optional<double> limit_)
        : inst(inst_), m(inst_.m), limit(limit_), start(Clock::now()) {
        visited.assign(m, 0);
        prefix_cost.assign(inst.N, 0.0);
        path.push_back(0);
        visited[0] = 1;
    }

    // Worst-case lower bound: prefix cost plus, per unvisited node, its
    // cheapest arc into the still-allowed targets (other unvisited or back
    // to the depot).
    double bound() const {
        double worst = 0.0;
        for (int j = 0; j < inst.N; ++j) {
            double b = prefix_cost[j];
            for (int u = 1; u < m; ++u) {
                if (visited[u]) continue;
                double cheapest = kInf;
                for (int v = 0; v < m; ++v) {
                    if (v == u) continue;
                    if (v != 0 && visited[v]) continue;
                    cheapest = std::min(cheapest, inst.costs[j][u * m + v]);
                }
                b += cheapest;
            }
            worst = std::max(worst, b);
        }
        return worst;
    }

    void expand() {
        if (aborted) return;
        if (limit && elapsed_s(start) > *limit) {
            aborted = true;
            return;
        }
        ++result.nodes;
        if (static_cast<int>(path.size()) == m) {
            const int last = path.back();
            double value = 0.0;
            for (int j = 0; j < inst.N; ++j)
                value = std::max(value, prefix_cost[j] + inst.costs[j][last * m + 0]);
            if (value < best_value) {
                best_value = value;
                Tour tour;
                tour.order = path;
                best_x = tour.to_arcs(m);
                have_incumbent = true;
            }
            return;
        }
        if (have_incumbent && bound() >= best_value - 1e-9) return;
        const int last = path.back();
        for (int v = 1; v < m; ++v) {
            if (visited[v]) continue;
            path.push_back(v);
            visited[v] = 1;
            for (int j = 0; j < inst.N; ++j) prefix_cost[j] += inst.costs[j][last * m + v];
            expand();
            for (int j = 0; j < inst.N; ++j) prefix_cost[j] -= inst.costs[j][last * m + v];
            visited[v] = 0;
            path.pop_back();
            if (aborted) return;
        }
    }
};

RobustResult solve_exact_tsp(const Instance& inst, std::optional<double> limit) {
    TspSearch search(inst, limit);
    search.expand();
    if (!search.have_incumbent)
        throw TimeLimitError("time limit reached before any incumbent was found");
    RobustResult result = std::move(search.result);
    result.x = std::move(search.best_x);
    result.value = robust_value(inst, result.x);
    result.hit_time_limit = search.aborted;
    result.proven_optimal = !search.aborted;
    result.wall_time = elapsed_s(search.start);
    return result;
}

}  // namespace

double robust_value(const Instance& instance, const BinaryVec& x) {
    if (static_cast<int>(x.size()) != instance.n)
        throw InvariantError("solution vector has wrong dimension");
    double worst = -kInf;
    for (int j = 0; j < instance.N; ++j) {
        double v = 0.0;
        for (int k = 0; k < instance.n; ++k)
            if (x[k]) v += instance.costs[j][k];
        worst = std::max(worst, v);
    }
    return worst;
}

RobustResult robust_solve_exact(const Instance& instance, std::optional<double> time_limit_s) {
    instance.validate();
    if (instance.kind == ProblemKind::Selection) {
        if (instance.n > 100) throw ScaleError("exact selection solve limited to n <= 100");
        return solve_exact_selection(instance, time_limit_s);
    }
    if (instance.m > 14) throw ScaleError("exact tsp solve limited to m <= 14");
    return solve_exact_tsp(instance, time_limit_s);
}

RobustResult robust_solve_heuristic(const Instance& instance) {
    instance.validate();
    const auto start = Clock::now();
    RobustResult result;
    auto problem = make_problem(instance);

    LpModel lp;
    lp.sense = Sense::Minimize;
    std::vector<double> frac;
    if (instance.kind == ProblemKind::Selection) {
        for (int k = 0; k < instance.n; ++k) lp.add_var(0.0, 1.0, 0.0);
        const int t = lp.add_var(-kInf, kInf, 1.0);
        std::vector<double> ones(instance.n + 1, 1.0);
        ones[t] = 0.0;
        lp.add_row(ones, Rel::Eq, static_cast<double>(instance.p));
        for (int j = 0; j < instance.N; ++j) {
            std::vector<double> row(instance.n + 1, 0.0);
            for (int k = 0; k < instance.n; ++k) row[k] = instance.costs[j][k];
            row[t] = -1.0;
            lp.add_row(std::move(row), Rel::Le, 0.0);
        }
        LpOutcome out = solve_lp(lp);
        ++result.lp_solves;
        if (out.status != LpStatus::Optimal)
            throw NumericalError("selection relaxation did not solve");
        frac.assign(out.primal.begin(), out.primal.begin() + instance.n);
    } else {
        // Assignment relaxation: in/out degree one, arcs in [0,1], no
        // subtour constraints.
        const int m = instance.m;
        std::vector<int> arc_var(m * m, -1);
        for (int u = 0; u < m; ++u)
            for (int v = 0; v < m; ++v)
                if (u != v) arc_var[u * m + v] = lp.add_var(0.0, 1.0, 0.0);
        const int t = lp.add_var(-kInf, kInf, 1.0);
        const int nvars = lp.num_vars();
        for (int u = 0; u < m; ++u) {
            std::vector<double> row(nvars, 0.0);
            for (int v = 0; v < m; ++v)
                if (u != v) row[arc_var[u * m + v]] = 1.0;
            lp.add_row(std::move(row), Rel::Eq, 1.0);
        }
        for (int v = 0; v < m; ++v) {
            std::vector<double> row(nvars, 0.0);
            for (int u = 0; u < m; ++u)
                if (u != v) row[arc_var[u * m + v]] = 1.0;
            lp.add_row(std::move(row), Rel::Eq, 1.0);
        }
        for (int j = 0; j < instance.N; ++j) {
            std::vector<double> row(nvars, 0.0);
            for (int a = 0; a < m * m; ++a)
                if (arc_var[a] >= 0) row[arc_var[a]] = instance.costs[j][a];
            row[t] = -1.0;
            lp.add_row(std::move(row), Rel::Le, 0.0);
        }
        LpOutcome out = solve_lp(lp);
        ++result.lp_solves;
        if (out.status != LpStatus::Optimal)
            throw NumericalError("assignment relaxation did not solve");
        frac.assign(m * m, 0.0);
        for (int a = 0; a < m * m; ++a)
            if (arc_var[a] >= 0) frac[a] = out.primal[arc_var[a]];
    }

    result.x = problem->round_fractional(frac);
    result.value = robust_value(instance, result.x);
    result.proven_optimal = false;
    result.wall_time = elapsed_s(start);
    return result;
}

std::vector<double> sorted_objective_vector(const Instance& instance) {
    instance.validate();
    auto problem = make_problem(instance);
    std::vector<double> values;
    problem->for_each_feasible(
        [&](const BinaryVec& x) { values.push_back(robust_value(instance, x)); });
    std::sort(values.begin(), values.end());
    return values;
}

}  // namespace hardgen
