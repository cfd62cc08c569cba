#include "hardgen/mro.hpp"

#include "hardgen/colgen.hpp"
#include "hardgen/lp.hpp"
#include "hardgen/robust.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace hardgen {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

bool CandidatePool::contains(const BinaryVec& x) const {
    return std::find(solutions.begin(), solutions.end(), x) != solutions.end();
}

bool CandidatePool::add(BinaryVec x) {
    if (contains(x)) return false;
    solutions.push_back(std::move(x));
    return true;
}

std::string to_string(StopReason reason) {
    switch (reason) {
        case StopReason::Converged: return "converged";
        case StopReason::TimeLimit: return "time_limit";
        case StopReason::RepeatCandidate: return "repeat_candidate";
    }
    return "unknown";
}

namespace {

struct AssignmentLp {
    double value = -kInf;
    bool feasible = false;
    std::vector<std::vector<double>> scenarios;  // only filled when requested
};

// Joint scenario LP for a (partial) assignment: max t s.t. t <= c^{a(j)} x^j
// for every assigned candidate, c^i in box i. Unassigned candidates are
// dropped; `all_scenarios` additionally materializes boxes without epigraph
// rows so the primal carries a complete scenario set.
AssignmentLp solve_assignment_lp(const CandidatePool& pool,
                                 const std::vector<UncertaintyBox>& boxes,
                                 const std::vector<int>& assignment, bool all_scenarios) {
    const int N = static_cast<int>(boxes.size());
    const int n = static_cast<int>(boxes.front().lower.size());
    std::vector<char> used(N, 0);
    for (int a : assignment)
        if (a >= 0) used[a] = 1;
    if (all_scenarios) std::fill(used.begin(), used.end(), 1);

    LpModel lp;
    lp.sense = Sense::Maximize;
    std::vector<int> base(N, -1);
    for (int i = 0; i < N; ++i) {
        if (!used[i]) continue;
        base[i] = lp.num_vars();
        for (int k = 0; k < n; ++k) lp.add_var(boxes[i].lower[k], boxes[i].upper[k], 0.0);
    }
    const int t = lp.add_var(-kInf, kInf, 1.0);
    const int nvars = lp.num_vars();
    for (int i = 0; i < N; ++i) {
        if (!used[i]) continue;
        std::vector<double> row(nvars, 0.0);
        for (int k = 0; k < n; ++k) row[base[i] + k] = 1.0;
        lp.add_row(std::move(row), Rel::Eq, boxes[i].target_sum);
    }
    bool any_row = false;
    for (std::size_t j = 0; j < assignment.size(); ++j) {
        const int a = assignment[j];
        if (a < 0) continue;
        std::vector<double> row(nvars, 0.0);
        row[t] = 1.0;
        for (int k = 0; k < n; ++k)
            if (pool.solutions[j][k]) row[base[a] + k] = -1.0;
        lp.add_row(std::move(row), Rel::Le, 0.0);
        any_row = true;
    }
    if (!any_row) throw InvariantError("assignment LP needs at least one assigned candidate");

    LpOutcome out = solve_lp(lp);
    AssignmentLp result;
    if (out.status != LpStatus::Optimal) return result;  // empty box combinations
    result.feasible = true;
    result.value = out.objective;
    if (all_scenarios) {
        result.scenarios.assign(N, std::vector<double>(n, 0.0));
        for (int i = 0; i < N; ++i)
            for (int k = 0; k < n; ++k)
                result.scenarios[i][k] =
                    std::clamp(out.primal[base[i] + k], boxes[i].lower[k], boxes[i].upper[k]);
    }
    return result;
}

}  // namespace

MasterSolution master_solve_exact(const CandidatePool& pool,
                                  const std::vector<UncertaintyBox>& boxes,
                                  std::optional<double> time_limit_s) {
    if (pool.size() < 1) throw InvariantError("master requires at least one candidate");
    if (boxes.empty()) throw InvariantError("master requires at least one scenario box");
    const int K = pool.size();
    const int N = static_cast<int>(boxes.size());
    const auto start = Clock::now();

    double npow = 1.0;
    for (int j = 0; j < K; ++j) npow *= N;

    std::vector<int> best_assignment;
    double best_value = -kInf;

    if (npow <= 1e4) {
        std::vector<int> assignment(K, 0);
        for (;;) {
            AssignmentLp lp = solve_assignment_lp(pool, boxes, assignment, false);
            if (lp.feasible && lp.value > best_value + 1e-12) {
                best_value = lp.value;
                best_assignment = assignment;
            }
            int j = K - 1;
            while (j >= 0 && assignment[j] == N - 1) assignment[j--] = 0;
            if (j < 0) break;
            ++assignment[j];
        }
    } else {
        // Depth-first branch and bound over the assignment vector. The bound
        // drops unassigned candidates, which can only relax the problem.
        struct Frame {
            std::vector<int> assignment;
            int depth;
        };
        std::vector<Frame> stack;
        stack.push_back(Frame{std::vector<int>(K, -1), 0});
        while (!stack.empty()) {
            if (time_limit_s && elapsed_s(start) > *time_limit_s && !best_assignment.empty())
                break;
            Frame frame = std::move(stack.back());
            stack.pop_back();
            if (frame.depth > 0) {
                AssignmentLp lp = solve_assignment_lp(pool, boxes, frame.assignment, false);
                if (!lp.feasible) continue;
                if (frame.depth == K) {
                    if (lp.value > best_value + 1e-12) {
                        best_value = lp.value;
                        best_assignment = frame.assignment;
                    }
                    continue;
                }
                if (!best_assignment.empty() && lp.value <= best_value + 1e-9) continue;
            }
            // Push children in reverse so scenario 0 is explored first.
            for (int i = N - 1; i >= 0; --i) {
                Frame child = frame;
                child.assignment[frame.depth] = i;
                ++child.depth;
                stack.push_back(std::move(child));
            }
        }
    }

    if (best_assignment.empty()) throw NumericalError("master solve found no assignment");
    AssignmentLp final_lp = solve_assignment_lp(pool, boxes, best_assignment, true);
    if (!final_lp.feasible) throw NumericalError("master final LP infeasible");

    MasterSolution sol;
    sol.scenarios = std::move(final_lp.scenarios);
    sol.assignment = std::move(best_assignment);
    sol.value = final_lp.value;
    return sol;
}

namespace {

std::vector<int> argmax_assignment(const CandidatePool& pool,
                                   const std::vector<std::vector<double>>& costs) {
    const int K = pool.size();
    const int N = static_cast<int>(costs.size());
    std::vector<int> assignment(K, 0);
    for (int j = 0; j < K; ++j) {
        double best = -kInf;
        for (int i = 0; i < N; ++i) {
            double v = 0.0;
            for (std::size_t k = 0; k < costs[i].size(); ++k)
                if (pool.solutions[j][k]) v += costs[i][k];
            if (v > best + 1e-12) {  // lowest index wins ties
                best = v;
                assignment[j] = i;
            }
        }
    }
    return assignment;
}

}  // namespace

MasterSolution master_solve_alternating(const CandidatePool& pool,
                                        const std::vector<UncertaintyBox>& boxes,
                                        const std::vector<std::vector<double>>& init_costs) {
    if (pool.size() < 1) throw InvariantError("master requires at least one candidate");
    if (init_costs.size() != boxes.size())
        throw InvariantError("initial costs must provide one vector per scenario");
    for (std::size_t i = 0; i < boxes.size(); ++i)
        if (!boxes[i].contains(init_costs[i]))
            throw InvariantError("initial cost vector outside its uncertainty box");

    MasterSolution sol;
    sol.scenarios = init_costs;
    double z_prev = -kInf;
    const int iter_cap = 1000;
    for (int iter = 0; iter < iter_cap; ++iter) {
        sol.assignment = argmax_assignment(pool, sol.scenarios);
        AssignmentLp lp = solve_assignment_lp(pool, boxes, sol.assignment, true);
        if (!lp.feasible) throw NumericalError("alternating master LP infeasible");
        if (lp.value < z_prev - 1e-7)
            throw InvariantError("alternating heuristic objective decreased");
        sol.scenarios = std::move(lp.scenarios);
        sol.value = lp.value;
        sol.trace.push_back(lp.value);
        if (lp.value <= z_prev + 1e-9) break;
        z_prev = lp.value;
    }
    return sol;
}

std::pair<Instance, MroRun> mro_generate(const Instance& instance, const MroOptions& options) {
    instance.validate();
    const auto start = Clock::now();
    const auto boxes = build_uncertainty(instance, options.budget);

    auto inner_solve = [&](const Instance& inst) -> RobustResult {
        if (options.inner == InnerMethod::Exact)
            return robust_solve_exact(inst, options.inner_time_limit_s);
        return robust_solve_heuristic(inst);
    };

    MroRun run;
    RobustResult seed = inner_solve(instance);
    run.inner_nodes += seed.nodes;
    CandidatePool pool;
    pool.add(seed.x);

    Instance hardened = instance;
    double prev_upper = kInf;
    const bool exact_master = options.master == MasterMethod::Exact;
    const bool exact_inner = options.inner == InnerMethod::Exact;

    for (;;) {
        if (options.time_limit_s && elapsed_s(start) > *options.time_limit_s) {
            run.stop = StopReason::TimeLimit;
            break;
        }
        MasterSolution master;
        switch (options.master) {
            case MasterMethod::Exact:
                master = master_solve_exact(pool, boxes);
                break;
            case MasterMethod::Alternating:
                master = master_solve_alternating(pool, boxes, instance.costs);
                break;
            case MasterMethod::ColGen:
                master = colgen_master(pool, boxes);
                break;
        }
        hardened.costs = master.scenarios;
        RobustResult inner = inner_solve(hardened);
        run.inner_nodes += inner.nodes;

        MroIteration it;
        it.upper = master.value;
        it.lower = inner.value;
        it.new_candidate = inner.x;
        run.iterations.push_back(it);

        if (exact_master) {
            if (master.value > prev_upper + 1e-6)
                throw InvariantError("exact master upper bound increased");
            prev_upper = master.value;
            if (exact_inner && inner.proven_optimal && inner.value > master.value + 1e-6)
                throw InvariantError("lower bound exceeded the master upper bound");
        }
        if (exact_inner && inner.proven_optimal &&
            master.value - inner.value <= 1e-6) {
            run.stop = StopReason::Converged;
            break;
        }
        if (pool.contains(inner.x)) {
            run.stop = StopReason::RepeatCandidate;
            break;
        }
        pool.add(inner.x);
    }

    run.generation_time = elapsed_s(start);
    hardened.validate();
    return {std::move(hardened), std::move(run)};
}

}  // namespace hardgen
