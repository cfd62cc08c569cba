#include "hardgen/midgen.hpp"

#include "hardgen/lp.hpp"
#include "hardgen/mro.hpp"
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

struct MidModel {
    LpModel lp;
    int n = 0, N = 0;
    int x0 = 0, lam0 = 0, t0 = 0, c0 = 0, alpha = 0, beta0 = 0, q0 = 0, r0 = 0;

    int x(int k) const { return x0 + k; }
    int lam(int i) const { return lam0 + i; }
    int t(int i) const { return t0 + i; }
    int c(int i, int k) const { return c0 + i * n + k; }
    int beta(int k) const { return beta0 + k; }
    int q(int i) const { return q0 + i; }
    int r(int i, int k) const { return r0 + i * n + k; }
};

MidModel build_mid_model(const Instance& inst, const std::vector<UncertaintyBox>& boxes) {
    MidModel mm;
    mm.n = inst.n;
    mm.N = inst.N;
    const int n = inst.n;
    const int N = inst.N;
    LpModel& lp = mm.lp;
    lp.sense = Sense::Maximize;

    mm.x0 = lp.num_vars();
    for (int k = 0; k < n; ++k) lp.add_var(0.0, 1.0, 0.0);
    mm.lam0 = lp.num_vars();
    for (int i = 0; i < N; ++i) lp.add_var(0.0, 1.0, 0.0);
    mm.t0 = lp.num_vars();
    for (int i = 0; i < N; ++i) lp.add_var(0.0, kInf, 0.0);
    mm.c0 = lp.num_vars();
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < n; ++k) lp.add_var(boxes[i].lower[k], boxes[i].upper[k], 0.0);
    mm.alpha = lp.add_var(0.0, kInf, 0.0);
    mm.beta0 = lp.num_vars();
    for (int k = 0; k < n; ++k) lp.add_var(0.0, kInf, 0.0);
    mm.q0 = lp.num_vars();
    for (int i = 0; i < N; ++i) lp.add_var(0.0, kInf, 1.0);
    mm.r0 = lp.num_vars();
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < n; ++k) lp.add_var(0.0, kInf, 0.0);
    const int nvars = lp.num_vars();

    std::vector<double> big_m(N, 0.0);
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < n; ++k) big_m[i] += boxes[i].upper[k];

    // Scenario value of the midpoint solution: t_i = sum_k r_ik.
    for (int i = 0; i < N; ++i) {
        std::vector<double> row(nvars, 0.0);
        row[mm.t(i)] = 1.0;
        for (int k = 0; k < n; ++k) row[mm.r(i, k)] = -1.0;
        lp.add_row(std::move(row), Rel::Eq, 0.0);
    }
    {
        std::vector<double> row(nvars, 0.0);
        for (int i = 0; i < N; ++i) row[mm.lam(i)] = 1.0;
        lp.add_row(std::move(row), Rel::Eq, 1.0);
    }
    // Primal midpoint value equals the dual value: certifies x optimal for
    // the aggregated scenario.
    {
        std::vector<double> row(nvars, 0.0);
        for (int i = 0; i < N; ++i)
            for (int k = 0; k < n; ++k) row[mm.r(i, k)] = 1.0;
        row[mm.alpha] = -static_cast<double>(inst.p);
        for (int k = 0; k < n; ++k) row[mm.beta(k)] = 1.0;
        lp.add_row(std::move(row), Rel::Eq, 0.0);
    }
    {
        std::vector<double> row(nvars, 0.0);
        for (int k = 0; k < n; ++k) row[mm.x(k)] = 1.0;
        lp.add_row(std::move(row), Rel::Eq, static_cast<double>(inst.p));
    }
    // Dual feasibility of the midpoint LP.
    for (int k = 0; k < n; ++k) {
        std::vector<double> row(nvars, 0.0);
        row[mm.alpha] = 1.0;
        row[mm.beta(k)] = -1.0;
        for (int i = 0; i < N; ++i) row[mm.c(i, k)] = -1.0;
        lp.add_row(std::move(row), Rel::Le, 0.0);
    }
    // q_i = t_i lambda_i, exact at binaries.
    for (int i = 0; i < N; ++i) {
        std::vector<double> row(nvars, 0.0);
        row[mm.q(i)] = 1.0;
        row[mm.t(i)] = -1.0;
        lp.add_row(std::move(row), Rel::Le, 0.0);
        std::vector<double> row2(nvars, 0.0);
        row2[mm.q(i)] = 1.0;
        row2[mm.lam(i)] = -big_m[i];
        lp.add_row(std::move(row2), Rel::Le, 0.0);
    }
    // r_ik = c_ik x_k, exact at binaries. The lower envelope rows keep the
    // duality row above from being satisfied with sagging products.
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < n; ++k) {
            const double ub = boxes[i].upper[k];
            std::vector<double> row(nvars, 0.0);
            row[mm.r(i, k)] = 1.0;
            row[mm.c(i, k)] = -1.0;
            lp.add_row(std::move(row), Rel::Le, 0.0);
            std::vector<double> row2(nvars, 0.0);
            row2[mm.r(i, k)] = 1.0;
            row2[mm.x(k)] = -ub;
            lp.add_row(std::move(row2), Rel::Le, 0.0);
            std::vector<double> row3(nvars, 0.0);
            row3[mm.c(i, k)] = 1.0;
            row3[mm.r(i, k)] = -1.0;
            row3[mm.x(k)] = ub;
            lp.add_row(std::move(row3), Rel::Le, ub);
        }
    for (int i = 0; i < N; ++i) {
        std::vector<double> row(nvars, 0.0);
        for (int k = 0; k < n; ++k) row[mm.c(i, k)] = 1.0;
        lp.add_row(std::move(row), Rel::Eq, boxes[i].target_sum);
    }
    return mm;
}

struct MidNode {
    std::vector<int> fix_x;    // -1 free
    std::vector<int> fix_lam;  // -1 free
};

}  // namespace

MidResult mid_generate(const Instance& instance, double budget,
                       std::optional<double> time_limit_s) {
    instance.validate();
    if (instance.kind != ProblemKind::Selection)
        throw InvariantError("midpoint hardening is only available for selection");
    const auto start = Clock::now();
    const auto boxes = build_uncertainty(instance, budget);
    const MidModel mm = build_mid_model(instance, boxes);
    const int n = instance.n;
    const int N = instance.N;

    MidResult result;
    result.hardened = instance;
    bool have_incumbent = false;
    double best_value = -kInf;
    std::vector<std::vector<double>> best_scenarios;
    BinaryVec best_x;

    std::vector<MidNode> stack;
    stack.push_back(MidNode{std::vector<int>(n, -1), std::vector<int>(N, -1)});
    while (!stack.empty()) {
        if (time_limit_s && elapsed_s(start) > *time_limit_s) {
            result.hit_time_limit = true;
            break;
        }
        MidNode node = std::move(stack.back());
        stack.pop_back();
        ++result.nodes;

        LpModel lp = mm.lp;
        for (int k = 0; k < n; ++k)
            if (node.fix_x[k] >= 0)
                lp.lower[mm.x(k)] = lp.upper[mm.x(k)] = node.fix_x[k];
        for (int i = 0; i < N; ++i)
            if (node.fix_lam[i] >= 0)
                lp.lower[mm.lam(i)] = lp.upper[mm.lam(i)] = node.fix_lam[i];
        LpOutcome out = solve_lp(lp);
        ++result.lp_solves;
        if (out.status != LpStatus::Optimal) continue;
        if (have_incumbent && out.objective <= best_value + 1e-9) continue;

        // x variables branch before lambda, most fractional first.
        int branch = -1;
        bool branch_is_x = true;
        double most_frac = 1e-6;
        for (int k = 0; k < n; ++k) {
            double v = out.primal[mm.x(k)];
            double frac = std::abs(v - std::round(v));
            if (frac > most_frac) {
                most_frac = frac;
                branch = k;
            }
        }
        if (branch < 0) {
            most_frac = 1e-6;
            for (int i = 0; i < N; ++i) {
                double v = out.primal[mm.lam(i)];
                double frac = std::abs(v - std::round(v));
                if (frac > most_frac) {
                    most_frac = frac;
                    branch = i;
                    branch_is_x = false;
                }
            }
        }
        if (branch < 0) {
            if (out.objective > best_value + 1e-12) {
                best_value = out.objective;
                best_x.assign(n, 0);
                for (int k = 0; k < n; ++k)
                    best_x[k] = static_cast<int>(std::round(out.primal[mm.x(k)]));
                best_scenarios.assign(N, std::vector<double>(n, 0.0));
                for (int i = 0; i < N; ++i)
                    for (int k = 0; k < n; ++k)
                        best_scenarios[i][k] = std::clamp(out.primal[mm.c(i, k)],
                                                          boxes[i].lower[k], boxes[i].upper[k]);
                have_incumbent = true;
            }
            continue;
        }
        MidNode zero = node;
        if (branch_is_x)
            zero.fix_x[branch] = 0;
        else
            zero.fix_lam[branch] = 0;
        stack.push_back(std::move(zero));
        if (branch_is_x)
            node.fix_x[branch] = 1;
        else
            node.fix_lam[branch] = 1;
        stack.push_back(std::move(node));
    }

    if (!have_incumbent)
        throw TimeLimitError("time limit reached before any midpoint incumbent was found");
    result.hardened.costs = std::move(best_scenarios);
    result.hardened.validate();
    result.x_hat = std::move(best_x);
    result.value = robust_value(result.hardened, result.x_hat);
    result.proven_optimal = !result.hit_time_limit;

    // Independent certificate: x_hat must solve the midpoint scenario.
    SelectionProblem sel(n, instance.p);
    std::vector<double> mid(n, 0.0);
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < n; ++k) mid[k] += result.hardened.costs[i][k] / N;
    auto nominal = sel.solve_nominal(mid);
    double xhat_value = 0.0;
    for (int k = 0; k < n; ++k)
        if (result.x_hat[k]) xhat_value += mid[k];
    if (xhat_value > nominal.value + 1e-6 * (1.0 + std::abs(nominal.value)))
        throw InvariantError("midpoint generator returned a non-optimal midpoint solution");
    return result;
}

MidQualityReport mid_quality_report(const Instance& instance, double budget) {
    MidQualityReport report;
    auto original = robust_solve_exact(instance);
    report.original_robust = original.value;
    report.original_nodes = original.nodes;

    MidResult mid = mid_generate(instance, budget);
    auto mid_eval = robust_solve_exact(mid.hardened);
    report.mid_robust = mid_eval.value;
    report.mid_nodes = mid_eval.nodes;

    MroOptions options;
    options.master = MasterMethod::Exact;
    options.inner = InnerMethod::Exact;
    options.budget = budget;
    auto [mro_inst, run] = mro_generate(instance, options);
    auto mro_eval = robust_solve_exact(mro_inst);
    report.mro_robust = mro_eval.value;
    report.mro_nodes = mro_eval.nodes;

    report.mid_node_ratio = static_cast<double>(report.mid_nodes) / report.original_nodes;
    report.mro_node_ratio = static_cast<double>(report.mro_nodes) / report.original_nodes;
    report.mid_value_ratio = report.mid_robust / report.original_robust;
    report.mro_value_ratio = report.mro_robust / report.original_robust;
    return report;
}

}  // namespace hardgen
