#include "hardgen/ldr.hpp"

#include <algorithm>
#include <cmath>

namespace hardgen {

namespace {

constexpr double kRuleBound = 1e6;  // soft bounds keeping rule weights finite

}  // namespace

LpModel LdrTemplate::materialize_lambda_lp(const std::vector<std::vector<double>>& costs) const {
    LpModel lp = model;
    for (const auto& term : terms) {
        const int i = (term.c_var - c0) / n;
        const int k = (term.c_var - c0) % n;
        lp.rows[term.row].coeffs[term.lambda_var] += term.coeff * costs[i][k];
    }
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < n; ++k) {
            const int v = c_var(i, k);
            lp.lower[v] = lp.upper[v] = costs[i][k];
        }
    return lp;
}

LpModel LdrTemplate::materialize_cost_lp(const std::vector<double>& lambda_values) const {
    LpModel lp = model;
    for (const auto& term : terms) {
        const int rel = term.lambda_var - lam_const0;
        lp.rows[term.row].coeffs[term.c_var] += term.coeff * lambda_values[rel];
    }
    for (int v = lam_const0; v < lam_const0 + N + N * n; ++v)
        lp.lower[v] = lp.upper[v] = lambda_values[v - lam_const0];
    return lp;
}

LdrTemplate ldr_build(const Instance& instance, const std::vector<UncertaintyBox>& boxes) {
    instance.validate();
    if (instance.kind != ProblemKind::Selection)
        throw InvariantError("linear decision rules are only available for selection");
    LdrTemplate t;
    t.n = instance.n;
    t.N = instance.N;
    const int n = t.n;
    const int N = t.N;
    const double p = static_cast<double>(instance.p);

    LpModel& lp = t.model;
    lp.sense = Sense::Maximize;
    t.xi0 = lp.num_vars();
    for (int i = 0; i < n * n; ++i) lp.add_var(0.0, kInf, 0.0);
    t.zeta0 = lp.num_vars();
    for (int i = 0; i < n * n; ++i) lp.add_var(0.0, kInf, -1.0);
    t.theta0 = lp.num_vars();
    for (int i = 0; i < n; ++i) lp.add_var(0.0, kInf, -1.0);
    t.eta = lp.add_var(-kInf, kInf, p);
    t.pi = lp.add_var(-kInf, kInf, 0.0);
    t.rho0 = lp.num_vars();
    for (int i = 0; i < n; ++i) lp.add_var(0.0, kInf, 0.0);
    t.alpha0 = lp.num_vars();
    for (int i = 0; i < N; ++i) lp.add_var(-kInf, kInf, 0.0);
    t.beta0 = lp.num_vars();
    for (int i = 0; i < N * n; ++i) lp.add_var(0.0, kInf, 0.0);
    t.lam_const0 = lp.num_vars();
    for (int i = 0; i < N; ++i) lp.add_var(-kRuleBound, kRuleBound, 0.0);
    t.lam_lin0 = lp.num_vars();
    for (int i = 0; i < N * n; ++i) lp.add_var(-kRuleBound, kRuleBound, 0.0);
    t.c0 = lp.num_vars();
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < n; ++k) lp.add_var(boxes[i].lower[k], boxes[i].upper[k], 0.0);
    const int nvars = lp.num_vars();

    // Rule-value rows, one per item: dual activity of the linearized inner
    // minimum must stay below the constant-rule cost mass.
    for (int k = 0; k < n; ++k) {
        std::vector<double> row(nvars, 0.0);
        for (int l = 0; l < n; ++l) {
            row[t.xi(k, l)] += 1.0;
            row[t.xi(l, k)] += 1.0;
            row[t.zeta(k, l)] -= 1.0;
            row[t.zeta(l, k)] -= 1.0;
        }
        row[t.eta] += 1.0;
        row[t.theta(k)] -= 1.0;
        const int r = static_cast<int>(lp.rows.size());
        for (int i = 0; i < N; ++i)
            t.terms.push_back({r, t.lam_const(i), t.c_var(i, k), -1.0});
        lp.add_row(std::move(row), Rel::Le, 0.0);
    }
    // Quadratic-part rows, one per item pair.
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            std::vector<double> row(nvars, 0.0);
            row[t.xi(k, l)] = -2.0;
            row[t.zeta(k, l)] = 1.0;
            const int r = static_cast<int>(lp.rows.size());
            for (int i = 0; i < N; ++i)
                t.terms.push_back({r, t.lam_lin(i, l), t.c_var(i, k), -1.0});
            lp.add_row(std::move(row), Rel::Le, 0.0);
        }
    // Total rule weight at most one over the polytope.
    {
        std::vector<double> row(nvars, 0.0);
        for (int i = 0; i < N; ++i) row[t.lam_const(i)] = 1.0;
        row[t.pi] = p;
        for (int k = 0; k < n; ++k) row[t.rho(k)] = 1.0;
        lp.add_row(std::move(row), Rel::Le, 1.0);
    }
    for (int k = 0; k < n; ++k) {
        std::vector<double> row(nvars, 0.0);
        row[t.pi] = 1.0;
        row[t.rho(k)] = 1.0;
        for (int i = 0; i < N; ++i) row[t.lam_lin(i, k)] = -1.0;
        lp.add_row(std::move(row), Rel::Ge, 0.0);
    }
    // Rule nonnegativity over the polytope, dualized per scenario.
    for (int i = 0; i < N; ++i) {
        std::vector<double> row(nvars, 0.0);
        row[t.lam_const(i)] = 1.0;
        row[t.alpha(i)] = p;
        for (int k = 0; k < n; ++k) row[t.beta(i, k)] = -1.0;
        lp.add_row(std::move(row), Rel::Ge, 0.0);
    }
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < n; ++k) {
            std::vector<double> row(nvars, 0.0);
            row[t.alpha(i)] = 1.0;
            row[t.beta(i, k)] = -1.0;
            row[t.lam_lin(i, k)] = -1.0;
            lp.add_row(std::move(row), Rel::Le, 0.0);
        }
    // Scenario coefficient sums.
    for (int i = 0; i < N; ++i) {
        std::vector<double> row(nvars, 0.0);
        for (int k = 0; k < n; ++k) row[t.c_var(i, k)] = 1.0;
        lp.add_row(std::move(row), Rel::Eq, boxes[i].target_sum);
    }
    return t;
}

LdrResult ldr_solve(const Instance& instance, double budget, int max_iters) {
    const auto boxes = build_uncertainty(instance, budget);
    LdrTemplate t = ldr_build(instance, boxes);
    const int n = t.n;
    const int N = t.N;

    std::vector<std::vector<double>> costs = instance.costs;
    // Uniform constant rule: lam_const = 1/N, linear weights zero.
    std::vector<double> lambda_values(N + N * n, 0.0);
    for (int i = 0; i < N; ++i) lambda_values[i] = 1.0 / N;

    LdrResult result;
    double z_prev = -kInf;
    for (int iter = 0; iter < max_iters; ++iter) {
        LpOutcome cost_step = solve_lp(t.materialize_cost_lp(lambda_values));
        if (cost_step.status != LpStatus::Optimal)
            throw NumericalError("LDR cost-block LP did not solve");
        if (cost_step.objective < z_prev - 1e-6 * (1.0 + std::abs(z_prev)))
            throw InvariantError("LDR objective decreased in the cost block");
        for (int i = 0; i < N; ++i)
            for (int k = 0; k < n; ++k)
                costs[i][k] = std::clamp(cost_step.primal[t.c_var(i, k)], boxes[i].lower[k],
                                         boxes[i].upper[k]);
        result.trace.push_back(cost_step.objective);

        LpModel rule_lp = t.materialize_lambda_lp(costs);
        LpOutcome rule_step = solve_lp(rule_lp);
        if (rule_step.status != LpStatus::Optimal)
            throw NumericalError("LDR rule-block LP did not solve");
        const double tol = 1e-6 * (1.0 + std::abs(rule_step.objective));
        if (rule_step.objective < cost_step.objective - tol)
            throw InvariantError("LDR objective decreased in the rule block");
        double max_weight = 0.0;
        for (int v = 0; v < N + N * n; ++v)
            max_weight = std::max(max_weight, std::abs(rule_step.primal[t.lam_const0 + v]));
        if (max_weight >= kRuleBound * (1.0 - 1e-9))
            throw NumericalError("LDR rule weights are truncated by the soft bound");
        if (max_weight > 10.0) {
            // Degenerate optima can park unused weights far out, which would
            // poison the scaling of the next cost LP. Prefer the smallest
            // weight box that still attains the objective.
            for (double cap : {10.0, 1e3}) {
                LpModel capped = rule_lp;
                for (int v = t.lam_const0; v < t.lam_const0 + N + N * n; ++v) {
                    capped.lower[v] = -cap;
                    capped.upper[v] = cap;
                }
                LpOutcome small = solve_lp(capped);
                if (small.status == LpStatus::Optimal &&
                    small.objective >= rule_step.objective - tol) {
                    rule_step = std::move(small);
                    break;
                }
            }
        }
        for (int v = 0; v < N + N * n; ++v)
            lambda_values[v] = rule_step.primal[t.lam_const0 + v];
        result.trace.push_back(rule_step.objective);
        result.iterations = iter + 1;

        if (rule_step.objective <= z_prev + 1e-9) {
            z_prev = rule_step.objective;
            break;
        }
        z_prev = rule_step.objective;
    }

    result.reported_value = z_prev;
    result.hardened = instance;
    result.hardened.costs = std::move(costs);
    result.hardened.validate();
    return result;
}

}  // namespace hardgen
