#pragma once

#include "hardgen/core.hpp"
#include "hardgen/lp.hpp"

#include <vector>

namespace hardgen {

/// Dualized linear-decision-rule model for Selection. The LpModel holds every
/// row with the bilinear rule-times-cost entries omitted; `terms` lists where
/// those products belong so either block can be fixed and materialized.
struct LdrTemplate {
    LpModel model;
    struct Bilinear {
        int row;
        int lambda_var;
        int c_var;
        double coeff;
    };
    std::vector<Bilinear> terms;

    int n = 0;
    int N = 0;

    // Variable layout offsets.
    int xi0 = 0, zeta0 = 0, theta0 = 0, eta = 0, pi = 0, rho0 = 0;
    int alpha0 = 0, beta0 = 0, lam_const0 = 0, lam_lin0 = 0, c0 = 0;

    int xi(int k, int l) const { return xi0 + k * n + l; }
    int zeta(int k, int l) const { return zeta0 + k * n + l; }
    int theta(int k) const { return theta0 + k; }
    int rho(int k) const { return rho0 + k; }
    int alpha(int i) const { return alpha0 + i; }
    int beta(int i, int k) const { return beta0 + i * n + k; }
    int lam_const(int i) const { return lam_const0 + i; }
    int lam_lin(int i, int k) const { return lam_lin0 + i * n + k; }
    int c_var(int i, int k) const { return c0 + i * n + k; }

    // Row family sizes, in row order.
    int rows_rule_value() const { return n; }        // one per item
    int rows_rule_quadratic() const { return n * n; }
    int rows_weight_budget() const { return 1; }
    int rows_weight_items() const { return n; }
    int rows_nonneg_rule() const { return N; }
    int rows_nonneg_items() const { return n * N; }
    int rows_scenario_sums() const { return N; }

    /// LP with the cost block fixed at `costs`, rule and dual blocks free.
    LpModel materialize_lambda_lp(const std::vector<std::vector<double>>& costs) const;
    /// LP with the rule block fixed, cost and dual blocks free.
    LpModel materialize_cost_lp(const std::vector<double>& lambda_values) const;
};

/// Builds the template; selection only.
LdrTemplate ldr_build(const Instance& instance, const std::vector<UncertaintyBox>& boxes);

struct LdrResult {
    Instance hardened;
    double reported_value = 0.0;
    int iterations = 0;
    std::vector<double> trace;  // objective after every half-step
};

/// Block alternation on the dualized model: cost block first against the
/// uniform constant rule, then rule block, until improvement dies out. The
/// reported value never exceeds the exact robust optimum of the output
/// scenarios.
LdrResult ldr_solve(const Instance& instance, double budget, int max_iters = 100);

}  // namespace hardgen
