#pragma once

#include "hardgen/core.hpp"
#include "hardgen/problems.hpp"

#include <optional>

namespace hardgen {

struct MidResult {
    Instance hardened;
    double value = 0.0;   // max_i c^i . x_hat, recomputed exactly
    BinaryVec x_hat;      // midpoint-optimal solution certified by the model
    long long nodes = 0;
    long long lp_solves = 0;
    bool proven_optimal = false;
    bool hit_time_limit = false;
};

/// Midpoint-objective hardening: picks scenarios maximizing the worst-case
/// cost of a midpoint-optimal solution, certified through the primal-dual
/// equality of the midpoint LP. Branch and bound over the (x, lambda)
/// binaries with full linearization rows in the LP relaxation. Selection only.
MidResult mid_generate(const Instance& instance, double budget,
                       std::optional<double> time_limit_s = std::nullopt);

struct MidQualityReport {
    double original_robust = 0.0;
    double mid_robust = 0.0;
    double mro_robust = 0.0;
    long long original_nodes = 0;
    long long mid_nodes = 0;
    long long mro_nodes = 0;
    double mid_node_ratio = 0.0;
    double mro_node_ratio = 0.0;
    double mid_value_ratio = 0.0;
    double mro_value_ratio = 0.0;
};

/// Hardens the instance with both the midpoint generator and the exact
/// iterative generator, then evaluates all three instances exactly.
MidQualityReport mid_quality_report(const Instance& instance, double budget);

}  // namespace hardgen
