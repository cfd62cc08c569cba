#pragma once

#include "hardgen/core.hpp"
#include "hardgen/problems.hpp"

#include <optional>

namespace hardgen {

struct RobustResult {
    BinaryVec x;
    double value = 0.0;
    long long nodes = 0;      // branch-and-bound nodes expanded
    long long lp_solves = 0;
    double wall_time = 0.0;   // seconds
    bool proven_optimal = false;
    bool hit_time_limit = false;
};

/// Exact worst case max_i c^i . x of a feasible solution.
double robust_value(const Instance& instance, const BinaryVec& x);

/// Deterministic exact min-max solve. Selection: branch-and-bound on item
/// inclusion with epigraph LP bounds. TSP: path-prefix branch-and-bound with
/// a cheapest-outgoing-arc bound; subtours are impossible by construction,
/// which plays the role of lazy subtour elimination.
/// On timeout the incumbent is returned with proven_optimal = false; if no
/// incumbent exists yet a NumericalError is thrown.
RobustResult robust_solve_exact(const Instance& instance,
                                std::optional<double> time_limit_s = std::nullopt);

/// LP relaxation of the epigraph model over the problem's relaxation
/// polytope (selection: the integral polyhedron; tsp: the assignment
/// relaxation without subtour cuts), rounded to a feasible solution. The
/// value is recomputed exactly on the rounded point.
RobustResult robust_solve_heuristic(const Instance& instance);

/// Robust objective values of every feasible solution, sorted ascending.
std::vector<double> sorted_objective_vector(const Instance& instance);

}  // namespace hardgen
