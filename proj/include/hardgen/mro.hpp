#pragma once

#include "hardgen/core.hpp"
#include "hardgen/problems.hpp"

#include <optional>
#include <string>

namespace hardgen {

/// Distinct feasible candidate solutions accumulated by the iterative scheme.
struct CandidatePool {
    std::vector<BinaryVec> solutions;

    bool contains(const BinaryVec& x) const;
    /// Returns false (and leaves the pool unchanged) for duplicates.
    bool add(BinaryVec x);
    int size() const { return static_cast<int>(solutions.size()); }
};

struct MasterSolution {
    std::vector<std::vector<double>> scenarios;  // N x n, one vector per box
    std::vector<int> assignment;                 // scenario index per candidate
    double value = 0.0;
    /// Per-iteration objective trace (alternating heuristic / column
    /// generation); empty for the exact master.
    std::vector<double> trace;
};

enum class MasterMethod { Exact, Alternating, ColGen };
enum class InnerMethod { Exact, Heuristic };
enum class StopReason { Converged, TimeLimit, RepeatCandidate };

std::string to_string(StopReason reason);

struct MroIteration {
    double upper = 0.0;
    double lower = 0.0;
    BinaryVec new_candidate;
};

struct MroRun {
    std::vector<MroIteration> iterations;
    StopReason stop = StopReason::Converged;
    double generation_time = 0.0;  // seconds
    long long inner_nodes = 0;     // accumulated over all inner solves
};

/// Globally optimal restricted master: best scenario-to-candidate assignment
/// with jointly optimized scenario vectors. Exhaustive over assignments when
/// N^K <= 10^4, depth-first branch-and-bound with LP bounds otherwise.
MasterSolution master_solve_exact(const CandidatePool& pool,
                                  const std::vector<UncertaintyBox>& boxes,
                                  std::optional<double> time_limit_s = std::nullopt);

/// Alternating heuristic: argmax scenario assignment for fixed costs, joint
/// scenario LP for fixed assignment, until the objective stops improving.
MasterSolution master_solve_alternating(const CandidatePool& pool,
                                        const std::vector<UncertaintyBox>& boxes,
                                        const std::vector<std::vector<double>>& init_costs);

struct MroOptions {
    MasterMethod master = MasterMethod::Exact;
    InnerMethod inner = InnerMethod::Exact;
    double budget = 1.0;
    std::optional<double> time_limit_s;    // checked between iterations only
    std::optional<double> inner_time_limit_s;
};

/// The full hardening loop: seed the pool with the inner solve of the
/// original costs, then alternate master and inner solves until the bounds
/// meet, a candidate repeats, or the between-iteration time limit fires.
/// The returned instance carries the incumbent master scenarios.
std::pair<Instance, MroRun> mro_generate(const Instance& instance, const MroOptions& options);

}  // namespace hardgen
