#pragma once

#include "hardgen/core.hpp"
#include "hardgen/mro.hpp"

#include <optional>

namespace hardgen {

/// One column: a cost vector from scenario `scenario`'s box assigned to
/// candidate `candidate`. Its contribution entries are cost_vec[k] * x[k] on
/// the chosen scenario and zero elsewhere.
struct Column {
    int candidate = 0;
    int scenario = 0;
    std::vector<double> cost_vec;
};

struct RmpDuals {
    std::vector<double> gamma;                          // epigraph rows, per candidate
    std::vector<double> delta;                          // convexity rows, per candidate
    std::vector<std::vector<std::vector<double>>> pi;   // linking rows, [i][j][k]
};

struct RmpSolution {
    double value = 0.0;
    std::vector<double> alpha;                    // per column, order preserved
    std::vector<std::vector<double>> scenarios;   // linking variables c^i
    RmpDuals duals;
};

/// Restricted master LP: epigraph and convexity rows per candidate, linking
/// rows tying column mixtures to the scenario variables, box plus sum rows
/// on the scenario variables. Alpha integrality is dropped throughout.
RmpSolution rmp_solve(const std::vector<Column>& columns, const CandidatePool& pool,
                      const std::vector<UncertaintyBox>& boxes);

/// Reduced cost of a column under the given duals, computed from the column
/// data alone.
double column_reduced_cost(const Column& column, const RmpDuals& duals, const BinaryVec& xj);

/// Pricing for candidate j: one LP per scenario over its box; returns the
/// best column if its reduced cost exceeds 1e-6, otherwise nothing.
std::optional<Column> price(int j, const RmpDuals& duals,
                            const std::vector<UncertaintyBox>& boxes, const BinaryVec& xj);

/// Column generation to convergence; the master solution carries the RMP's
/// linking scenario vectors and value. Note the value is a relaxation and may
/// exceed what any single scenario assignment achieves on the pool.
MasterSolution colgen_master(const CandidatePool& pool,
                             const std::vector<UncertaintyBox>& boxes);

}  // namespace hardgen
