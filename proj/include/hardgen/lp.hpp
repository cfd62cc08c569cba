#pragma once

#include <limits>
#include <vector>

namespace hardgen {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { Minimize, Maximize };
enum class Rel { Le, Eq, Ge };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpRow {
    std::vector<double> coeffs;  // dense, one entry per variable
    Rel rel = Rel::Le;
    double rhs = 0.0;
};

/// Generic bounded-variable linear program. Bounds may be +-infinity.
struct LpModel {
    Sense sense = Sense::Maximize;
    std::vector<double> objective;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<LpRow> rows;

    int num_vars() const { return static_cast<int>(objective.size()); }

    /// Appends a variable and returns its index.
    int add_var(double lo, double hi, double obj = 0.0) {
        objective.push_back(obj);
        lower.push_back(lo);
        upper.push_back(hi);
        return num_vars() - 1;
    }

    void add_row(std::vector<double> coeffs, Rel rel, double rhs) {
        rows.push_back(LpRow{std::move(coeffs), rel, rhs});
    }
};

struct LpOutcome {
    LpStatus status = LpStatus::Optimal;
    double objective = 0.0;
    std::vector<double> primal;  // one value per variable
    /// Shadow prices in the model's own sense: dual[i] = d(objective)/d(rhs[i]).
    /// For a maximization, Le rows have dual >= 0 and Ge rows dual <= 0;
    /// signs flip for a minimization. Eq rows are free.
    std::vector<double> dual;
};

/// Bounded-variable primal simplex (dense). Deterministic: Dantzig pricing
/// with lowest-index tie-breaks, switching to Bland's rule after 500
/// degenerate pivots. Feasibility tolerance 1e-7, reduced-cost tolerance 1e-9.
/// Throws NumericalError if the solve cannot be certified after retries.
LpOutcome solve_lp(const LpModel& model);

}  // namespace hardgen
