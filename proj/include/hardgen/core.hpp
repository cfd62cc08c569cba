#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace hardgen {

/// Input data violates a documented invariant (bad sizes, costs out of range, ...).
class InvariantError : public std::runtime_error {
public:
    explicit InvariantError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Instance file could not be parsed; carries the offending position.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int column)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"),
          line(line), column(column) {}
    int line;
    int column;
};

/// Problem is too large for an enumeration-based code path.
class ScaleError : public std::runtime_error {
public:
    explicit ScaleError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An LP solve lost numerical consistency beyond repair.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A time limit fired before any incumbent existed to return.
class TimeLimitError : public std::runtime_error {
public:
    explicit TimeLimitError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class ProblemKind { Selection, Tsp };

std::string to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string& s);

/// A robust optimization instance: one nominal problem plus N scenario cost vectors.
///
/// Selection instances have n items of which p are chosen. TSP instances are
/// complete asymmetric digraphs on m nodes stored as row-major m*m arc cost
/// vectors (n = m*m, diagonal pinned to zero).
struct Instance {
    ProblemKind kind = ProblemKind::Selection;
    int n = 0;        // cost coefficients per scenario
    int N = 0;        // scenarios
    double max_cost = 100.0;  // global coefficient cap C
    int p = 0;        // selection: items to choose
    int m = 0;        // tsp: node count, n == m*m
    std::vector<std::vector<double>> costs;  // N x n

    void validate() const;  // throws InvariantError
};

/// Per-scenario interval box with a fixed coefficient sum.
struct UncertaintyBox {
    std::vector<double> lower;
    std::vector<double> upper;
    double target_sum = 0.0;

    bool contains(const std::vector<double>& c, double tol = 1e-7) const;
};

/// Deterministic xoshiro256** stream seeded through SplitMix64. Identical
/// seeds produce identical streams on every platform; std:: distributions are
/// deliberately not used (their output is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Unbiased uniform draw from {0, ..., bound_inclusive}.
    std::uint64_t next_below(std::uint64_t bound_inclusive);

    /// Uniform in [0, 1).
    double next_unit();

private:
    std::uint64_t state_[4];
};

/// Interval boxes around the instance costs: lower = max(c-b, 0),
/// upper = min(c+b, C), sum fixed to the scenario's original coefficient sum.
/// TSP diagonals stay pinned at zero regardless of the budget.
std::vector<UncertaintyBox> build_uncertainty(const Instance& instance, double budget);

/// i.i.d. uniform integer costs in {0, ..., C}. `p_or_m` is p for selection
/// and the node count m for tsp (where n must equal m*m).
Instance sample_ru(ProblemKind kind, int n, int N, double max_cost, int p_or_m,
                   std::uint64_t seed, bool symmetric = false);

Instance read_instance(std::istream& in);
Instance read_instance_file(const std::string& path);
void write_instance(const Instance& instance, std::ostream& out);
void write_instance_file(const Instance& instance, const std::string& path);

/// Number formatting used by the instance writer (10 significant digits).
std::string format_cost(double value);

}  // namespace hardgen
