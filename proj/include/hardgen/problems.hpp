#pragma once

#include "hardgen/core.hpp"
#include "hardgen/lp.hpp"

#include <functional>
#include <memory>
#include <optional>

namespace hardgen {

using BinaryVec = std::vector<int>;

struct NominalSolution {
    BinaryVec x;
    double value = 0.0;
};

/// Linear rows describing a polyhedron X' over [0,1]^n whose LP minima match
/// the combinatorial minima of X for every cost vector.
struct Polyhedron {
    std::vector<LpRow> rows;
};

/// A nominal combinatorial problem plugged into the robust machinery. New
/// problems implement this interface; nothing else in the library changes.
class NominalProblem {
public:
    virtual ~NominalProblem() = default;

    virtual int dimension() const = 0;

    /// Optimal x in X minimizing cost . x, deterministic tie-breaking.
    virtual NominalSolution solve_nominal(const std::vector<double>& cost) const = 0;

    /// Integral relaxation polyhedron, when one is available for this problem.
    virtual std::optional<Polyhedron> polyhedron() const = 0;

    /// Repairs a fractional point into a feasible solution.
    virtual BinaryVec round_fractional(const std::vector<double>& x_frac) const = 0;

    /// Visits every feasible solution exactly once, lexicographic order.
    /// Throws ScaleError beyond desk scale.
    virtual void for_each_feasible(const std::function<void(const BinaryVec&)>& fn) const = 0;

    virtual bool is_feasible(const BinaryVec& x) const = 0;

    virtual std::uint64_t count_feasible() const = 0;
};

class SelectionProblem final : public NominalProblem {
public:
    SelectionProblem(int n, int p);

    int dimension() const override { return n_; }
    NominalSolution solve_nominal(const std::vector<double>& cost) const override;
    std::optional<Polyhedron> polyhedron() const override;
    BinaryVec round_fractional(const std::vector<double>& x_frac) const override;
    void for_each_feasible(const std::function<void(const BinaryVec&)>& fn) const override;
    bool is_feasible(const BinaryVec& x) const override;
    std::uint64_t count_feasible() const override;

    int items() const { return n_; }
    int picks() const { return p_; }

private:
    int n_, p_;
};

/// Directed tour visiting every node once, starting at node 0.
struct Tour {
    std::vector<int> order;

    double cost(const std::vector<double>& arc_costs, int m) const;
    BinaryVec to_arcs(int m) const;
    static Tour from_arcs(const BinaryVec& x, int m);
};

class TspProblem final : public NominalProblem {
public:
    explicit TspProblem(int m);

    int dimension() const override { return m_ * m_; }
    NominalSolution solve_nominal(const std::vector<double>& cost) const override;
    std::optional<Polyhedron> polyhedron() const override { return std::nullopt; }
    BinaryVec round_fractional(const std::vector<double>& x_frac) const override;
    void for_each_feasible(const std::function<void(const BinaryVec&)>& fn) const override;
    bool is_feasible(const BinaryVec& x) const override;
    std::uint64_t count_feasible() const override;

    /// Held-Karp exact solve; m <= 18.
    Tour solve_tour(const std::vector<double>& cost) const;

    int nodes() const { return m_; }

private:
    int m_;
};

std::unique_ptr<NominalProblem> make_problem(const Instance& instance);

}  // namespace hardgen
