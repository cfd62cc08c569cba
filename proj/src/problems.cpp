#include "hardgen/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hardgen {

namespace {

std::uint64_t binomial(int n, int p) {
    if (p < 0 || p > n) return 0;
    p = std::min(p, n - p);
    std::uint64_t result = 1;
    for (int i = 1; i <= p; ++i) {
        // n-p+i <= n <= 100 keeps this well inside 64 bits for desk scales,
        // but cap anyway so callers get a clean ScaleError.
        if (result > (1ULL << 62) / static_cast<std::uint64_t>(n)) return 1ULL << 63;
        result = result * static_cast<std::uint64_t>(n - p + i) / static_cast<std::uint64_t>(i);
    }
    return result;
}

}  // namespace

SelectionProblem::SelectionProblem(int n, int p) : n_(n), p_(p) {
    if (n < 1 || p < 1 || p > n)
        throw InvariantError("selection requires 1 <= p <= n");
}

NominalSolution SelectionProblem::solve_nominal(const std::vector<double>& cost) const {
    if (static_cast<int>(cost.size()) != n_)
        throw InvariantError("cost vector has wrong dimension");
    std::vector<int> idx(n_);
    std::iota(idx.begin(), idx.end(), 0);
    // p cheapest items, ties broken by lowest index.
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return cost[a] < cost[b]; });
    NominalSolution sol;
    sol.x.assign(n_, 0);
    for (int r = 0; r < p_; ++r) {
        sol.x[idx[r]] = 1;
        sol.value += cost[idx[r]];
    }
    return sol;
}

std::optional<Polyhedron> SelectionProblem::polyhedron() const {
    Polyhedron poly;
    poly.rows.push_back(LpRow{std::vector<double>(n_, 1.0), Rel::Eq, static_cast<double>(p_)});
    return poly;
}

BinaryVec SelectionProblem::round_fractional(const std::vector<double>& x_frac) const {
    if (static_cast<int>(x_frac.size()) != n_)
        throw InvariantError("fractional point has wrong dimension");
    std::vector<int> idx(n_);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return x_frac[a] > x_frac[b]; });
    BinaryVec x(n_, 0);
    for (int r = 0; r < p_; ++r) x[idx[r]] = 1;
    return x;
}

void SelectionProblem::for_each_feasible(const std::function<void(const BinaryVec&)>& fn) const {
    if (count_feasible() > 1000000ULL)
        throw ScaleError("too many selections to enumerate");
    std::vector<int> comb(p_);
    std::iota(comb.begin(), comb.end(), 0);
    BinaryVec x(n_, 0);
    for (;;) {
        std::fill(x.begin(), x.end(), 0);
        for (int i : comb) x[i] = 1;
        fn(x);
        int i = p_ - 1;
        while (i >= 0 && comb[i] == n_ - p_ + i) --i;
        if (i < 0) break;
        ++comb[i];
        for (int j = i + 1; j < p_; ++j) comb[j] = comb[j - 1] + 1;
    }
}

bool SelectionProblem::is_feasible(const BinaryVec& x) const {
    if (static_cast<int>(x.size()) != n_) return false;
    int count = 0;
    for (int v : x) {
        if (v != 0 && v != 1) return false;
        count += v;
    }
    return count == p_;
}

std::uint64_t SelectionProblem::count_feasible() const { return binomial(n_, p_); }

double Tour::cost(const std::vector<double>& arc_costs, int m) const {
    double total = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        int u = order[i];
        int v = order[(i + 1) % order.size()];
        total += arc_costs[u * m + v];
    }
    return total;
}

BinaryVec Tour::to_arcs(int m) const {
    BinaryVec x(m * m, 0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        int u = order[i];
        int v = order[(i + 1) % order.size()];
        x[u * m + v] = 1;
    }
    return x;
}

Tour Tour::from_arcs(const BinaryVec& x, int m) {
    std::vector<int> succ(m, -1);
    for (int u = 0; u < m; ++u)
        for (int v = 0; v < m; ++v)
            if (u != v && x[u * m + v]) {
                if (succ[u] != -1) throw InvariantError("arc vector has out-degree above one");
                succ[u] = v;
            }
    Tour tour;
    tour.order.reserve(m);
    std::vector<char> seen(m, 0);
    int cur = 0;
    for (int step = 0; step < m; ++step) {
        if (cur < 0 || seen[cur]) throw InvariantError("arc vector is not a single tour");
        seen[cur] = 1;
        tour.order.push_back(cur);
        cur = succ[cur];
    }
    if (cur != 0) throw InvariantError("arc vector does not close the tour");
    return tour;
}

TspProblem::TspProblem(int m) : m_(m) {
    if (m < 3) throw InvariantError("tsp requires m >= 3");
}

Tour TspProblem::solve_tour(const std::vector<double>& cost) const {
    if (m_ > 18) throw ScaleError("Held-Karp solve limited to m <= 18");
    if (static_cast<int>(cost.size()) != m_ * m_)
        throw InvariantError("cost vector has wrong dimension");
    const int k = m_ - 1;  // nodes 1..m-1 mapped to bits 0..k-1
    const std::size_t nmask = 1ULL << k;
    // f[mask][u]: cheapest path from node u+1 visiting exactly `mask`, then
    // returning to node 0. Entry point handled separately below.
    std::vector<double> f(nmask * k);
    for (int u = 0; u < k; ++u) f[u] = cost[(u + 1) * m_ + 0];
    for (std::size_t mask = 1; mask < nmask; ++mask) {
        for (int u = 0; u < k; ++u) {
            if (mask & (1ULL << u)) continue;
            double best = kInf;
            for (int v = 0; v < k; ++v) {
                if (!(mask & (1ULL << v))) continue;
                double cand = cost[(u + 1) * m_ + (v + 1)] + f[(mask ^ (1ULL << v)) * k + v];
                if (cand < best) best = cand;
            }
            f[mask * k + u] = best;
        }
    }

    Tour tour;
    tour.order.push_back(0);
    std::size_t mask = nmask - 1;
    int cur = 0;  // node index in 0..m-1
    while (mask) {
        int pick = -1;
        double best = kInf;
        for (int v = 0; v < k; ++v) {
            if (!(mask & (1ULL << v))) continue;
            double cand = cost[cur * m_ + (v + 1)] + f[(mask ^ (1ULL << v)) * k + v];
            if (cand < best) {  // strict: lowest successor wins ties
                best = cand;
                pick = v;
            }
        }
        tour.order.push_back(pick + 1);
        mask ^= 1ULL << pick;
        cur = pick + 1;
    }
    return tour;
}

NominalSolution TspProblem::solve_nominal(const std::vector<double>& cost) const {
    Tour tour = solve_tour(cost);
    NominalSolution sol;
    sol.x = tour.to_arcs(m_);
    sol.value = tour.cost(cost, m_);
    return sol;
}

BinaryVec TspProblem::round_fractional(const std::vector<double>& x_frac) const {
    if (static_cast<int>(x_frac.size()) != m_ * m_)
        throw InvariantError("fractional point has wrong dimension");
    // Grow a single path from node 0, always taking the heaviest fractional
    // arc to an unvisited node; lowest index wins ties.
    Tour tour;
    tour.order.push_back(0);
    std::vector<char> seen(m_, 0);
    seen[0] = 1;
    int cur = 0;
    for (int step = 1; step < m_; ++step) {
        int pick = -1;
        double best = -1.0;
        for (int v = 0; v < m_; ++v) {
            if (seen[v]) continue;
            double w = x_frac[cur * m_ + v];
            if (w > best + 1e-12) {
                best = w;
                pick = v;
            }
        }
        tour.order.push_back(pick);
        seen[pick] = 1;
        cur = pick;
    }
    return tour.to_arcs(m_);
}

void TspProblem::for_each_feasible(const std::function<void(const BinaryVec&)>& fn) const {
    if (m_ > 8) throw ScaleError("tour enumeration limited to m <= 8");
    std::vector<int> perm(m_ - 1);
    std::iota(perm.begin(), perm.end(), 1);
    Tour tour;
    do {
        tour.order.clear();
        tour.order.push_back(0);
        tour.order.insert(tour.order.end(), perm.begin(), perm.end());
        fn(tour.to_arcs(m_));
    } while (std::next_permutation(perm.begin(), perm.end()));
}

bool TspProblem::is_feasible(const BinaryVec& x) const {
    if (static_cast<int>(x.size()) != m_ * m_) return false;
    for (int v : x)
        if (v != 0 && v != 1) return false;
    try {
        Tour::from_arcs(x, m_);
    } catch (const InvariantError&) {
        return false;
    }
    return true;
}

std::uint64_t TspProblem::count_feasible() const {
    std::uint64_t f = 1;
    for (int i = 2; i < m_; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

std::unique_ptr<NominalProblem> make_problem(const Instance& instance) {
    if (instance.kind == ProblemKind::Selection)
        return std::make_unique<SelectionProblem>(instance.n, instance.p);
    return std::make_unique<TspProblem>(instance.m);
}

}  // namespace hardgen
