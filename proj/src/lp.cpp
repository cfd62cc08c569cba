#include "hardgen/lp.hpp"

#include "hardgen/core.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>

namespace hardgen {

namespace {

constexpr double kFeasTol = 1e-7;
constexpr double kOptTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kDegenerateStep = 1e-10;
constexpr int kBlandThreshold = 500;
constexpr int kRefactorInterval = 64;

enum class VarStatus { Basic, AtLower, AtUpper, FreeNonbasic };

// Bounded-variable primal simplex over the equation form A x + s = b, with a
// dense explicit basis inverse. Artificial columns are added where the
// initial slack basis is infeasible and removed by a phase-1 objective.
class Simplex {
public:
    explicit Simplex(const LpModel& model) : model_(model) { build(); }

    LpOutcome run() {
        for (int attempt = 0; attempt < 3; ++attempt) {
            LpStatus status = iterate_to_completion();
            if (status != LpStatus::Optimal) {
                LpOutcome out;
                out.status = status;
                return out;
            }
            if (certify()) return extract();
            // Lost consistency: rebuild the inverse and force Bland's rule.
            refactorize();
            recompute_basics();
            bland_ = true;
        }
        throw NumericalError("simplex failed to certify an optimal basis");
    }

private:
    const LpModel& model_;
    int nstruct_ = 0;
    int nrows_ = 0;
    int ncols_ = 0;  // structural + slacks + artificials

    std::vector<std::vector<double>> acol_;  // column-major constraint matrix
    std::vector<double> lo_, hi_, cost_, phase1_cost_;
    std::vector<double> rhs_;
    std::vector<VarStatus> stat_;
    std::vector<double> xval_;
    std::vector<int> basis_;
    std::vector<double> binv_;  // nrows x nrows, row-major
    bool in_phase1_ = false;
    bool bland_ = false;
    int degenerate_pivots_ = 0;
    int pivots_since_refactor_ = 0;

    double binv(int r, int c) const { return binv_[static_cast<std::size_t>(r) * nrows_ + c]; }
    double& binv(int r, int c) { return binv_[static_cast<std::size_t>(r) * nrows_ + c]; }

    void build() {
        nstruct_ = model_.num_vars();
        nrows_ = static_cast<int>(model_.rows.size());
        if (static_cast<int>(model_.lower.size()) != nstruct_ ||
            static_cast<int>(model_.upper.size()) != nstruct_)
            throw InvariantError("LP bounds must match the variable count");

        const double flip = model_.sense == Sense::Maximize ? -1.0 : 1.0;
        ncols_ = nstruct_ + nrows_;
        acol_.assign(ncols_, std::vector<double>(nrows_, 0.0));
        lo_.resize(ncols_);
        hi_.resize(ncols_);
        cost_.assign(ncols_, 0.0);
        rhs_.resize(nrows_);

        for (int j = 0; j < nstruct_; ++j) {
            lo_[j] = model_.lower[j];
            hi_[j] = model_.upper[j];
            if (lo_[j] > hi_[j])
                throw InvariantError("LP variable has lower bound above upper bound");
            cost_[j] = flip * model_.objective[j];
            if (!std::isfinite(cost_[j]))
                throw InvariantError("LP objective coefficients must be finite");
        }
        for (int i = 0; i < nrows_; ++i) {
            const LpRow& row = model_.rows[i];
            if (static_cast<int>(row.coeffs.size()) != nstruct_)
                throw InvariantError("LP row has wrong coefficient count");
            if (!std::isfinite(row.rhs)) throw InvariantError("LP rhs must be finite");
            for (int j = 0; j < nstruct_; ++j) {
                if (!std::isfinite(row.coeffs[j]))
                    throw InvariantError("LP coefficients must be finite");
                acol_[j][i] = row.coeffs[j];
            }
            rhs_[i] = row.rhs;
            const int s = nstruct_ + i;
            acol_[s][i] = 1.0;
            switch (row.rel) {
                case Rel::Le: lo_[s] = 0.0; hi_[s] = kInf; break;
                case Rel::Ge: lo_[s] = -kInf; hi_[s] = 0.0; break;
                case Rel::Eq: lo_[s] = 0.0; hi_[s] = 0.0; break;
            }
        }

        stat_.assign(ncols_, VarStatus::AtLower);
        xval_.assign(ncols_, 0.0);
        for (int j = 0; j < nstruct_; ++j) {
            if (std::isfinite(lo_[j])) {
                stat_[j] = VarStatus::AtLower;
                xval_[j] = lo_[j];
            } else if (std::isfinite(hi_[j])) {
                stat_[j] = VarStatus::AtUpper;
                xval_[j] = hi_[j];
            } else {
                stat_[j] = VarStatus::FreeNonbasic;
                xval_[j] = 0.0;
            }
        }

        basis_.assign(nrows_, -1);
        std::vector<double> residual(nrows_, 0.0);
        for (int i = 0; i < nrows_; ++i) {
            double r = rhs_[i];
            for (int j = 0; j < nstruct_; ++j)
                if (xval_[j] != 0.0) r -= acol_[j][i] * xval_[j];
            residual[i] = r;
        }

        bool need_phase1 = false;
        for (int i = 0; i < nrows_; ++i) {
            const int s = nstruct_ + i;
            if (residual[i] >= lo_[s] - kFeasTol && residual[i] <= hi_[s] + kFeasTol) {
                basis_[i] = s;
                stat_[s] = VarStatus::Basic;
                xval_[s] = residual[i];
            } else {
                xval_[s] = 0.0;
                stat_[s] = residual[i] > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
                const double sigma = residual[i] > 0 ? 1.0 : -1.0;
                const int a = ncols_++;
                acol_.emplace_back(nrows_, 0.0);
                acol_[a][i] = sigma;
                lo_.push_back(0.0);
                hi_.push_back(kInf);
                cost_.push_back(0.0);
                stat_.push_back(VarStatus::Basic);
                xval_.push_back(std::abs(residual[i]));
                basis_[i] = a;
                need_phase1 = true;
            }
        }
        phase1_cost_.assign(ncols_, 0.0);
        for (int j = nstruct_ + nrows_; j < ncols_; ++j) phase1_cost_[j] = 1.0;
        in_phase1_ = need_phase1;

        binv_.assign(static_cast<std::size_t>(nrows_) * nrows_, 0.0);
        refactorize();
        recompute_basics();
    }

    const std::vector<double>& active_cost() const { return in_phase1_ ? phase1_cost_ : cost_; }

    bool is_fixed(int j) const { return lo_[j] == hi_[j]; }

    void refactorize() {
        if (nrows_ == 0) return;
        // Gauss-Jordan inversion of the basis matrix with partial pivoting.
        std::vector<double> work(static_cast<std::size_t>(nrows_) * 2 * nrows_, 0.0);
        auto w = [&](int r, int c) -> double& {
            return work[static_cast<std::size_t>(r) * 2 * nrows_ + c];
        };
        for (int r = 0; r < nrows_; ++r) {
            const auto& col = acol_[basis_[r]];
            for (int i = 0; i < nrows_; ++i) w(i, r) = col[i];
            w(r, nrows_ + r) = 1.0;
        }
        for (int c = 0; c < nrows_; ++c) {
            int piv = c;
            for (int r = c + 1; r < nrows_; ++r)
                if (std::abs(w(r, c)) > std::abs(w(piv, c))) piv = r;
            if (std::abs(w(piv, c)) < 1e-12)
                throw NumericalError("singular basis during refactorization");
            if (piv != c)
                for (int k = 0; k < 2 * nrows_; ++k) std::swap(w(piv, k), w(c, k));
            const double inv = 1.0 / w(c, c);
            for (int k = 0; k < 2 * nrows_; ++k) w(c, k) *= inv;
            for (int r = 0; r < nrows_; ++r) {
                if (r == c) continue;
                const double f = w(r, c);
                if (f == 0.0) continue;
                for (int k = 0; k < 2 * nrows_; ++k) w(r, k) -= f * w(c, k);
            }
        }
        for (int r = 0; r < nrows_; ++r)
            for (int c = 0; c < nrows_; ++c) binv(r, c) = w(r, nrows_ + c);
        pivots_since_refactor_ = 0;
    }

    void recompute_basics() {
        if (nrows_ == 0) return;
        std::vector<double> adj(rhs_);
        for (int j = 0; j < ncols_; ++j) {
            if (stat_[j] == VarStatus::Basic || xval_[j] == 0.0) continue;
            const auto& col = acol_[j];
            for (int i = 0; i < nrows_; ++i)
                if (col[i] != 0.0) adj[i] -= col[i] * xval_[j];
        }
        for (int r = 0; r < nrows_; ++r) {
            double v = 0.0;
            for (int i = 0; i < nrows_; ++i) v += binv(r, i) * adj[i];
            xval_[basis_[r]] = v;
        }
    }

    std::vector<double> compute_duals(const std::vector<double>& costs) const {
        std::vector<double> y(nrows_, 0.0);
        for (int i = 0; i < nrows_; ++i) {
            double v = 0.0;
            for (int r = 0; r < nrows_; ++r) {
                const double cb = costs[basis_[r]];
                if (cb != 0.0) v += cb * binv(r, i);
            }
            y[i] = v;
        }
        return y;
    }

    double reduced_cost(int j, const std::vector<double>& y) const {
        double d = active_cost()[j];
        const auto& col = acol_[j];
        for (int i = 0; i < nrows_; ++i)
            if (col[i] != 0.0) d -= y[i] * col[i];
        return d;
    }

    // Entering score: positive when moving j in its admissible direction
    // decreases the (internal, minimized) objective.
    double entering_score(int j, double d) const {
        switch (stat_[j]) {
            case VarStatus::AtLower: return -d;
            case VarStatus::AtUpper: return d;
            case VarStatus::FreeNonbasic: return std::abs(d);
            case VarStatus::Basic: return 0.0;
        }
        return 0.0;
    }

    LpStatus iterate_to_completion() {
        const long long iter_cap = 2000LL + 200LL * (nrows_ + ncols_);
        long long iters = 0;
        for (;;) {
            if (++iters > iter_cap) {
                refactorize();
                recompute_basics();
                if (++iters > 4 * iter_cap)
                    throw NumericalError("simplex iteration limit exceeded");
            }
            const auto y = compute_duals(active_cost());
            int enter = -1;
            double enter_d = 0.0, best_score = kOptTol;
            for (int j = 0; j < ncols_; ++j) {
                if (stat_[j] == VarStatus::Basic || is_fixed(j)) continue;
                const double d = reduced_cost(j, y);
                const double score = entering_score(j, d);
                if (score > best_score) {
                    enter = j;
                    enter_d = d;
                    best_score = score;
                    if (bland_) break;  // first improving index
                }
            }
            if (enter < 0) {
                if (in_phase1_) {
                    if (phase1_objective() > kFeasTol * (1.0 + rhs_scale()))
                        return LpStatus::Infeasible;
                    finish_phase1();
                    continue;
                }
                return LpStatus::Optimal;
            }

            const double dir =
                (stat_[enter] == VarStatus::AtUpper || (stat_[enter] == VarStatus::FreeNonbasic && enter_d > 0))
                    ? -1.0
                    : 1.0;
            std::vector<double> w(nrows_, 0.0);
            const auto& col = acol_[enter];
            for (int r = 0; r < nrows_; ++r) {
                double v = 0.0;
                for (int i = 0; i < nrows_; ++i) v += binv(r, i) * col[i];
                w[r] = v;
            }

            double best_t = kInf;
            if (std::isfinite(lo_[enter]) && std::isfinite(hi_[enter]))
                best_t = hi_[enter] - lo_[enter];
            int leave_row = -1;
            double leave_pivot = 0.0;
            for (int r = 0; r < nrows_; ++r) {
                const double wr = dir * w[r];
                if (std::abs(wr) <= kPivotTol) continue;
                const int bj = basis_[r];
                double bound, t;
                if (wr > 0) {
                    bound = lo_[bj];
                    if (!std::isfinite(bound)) continue;
                    t = (xval_[bj] - bound) / wr;
                } else {
                    bound = hi_[bj];
                    if (!std::isfinite(bound)) continue;
                    t = (xval_[bj] - bound) / wr;
                }
                if (t < 0) t = 0;
                bool take = false;
                if (t < best_t - 1e-12) {
                    take = true;
                } else if (t < best_t + 1e-12 && leave_row >= 0) {
                    if (bland_) {
                        take = basis_[r] < basis_[leave_row];
                    } else if (std::abs(wr) > std::abs(leave_pivot) + 1e-12) {
                        take = true;
                    } else if (std::abs(wr) > std::abs(leave_pivot) - 1e-12 &&
                               basis_[r] < basis_[leave_row]) {
                        take = true;
                    }
                }
                if (take) {
                    best_t = t;
                    leave_row = r;
                    leave_pivot = wr;
                }
            }

            if (!std::isfinite(best_t)) {
                if (in_phase1_)
                    throw NumericalError("phase-1 objective unbounded (inconsistent state)");
                return LpStatus::Unbounded;
            }

            if (leave_row < 0) {
                // The entering variable flips to its opposite bound.
                xval_[enter] = dir > 0 ? hi_[enter] : lo_[enter];
                stat_[enter] = dir > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
                recompute_basics();
                continue;
            }

            const int leave = basis_[leave_row];
            stat_[leave] = dir * w[leave_row] > 0 ? VarStatus::AtLower : VarStatus::AtUpper;
            xval_[leave] = stat_[leave] == VarStatus::AtLower ? lo_[leave] : hi_[leave];
            xval_[enter] += dir * best_t;
            basis_[leave_row] = enter;
            stat_[enter] = VarStatus::Basic;

            // Product-form update of the inverse.
            const double piv = w[leave_row];
            const double inv = 1.0 / piv;
            for (int c = 0; c < nrows_; ++c) binv(leave_row, c) *= inv;
            for (int r = 0; r < nrows_; ++r) {
                if (r == leave_row) continue;
                const double f = w[r];
                if (f == 0.0) continue;
                for (int c = 0; c < nrows_; ++c) binv(r, c) -= f * binv(leave_row, c);
            }
            if (++pivots_since_refactor_ >= kRefactorInterval) refactorize();
            recompute_basics();

            if (best_t <= kDegenerateStep && ++degenerate_pivots_ >= kBlandThreshold)
                bland_ = true;
        }
    }

    double phase1_objective() const {
        double v = 0.0;
        for (int j = nstruct_ + nrows_; j < ncols_; ++j) v += xval_[j];
        return v;
    }

    double rhs_scale() const {
        double s = 0.0;
        for (double b : rhs_) s = std::max(s, std::abs(b));
        return s;
    }

    void finish_phase1() {
        in_phase1_ = false;
        for (int j = nstruct_ + nrows_; j < ncols_; ++j) {
            lo_[j] = 0.0;
            hi_[j] = 0.0;
            if (stat_[j] != VarStatus::Basic) {
                stat_[j] = VarStatus::AtLower;
                xval_[j] = 0.0;
            }
        }
        recompute_basics();
    }

    bool certify() {
        refactorize();
        recompute_basics();
        const double bscale = 1.0 + rhs_scale();
        for (int j = 0; j < ncols_; ++j) {
            const double slack_lo = xval_[j] - lo_[j];
            const double slack_hi = hi_[j] - xval_[j];
            const double tol = kFeasTol * (1.0 + std::abs(xval_[j])) + kFeasTol * bscale;
            if (slack_lo < -tol || slack_hi < -tol) return false;
        }
        const auto y = compute_duals(cost_);
        double primal = 0.0;
        for (int j = 0; j < ncols_; ++j)
            if (cost_[j] != 0.0) primal += cost_[j] * xval_[j];
        double dual = 0.0;
        for (int i = 0; i < nrows_; ++i) dual += y[i] * rhs_[i];
        for (int j = 0; j < ncols_; ++j) {
            if (stat_[j] == VarStatus::Basic) continue;
            const double d = reduced_cost(j, y);
            if (!is_fixed(j) && entering_score(j, d) > 100 * kFeasTol) return false;
            if (xval_[j] != 0.0) dual += d * xval_[j];
        }
        if (std::abs(primal - dual) > 1e-6 * (1.0 + std::abs(primal))) return false;
        return true;
    }

    LpOutcome extract() const {
        LpOutcome out;
        out.status = LpStatus::Optimal;
        const double flip = model_.sense == Sense::Maximize ? -1.0 : 1.0;
        out.primal.assign(xval_.begin(), xval_.begin() + nstruct_);
        double obj = 0.0;
        for (int j = 0; j < nstruct_; ++j) obj += model_.objective[j] * out.primal[j];
        out.objective = obj;
        const auto y = compute_duals(cost_);
        out.dual.resize(nrows_);
        for (int i = 0; i < nrows_; ++i) out.dual[i] = flip * y[i];
        return out;
    }
};

}  // namespace

LpOutcome solve_lp(const LpModel& model) {
    Simplex solver(model);
    return solver.run();
}

}  // namespace hardgen
