#include "hardgen/core.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace hardgen {

std::string to_string(ProblemKind kind) {
    return kind == ProblemKind::Selection ? "selection" : "tsp";
}

ProblemKind problem_kind_from_string(const std::string& s) {
    if (s == "selection") return ProblemKind::Selection;
    if (s == "tsp") return ProblemKind::Tsp;
    throw InvariantError("unknown problem kind '" + s + "'");
}

void Instance::validate() const {
    if (n < 1 || N < 1) throw InvariantError("instance requires n >= 1 and N >= 1");
    if (!(max_cost >= 0) || !std::isfinite(max_cost))
        throw InvariantError("max cost C must be finite and nonnegative");
    if (kind == ProblemKind::Selection) {
        if (p < 1 || p > n)
            throw InvariantError("selection requires 1 <= p <= n, got p=" + std::to_string(p));
    } else {
        if (m < 3) throw InvariantError("tsp requires m >= 3 nodes");
        if (n != m * m)
            throw InvariantError("tsp requires n = m*m, got n=" + std::to_string(n) +
                                 ", m=" + std::to_string(m));
    }
    if (static_cast<int>(costs.size()) != N)
        throw InvariantError("cost matrix must have N rows");
    for (int i = 0; i < N; ++i) {
        if (static_cast<int>(costs[i].size()) != n)
            throw InvariantError("scenario " + std::to_string(i) + " must have n entries");
        for (int k = 0; k < n; ++k) {
            double c = costs[i][k];
            if (!std::isfinite(c) || c < 0 || c > max_cost)
                throw InvariantError("cost[" + std::to_string(i) + "][" + std::to_string(k) +
                                     "] outside [0, C]");
        }
        if (kind == ProblemKind::Tsp) {
            for (int v = 0; v < m; ++v) {
                if (costs[i][v * m + v] != 0.0)
                    throw InvariantError("tsp diagonal cost must be zero (scenario " +
                                         std::to_string(i) + ", node " + std::to_string(v) + ")");
            }
        }
    }
}

bool UncertaintyBox::contains(const std::vector<double>& c, double tol) const {
    if (c.size() != lower.size()) return false;
    double sum = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] < lower[k] - tol || c[k] > upper[k] + tol) return false;
        sum += c[k];
    }
    return std::abs(sum - target_sum) <= tol * (1.0 + std::abs(target_sum));
}

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& s : state_) s = splitmix64(sm);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

std::uint64_t Rng::next_below(std::uint64_t bound_inclusive) {
    const std::uint64_t range = bound_inclusive + 1;  // 0 means the full 2^64 range
    if (range == 0) return next_u64();
    const std::uint64_t skip = (-range) % range;
    for (;;) {
        std::uint64_t r = next_u64();
        if (r >= skip) return (r - skip) % range;
    }
}

double Rng::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::vector<UncertaintyBox> build_uncertainty(const Instance& instance, double budget) {
    instance.validate();
    if (!(budget >= 0)) throw InvariantError("budget must be nonnegative");
    std::vector<UncertaintyBox> boxes;
    boxes.reserve(instance.N);
    for (int i = 0; i < instance.N; ++i) {
        UncertaintyBox box;
        box.lower.resize(instance.n);
        box.upper.resize(instance.n);
        double sum = 0.0;
        for (int k = 0; k < instance.n; ++k) {
            double c = instance.costs[i][k];
            box.lower[k] = std::max(c - budget, 0.0);
            box.upper[k] = std::min(c + budget, instance.max_cost);
            sum += c;
        }
        if (instance.kind == ProblemKind::Tsp) {
            for (int v = 0; v < instance.m; ++v) {
                box.lower[v * instance.m + v] = 0.0;
                box.upper[v * instance.m + v] = 0.0;
            }
        }
        box.target_sum = sum;
        double lo_sum = 0.0, hi_sum = 0.0;
        for (int k = 0; k < instance.n; ++k) {
            lo_sum += box.lower[k];
            hi_sum += box.upper[k];
        }
        // Cannot trigger for these bound formulas since the seed vector is a member.
        if (lo_sum > box.target_sum + 1e-9 || hi_sum < box.target_sum - 1e-9)
            throw InvariantError("uncertainty box for scenario " + std::to_string(i) +
                                 " is empty");
        boxes.push_back(std::move(box));
    }
    return boxes;
}

Instance sample_ru(ProblemKind kind, int n, int N, double max_cost, int p_or_m,
                   std::uint64_t seed, bool symmetric) {
    Instance inst;
    inst.kind = kind;
    inst.n = n;
    inst.N = N;
    inst.max_cost = max_cost;
    if (kind == ProblemKind::Selection) {
        inst.p = p_or_m;
    } else {
        inst.m = p_or_m;
    }
    const auto cap = static_cast<std::uint64_t>(std::llround(max_cost));
    if (std::abs(max_cost - static_cast<double>(cap)) > 1e-9)
        throw InvariantError("RU sampling requires an integer max cost C");
    Rng rng(seed);
    inst.costs.assign(N, std::vector<double>(n, 0.0));
    for (int i = 0; i < N; ++i) {
        if (kind == ProblemKind::Selection) {
            for (int k = 0; k < n; ++k)
                inst.costs[i][k] = static_cast<double>(rng.next_below(cap));
        } else {
            const int m = inst.m;
            for (int u = 0; u < m; ++u) {
                for (int v = 0; v < m; ++v) {
                    if (u == v) continue;
                    if (symmetric && u > v) {
                        inst.costs[i][u * m + v] = inst.costs[i][v * m + u];
                        continue;
                    }
                    inst.costs[i][u * m + v] = static_cast<double>(rng.next_below(cap));
                }
            }
        }
    }
    inst.validate();
    return inst;
}

std::string format_cost(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

namespace {

// Whitespace/comment-aware tokenizer that tracks line and column for errors.
class TokenReader {
public:
    explicit TokenReader(std::istream& in) : in_(in) {}

    std::string next(const char* what) {
        std::string tok;
        for (;;) {
            int c = in_.get();
            if (c == EOF) {
                if (!tok.empty()) return tok;
                throw ParseError(std::string("unexpected end of file, expected ") + what,
                                 line_, col_);
            }
            advance(c);
            if (c == '#') {
                if (!tok.empty()) return tok;
                while (c != EOF && c != '\n') {
                    c = in_.get();
                    if (c != EOF) advance(c);
                }
                continue;
            }
            if (std::isspace(c)) {
                if (!tok.empty()) return tok;
                continue;
            }
            if (tok.empty()) {
                tok_line_ = line_;
                tok_col_ = col_;
            }
            tok.push_back(static_cast<char>(c));
        }
    }

    int expect_int(const char* what) {
        std::string tok = next(what);
        try {
            std::size_t pos = 0;
            int v = std::stoi(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw ParseError("expected integer for " + std::string(what) + ", got '" + tok + "'",
                             tok_line_, tok_col_);
        }
    }

    double expect_number(const char* what) {
        std::string tok = next(what);
        try {
            std::size_t pos = 0;
            double v = std::stod(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw ParseError("expected number for " + std::string(what) + ", got '" + tok + "'",
                             tok_line_, tok_col_);
        }
    }

    void expect_keyword(const char* kw) {
        std::string tok = next(kw);
        if (tok != kw)
            throw ParseError("expected '" + std::string(kw) + "', got '" + tok + "'",
                             tok_line_, tok_col_);
    }

    int token_line() const { return tok_line_; }
    int token_column() const { return tok_col_; }

private:
    void advance(int c) {
        if (c == '\n') {
            ++line_;
            col_ = 0;
        } else {
            ++col_;
        }
    }

    std::istream& in_;
    int line_ = 1, col_ = 0;
    int tok_line_ = 1, tok_col_ = 0;
};

}  // namespace

Instance read_instance(std::istream& in) {
    TokenReader tr(in);
    tr.expect_keyword("HIRO");
    int version = tr.expect_int("format version");
    if (version != 1)
        throw ParseError("unsupported format version " + std::to_string(version),
                         tr.token_line(), tr.token_column());
    tr.expect_keyword("problem");
    std::string kind_tok = tr.next("problem kind");
    Instance inst;
    try {
        inst.kind = problem_kind_from_string(kind_tok);
    } catch (const InvariantError& e) {
        throw ParseError(e.what(), tr.token_line(), tr.token_column());
    }
    tr.expect_keyword("n");
    inst.n = tr.expect_int("n");
    tr.expect_keyword("N");
    inst.N = tr.expect_int("N");
    tr.expect_keyword("C");
    inst.max_cost = tr.expect_number("C");
    if (inst.kind == ProblemKind::Selection) {
        tr.expect_keyword("p");
        inst.p = tr.expect_int("p");
    } else {
        tr.expect_keyword("m");
        inst.m = tr.expect_int("m");
    }
    if (inst.n < 1 || inst.N < 1)
        throw ParseError("header requires n >= 1 and N >= 1", tr.token_line(), tr.token_column());
    tr.expect_keyword("costs");
    inst.costs.assign(inst.N, std::vector<double>(inst.n, 0.0));
    for (int i = 0; i < inst.N; ++i)
        for (int k = 0; k < inst.n; ++k)
            inst.costs[i][k] = tr.expect_number("cost entry");
    try {
        inst.validate();
    } catch (const InvariantError& e) {
        throw ParseError(e.what(), tr.token_line(), tr.token_column());
    }
    return inst;
}

Instance read_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvariantError("cannot open instance file '" + path + "'");
    return read_instance(in);
}

void write_instance(const Instance& instance, std::ostream& out) {
    instance.validate();
    out << "HIRO 1\n";
    out << "problem " << to_string(instance.kind) << "\n";
    out << "n " << instance.n << "\n";
    out << "N " << instance.N << "\n";
    out << "C " << format_cost(instance.max_cost) << "\n";
    if (instance.kind == ProblemKind::Selection)
        out << "p " << instance.p << "\n";
    else
        out << "m " << instance.m << "\n";
    out << "costs\n";
    for (int i = 0; i < instance.N; ++i) {
        for (int k = 0; k < instance.n; ++k) {
            if (k) out << ' ';
            out << format_cost(instance.costs[i][k]);
        }
        out << '\n';
    }
}

void write_instance_file(const Instance& instance, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvariantError("cannot open '" + path + "' for writing");
    write_instance(instance, out);
    if (!out) throw InvariantError("failed writing instance to '" + path + "'");
}

}  // namespace hardgen
