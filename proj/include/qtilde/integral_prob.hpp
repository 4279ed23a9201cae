#pragma once

#include "qtilde/function_f.hpp"
#include "qtilde/representation.hpp"
#include "qtilde/series.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace qtilde {

struct IntegralResult {
    Rational value;
    Rational error_bound; // 0: periodic tail summed in closed form
    long terms_used = 0;
};

// int_0^1 F = z_1 + sum_{n>=2} z_n prod_{k<n} sigma_k with the per-column
// moments z_n = sum_i beta_{i,n} q_{i,n}, sigma_n = sum_i p_{i,n} q_{i,n}.
// |sigma_n| <= max|p| < 1, so the periodic tail solves exactly.
inline IntegralResult integral_closed_form(const SystemSpec& spec) {
    auto z = [&](long n) {
        const ColumnPair& c = spec.column(n);
        Rational s = 0;
        for (int i = 0; i <= c.alphabet_max(); ++i)
            s += column_beta(c, i) * c.q[static_cast<size_t>(i)];
        return s;
    };
    auto sigma = [&](long n) {
        const ColumnPair& c = spec.column(n);
        Rational s = 0;
        for (int i = 0; i <= c.alphabet_max(); ++i)
            s += c.p[static_cast<size_t>(i)] * c.q[static_cast<size_t>(i)];
        return s;
    };
    IntegralResult r;
    r.terms_used = spec.preamble_size() + spec.pattern_period();
    r.value = detail::periodic_linear_series(
        spec.preamble_size(), spec.pattern_period(), [&](long t) { return z(1 + t); },
        [&](long t) { return sigma(1 + t); });
    r.error_bound = 0;
    return r;
}

// Exact Darboux-style bracket from rank-depth cylinders.  Nonnegative P:
// F is monotone, so each cylinder contributes length times its endpoint
// values.  Otherwise: F = S_d + prod(p~) * F_d(rest) with |F_d| below the
// computable sup bound.
inline std::pair<Rational, Rational> integral_oracle(const SystemSpec& spec, long depth,
                                                     long max_cells = 2'000'000) {
    if (depth < 0)
        throw precondition_error("depth must be >= 0");
    Rational cells = 1;
    for (long n = 1; n <= depth; ++n) cells *= spec.alphabet_max(n) + 1;
    if (cells > max_cells)
        throw precondition_error("oracle depth " + std::to_string(depth) + " needs " +
                                 rational_string(cells) + " cylinders, above the cap");

    bool nonneg = all_p_nonnegative(spec);
    Rational ty_inf = 0, ty_sup = 0, bound = 0;
    if (nonneg) {
        ty_inf = tail_series(spec, RepKind::Nega, inf_tail(RepKind::Nega, depth), depth,
                             MatrixSel::P);
        ty_sup = tail_series(spec, RepKind::Nega, sup_tail(RepKind::Nega, depth), depth,
                             MatrixSel::P);
    } else {
        bound = sup_bound_F(spec, depth);
    }

    Rational low = 0, high = 0;
    struct Frame {
        Rational len, sy, py;
    };
    std::vector<Frame> stack(static_cast<size_t>(depth) + 1);
    stack[0] = {1, 0, 1};
    std::vector<int> next(static_cast<size_t>(depth) + 1, 0);
    long level = 0;
    for (;;) {
        if (level == depth) {
            const Frame& f = stack[static_cast<size_t>(level)];
            if (nonneg) {
                low += f.len * (f.sy + f.py * ty_inf);
                high += f.len * (f.sy + f.py * ty_sup);
            } else {
                Rational slack = rational_abs(f.py) * bound;
                low += f.len * (f.sy - slack);
                high += f.len * (f.sy + slack);
            }
            if (level == 0) break;
            --level;
            continue;
        }
        int digit = next[static_cast<size_t>(level)]++;
        if (digit > spec.alphabet_max(level + 1)) {
            next[static_cast<size_t>(level)] = 0;
            if (level == 0) break;
            --level;
            continue;
        }
        TildeValues tv = tilde_values(spec, level + 1, digit);
        const Frame& f = stack[static_cast<size_t>(level)];
        stack[static_cast<size_t>(level + 1)] = {f.len * tv.q, f.sy + f.py * tv.beta,
                                                 f.py * tv.p};
        ++level;
    }
    return {low, high};
}

enum class SingularityVerdict {
    CantorType_Condition1,
    CantorType_Condition2,
    NotCantorType,
    NotApplicable,
};

inline std::string to_string(SingularityVerdict v) {
    switch (v) {
        case SingularityVerdict::CantorType_Condition1: return "CantorType_Condition1";
        case SingularityVerdict::CantorType_Condition2: return "CantorType_Condition2";
        case SingularityVerdict::NotCantorType: return "NotCantorType";
        case SingularityVerdict::NotApplicable: return "NotApplicable";
    }
    return "?";
}

struct SingularityReport {
    SingularityVerdict verdict = SingularityVerdict::NotApplicable;
    std::string detail;
};

// Cantor-type singularity conditions on eventually periodic specs with
// nonnegative P: condition 1, prod_n (sum_{p~>0} q~) = 0, holds iff some
// block column loses q-mass to zero-p digits; condition 2,
// sum_n (sum_{p~=0} q~) = inf, iff some block column has a zero-p digit.
// The per-column sums are twist-invariant, so untwisted columns decide.
inline SingularityReport singularity_check(const SystemSpec& spec) {
    SingularityReport rep;
    if (!all_p_nonnegative(spec)) {
        rep.verdict = SingularityVerdict::NotApplicable;
        rep.detail = "matrix P has a negative entry; the Cantor-type criterion needs p >= 0";
        return rep;
    }
    bool cond1 = false, cond2 = false;
    for (const auto& c : spec.block) {
        Rational pos_mass = 0;
        bool zero_digit = false;
        for (size_t i = 0; i < c.p.size(); ++i) {
            if (c.p[i] > 0) pos_mass += c.q[i];
            if (c.p[i] == 0) zero_digit = true;
        }
        if (pos_mass < 1) cond1 = true;
        if (zero_digit) cond2 = true;
    }
    if (cond1) {
        rep.verdict = SingularityVerdict::CantorType_Condition1;
        rep.detail = cond2 ? "both conditions hold (zero-p digit in the block)"
                           : "block column with sum_{p>0} q < 1";
    } else if (cond2) {
        rep.verdict = SingularityVerdict::CantorType_Condition2;
        rep.detail = "block column with a zero-p digit";
    } else {
        rep.verdict = SingularityVerdict::NotCantorType;
        rep.detail = "every block column has full q-mass on positive p";
    }
    return rep;
}

inline constexpr const char* kGeneratorId = "splitmix64-counter-v1";

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Counter-based stream: one 64-bit word per (seed, sample, position).
inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t sample,
                                  std::uint64_t position) {
    return splitmix64(splitmix64(splitmix64(seed) ^ (sample + 1)) ^ (position + 1));
}

} // namespace detail

struct SampleBatch {
    std::uint64_t seed = 0;
    long depth = 0;
    std::vector<Rational> values;
};

// eta = Delta^{Q~}_{xi_1 xi_2 ...} with independent digits,
// P{xi_n = i} = p_{i,n}.  Digits come from the counter stream mapped through
// the column CDF by exact integer comparison (r < c * 2^64), so batches are
// bit-identical for a given (seed, count, depth) on any platform.
inline SampleBatch sample(const SystemSpec& spec, std::uint64_t seed, long count, long depth) {
    if (!all_p_nonnegative(spec))
        throw precondition_error("sampling needs nonnegative p entries");
    if (depth < 1)
        throw precondition_error("depth must be >= 1");
    if (count < 0)
        throw precondition_error("count must be >= 0");

    // per-position cumulative digit thresholds c_k scaled by 2^64, plus the
    // column a-values so the truncated midpoint accumulates in one pass
    struct Position {
        std::vector<BigInt> num; // numerator(c_k) << 64
        std::vector<BigInt> den;
        std::vector<Rational> a;
        std::vector<Rational> q;
    };
    std::vector<Position> table(static_cast<size_t>(depth));
    for (long n = 1; n <= depth; ++n) {
        const ColumnPair& c = spec.column(n);
        Position t;
        Rational pcum = 0, qcum = 0;
        for (int i = 0; i <= c.alphabet_max(); ++i) {
            t.a.push_back(qcum);
            t.q.push_back(c.q[static_cast<size_t>(i)]);
            pcum += c.p[static_cast<size_t>(i)];
            qcum += c.q[static_cast<size_t>(i)];
            t.num.push_back(numerator(pcum) << 64);
            t.den.push_back(denominator(pcum));
        }
        table[static_cast<size_t>(n - 1)] = std::move(t);
    }

    SampleBatch batch;
    batch.seed = seed;
    batch.depth = depth;
    batch.values.reserve(static_cast<size_t>(count));
    for (long i = 0; i < count; ++i) {
        Rational sum = 0, prod = 1;
        for (long n = 1; n <= depth; ++n) {
            BigInt r = detail::counter_hash(seed, static_cast<std::uint64_t>(i),
                                            static_cast<std::uint64_t>(n));
            const Position& t = table[static_cast<size_t>(n - 1)];
            size_t digit = t.num.size() - 1;
            for (size_t k = 0; k + 1 < t.num.size(); ++k)
                if (r * t.den[k] < t.num[k]) {
                    digit = k;
                    break;
                }
            sum += t.a[digit] * prod;
            prod *= t.q[digit];
        }
        // midpoint of the depth-rank plus cylinder [sum, sum + prod]
        batch.values.push_back(sum + prod / 2);
    }
    return batch;
}

// Sup distance between the empirical CDF of a batch and F over a grid of
// rank-R cylinder endpoints plus evenly spaced sample order statistics.
// Both the left and right empirical limits enter, so jumps are seen from
// both sides.
inline Rational cdf_distance(const SystemSpec& spec, const SampleBatch& batch, long grid) {
    if (grid < 1)
        throw precondition_error("grid must be >= 1");
    std::vector<Rational> sorted = batch.values;
    std::sort(sorted.begin(), sorted.end());

    std::vector<Rational> points;
    long rank = 0, cells = 1;
    while (cells < grid && rank < 40) {
        ++rank;
        cells *= spec.alphabet_max(rank) + 1;
    }
    {
        // endpoints of the rank-R cylinders
        auto pts = graph_points(spec, rank, std::max(4 * grid + 16, 1024L));
        for (auto& pr : pts) points.push_back(pr.first);
    }
    if (!sorted.empty()) {
        long n = static_cast<long>(sorted.size());
        for (long j = 0; j < grid; ++j) {
            long idx = (grid == 1) ? 0 : j * (n - 1) / (grid - 1);
            points.push_back(sorted[static_cast<size_t>(idx)]);
        }
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    Rational total = static_cast<long>(sorted.size());
    Rational best = 0, tol(1, 1000000000000LL);
    for (const auto& g : points) {
        Rational theo = eval_F_at(spec, g, tol).value;
        Rational emp_lt = 0, emp_le = 0;
        if (!sorted.empty()) {
            auto lo = std::lower_bound(sorted.begin(), sorted.end(), g);
            auto hi = std::upper_bound(sorted.begin(), sorted.end(), g);
            emp_lt = Rational(static_cast<long>(lo - sorted.begin())) / total;
            emp_le = Rational(static_cast<long>(hi - sorted.begin())) / total;
        }
        best = std::max({best, rational_abs(emp_lt - theo), rational_abs(emp_le - theo)});
    }
    return best;
}

} // namespace qtilde
