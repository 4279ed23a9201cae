#pragma once

#include "qtilde/representation.hpp"
#include "qtilde/series.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace qtilde {

// F(x) = beta_{i_1,1} + sum_{k>=2} beta~_{i_k,k} prod_{j<k} p~_{i_j,j},
// the unique bounded solution of the shift functional-equation system.
// Exact for symbolic tails; Truncated tails get the partial sum with the
// remainder bound prod |p~| (times a sup bound of the shifted solution when
// P has negative entries, where the solution may leave [0,1]).
inline EvalResult eval_F(const SystemSpec& spec, const DigitString& d) {
    if (d.kind != RepKind::Nega)
        throw precondition_error("F takes nega digit strings");
    check_digit_string(spec, d);
    EvalResult r;
    r.depth_used = d.prefix_size();
    if (tail_is_symbolic(d.tail)) {
        r.value = series_from(spec, d, 0, MatrixSel::P);
        r.error_bound = 0;
        return r;
    }
    SeriesPartial part = partial_series(spec, d, 0, MatrixSel::P, d.prefix_size());
    r.value = part.sum;
    Rational factor = all_p_nonnegative(spec) ? Rational(1) : sup_bound_F(spec, d.prefix_size());
    r.error_bound = part.abs_weights * factor;
    return r;
}

// The zeta-form oracle: F via the literal alternating expansion in the P
// matrix.  Kept solely as an independent route against eval_F.
inline Rational eval_F_alternating_form(const SystemSpec& spec, const DigitString& d) {
    check_digit_string(spec, d);
    return alternating_form_value(spec, d, MatrixSel::P);
}

// Encodes x in the nega representation until the certified remainder drops
// below tol, or exactly when x lands on a cylinder endpoint.
inline EvalResult eval_F_at(const SystemSpec& spec, const Rational& x, const Rational& tol) {
    if (x < 0 || x > 1)
        throw precondition_error("x outside [0, 1]");
    if (tol <= 0)
        throw precondition_error("tol must be positive");
    bool nonneg = all_p_nonnegative(spec);
    Rational lo = 0, hi = 1, abs_p = 1;
    DigitString d;
    d.kind = RepKind::Nega;
    for (long rank = 0;; ++rank) {
        if (x == lo) {
            d.tail = inf_tail(RepKind::Nega, rank);
            return eval_F(spec, d);
        }
        if (x == hi) {
            d.tail = sup_tail(RepKind::Nega, rank);
            return eval_F(spec, d);
        }
        Rational factor = nonneg ? Rational(1) : sup_bound_F(spec, rank);
        if (abs_p * factor < tol) {
            d.tail = TailKind::Truncated;
            return eval_F(spec, d);
        }
        long r = rank + 1;
        Rational len = hi - lo;
        int m = spec.alphabet_max(r);
        int digit = -1;
        if (r % 2 != 0) {
            Rational upper = lo;
            for (int c = 0; c <= m; ++c) {
                Rational w = len * detail::digit_weight(spec, RepKind::Nega, r, c);
                upper += w;
                if (x <= upper || c == m) {
                    digit = c;
                    lo = upper - w;
                    hi = upper;
                    break;
                }
            }
        } else {
            Rational lower = hi;
            for (int c = 0; c <= m; ++c) {
                Rational w = len * detail::digit_weight(spec, RepKind::Nega, r, c);
                lower -= w;
                if (x >= lower || c == m) {
                    digit = c;
                    lo = lower;
                    hi = lower + w;
                    break;
                }
            }
        }
        d.prefix.push_back(digit);
        abs_p *= rational_abs(tilde_values(spec, r, digit).p);
    }
}

// F_k - (beta~_{i_{k+1},k+1} + p~_{i_{k+1},k+1} F_{k+1}) where F_j is the
// series of the j-shifted digit string against the j-shifted system.
// Identically zero: this is the defining equation of the solution.
inline Rational residual(const SystemSpec& spec, const DigitString& d, long k) {
    if (d.kind != RepKind::Nega)
        throw precondition_error("residual takes nega digit strings");
    if (!tail_is_symbolic(d.tail))
        throw precondition_error("residual needs a symbolic tail");
    check_digit_string(spec, d);
    Rational f_k = series_from(spec, d, k, MatrixSel::P);
    Rational f_k1 = series_from(spec, d, k + 1, MatrixSel::P);
    TildeValues tv = tilde_values(spec, k + 1, digit_at(spec, d, k + 1));
    return f_k - (tv.beta + tv.p * f_k1);
}

// mu_F of the rank-n cylinder: prod_{j<=n} p~_{c_j,j}.
inline Rational increment(const SystemSpec& spec, const std::vector<int>& base) {
    Rational prod = 1;
    for (long n = 1; n <= static_cast<long>(base.size()); ++n)
        prod *= tilde_values(spec, n, base[static_cast<size_t>(n - 1)]).p;
    return prod;
}

enum class MonotonicityClass {
    NonDecreasing,
    StrictlyIncreasing,
    NonMonotoneWithMonotoneInterval,
    NowhereMonotone,
    ConstantAlmostEverywhere,
};

inline std::string to_string(MonotonicityClass c) {
    switch (c) {
        case MonotonicityClass::NonDecreasing: return "NonDecreasing";
        case MonotonicityClass::StrictlyIncreasing: return "StrictlyIncreasing";
        case MonotonicityClass::NonMonotoneWithMonotoneInterval:
            return "NonMonotoneWithMonotoneInterval";
        case MonotonicityClass::NowhereMonotone: return "NowhereMonotone";
        case MonotonicityClass::ConstantAlmostEverywhere: return "ConstantAlmostEverywhere";
    }
    return "?";
}

// Decision over the eventually periodic structure: "infinitely many columns
// with property X" means "X occurs in the repeating block".
inline MonotonicityClass classify_monotonicity(const SystemSpec& spec) {
    auto scan = [](const std::vector<ColumnPair>& cols, bool& zero, bool& negative) {
        for (const auto& c : cols)
            for (const auto& v : c.p) {
                if (v == 0) zero = true;
                if (v < 0) negative = true;
            }
    };
    bool pre_zero = false, pre_neg = false, blk_zero = false, blk_neg = false;
    scan(spec.preamble, pre_zero, pre_neg);
    scan(spec.block, blk_zero, blk_neg);

    if (!pre_zero && !pre_neg && !blk_zero && !blk_neg)
        return MonotonicityClass::StrictlyIncreasing;
    if (!pre_neg && !blk_neg && !blk_zero)
        return MonotonicityClass::NonDecreasing;
    if (blk_zero)
        return MonotonicityClass::ConstantAlmostEverywhere;
    if (blk_neg && !pre_zero && !pre_neg)
        return MonotonicityClass::NowhereMonotone;
    // finitely many negatives or zeros (preamble only): F is monotone on any
    // deep all-positive cylinder, or constant where a preamble p~ vanishes
    return MonotonicityClass::NonMonotoneWithMonotoneInterval;
}

// Partial products prod_{j<=n} p~/q~ along the digits of d, n = 1..depth.
// These are increment/length ratios of the nested cylinders around the
// point and carry the derivative limit when it exists.
inline std::vector<Rational> derivative_quotients(const SystemSpec& spec, const DigitString& d,
                                                  long depth) {
    check_digit_string(spec, d);
    if (!tail_is_symbolic(d.tail) && depth > d.prefix_size())
        throw precondition_error("depth exceeds the truncated prefix");
    std::vector<Rational> out;
    out.reserve(static_cast<size_t>(depth));
    Rational prod = 1;
    for (long n = 1; n <= depth; ++n) {
        TildeValues tv = tilde_values(spec, n, digit_at(spec, d, n));
        prod *= tv.p / tv.q;
        out.push_back(prod);
    }
    return out;
}

struct NowhereDiffReport {
    bool verdict = false;
    std::string detail;
};

// Column-wise sign alternation p_{i,n} p_{i-1,n} < 0 plus the decidable
// surrogate of the edge-ratio limit conditions: the per-block products of
// p_{0,.}/q_{0,.} and p_{m,.}/q_{m,.} both have magnitude >= 1.
inline NowhereDiffReport check_nowhere_differentiability(const SystemSpec& spec) {
    NowhereDiffReport rep;
    auto alternates = [](const ColumnPair& c) {
        for (size_t i = 1; i < c.p.size(); ++i)
            if (c.p[i] * c.p[i - 1] >= 0) return false;
        return true;
    };
    for (size_t j = 0; j < spec.preamble.size(); ++j)
        if (!alternates(spec.preamble[j])) {
            rep.detail = "sign alternation fails in preamble[" + std::to_string(j) + "]";
            return rep;
        }
    for (size_t j = 0; j < spec.block.size(); ++j)
        if (!alternates(spec.block[j])) {
            rep.detail = "sign alternation fails in block[" + std::to_string(j) + "]";
            return rep;
        }
    Rational rho0 = 1, rhom = 1;
    for (const auto& c : spec.block) {
        rho0 *= c.p.front() / c.q.front();
        rhom *= c.p.back() / c.q.back();
    }
    if (rational_abs(rho0) < 1) {
        rep.detail = "edge ratio product p0/q0 per block = " + rational_string(rho0) +
                     ", magnitude < 1";
        return rep;
    }
    if (rational_abs(rhom) < 1) {
        rep.detail = "edge ratio product pm/qm per block = " + rational_string(rhom) +
                     ", magnitude < 1";
        return rep;
    }
    rep.verdict = true;
    rep.detail = "alternation holds; |per-block edge ratio products| = " +
                 rational_string(rational_abs(rho0)) + ", " + rational_string(rational_abs(rhom));
    if (rho0 < 0 || rhom < 0)
        rep.detail += " (oscillating sign accepted as nonvanishing)";
    return rep;
}

// The two approaching sequences of the nowhere-differentiability proof,
// as digit surgeries on the two representations of a nega-rational point
// x0 = (i_1..i_n) + AltMaxZero, i_n != 0.
inline std::pair<DigitString, DigitString> witness_points(const SystemSpec& spec,
                                                          const DigitString& x0, long k) {
    DigitString c = canonicalized(spec, x0);
    if (c.tail != TailKind::AltMaxZero || c.prefix.empty())
        throw precondition_error("witness construction needs a nega-rational point "
                                 "in (prefix)+altmaxzero form");
    long n = c.prefix_size();
    auto amz = [&](long t) { return (t % 2 != 0) ? spec.alphabet_max(n + t) : 0; };
    auto azm = [&](long t) { return (t % 2 != 0) ? 0 : spec.alphabet_max(n + t); };

    DigitString xp, xs; // x'_k and x''_k
    xp.kind = xs.kind = RepKind::Nega;
    if (n % 2 != 0) {
        xp.prefix = c.prefix;
        for (long t = 1; t < k; ++t) xp.prefix.push_back(amz(t));
        xp.prefix.push_back(k % 2 == 0 ? 1 : spec.alphabet_max(n + k) - 1);
        xp.tail = (k % 2 == 0) ? TailKind::AltMaxZero : TailKind::AltZeroMax;

        xs.prefix = c.prefix;
        xs.prefix.back() -= 1;
        for (long t = 1; t <= k; ++t) xs.prefix.push_back(azm(t));
        xs.prefix.push_back(k % 2 != 0 ? 0 : spec.alphabet_max(n + k + 1));
        xs.tail = (k % 2 != 0) ? TailKind::AltMaxZero : TailKind::AltZeroMax;
    } else {
        xp.prefix = c.prefix;
        xp.prefix.back() -= 1;
        for (long t = 1; t < k; ++t) xp.prefix.push_back(azm(t));
        xp.prefix.push_back(k % 2 != 0 ? 1 : spec.alphabet_max(n + k) - 1);
        xp.tail = (k % 2 != 0) ? TailKind::AltMaxZero : TailKind::AltZeroMax;

        xs.prefix = c.prefix;
        for (long t = 1; t <= k; ++t) xs.prefix.push_back(amz(t));
        xs.prefix.push_back(k % 2 != 0 ? spec.alphabet_max(n + k + 1) : 0);
        xs.tail = (k % 2 != 0) ? TailKind::AltZeroMax : TailKind::AltMaxZero;
    }
    return {xp, xs};
}

struct WitnessQuotients {
    Rational b_prime;  // (F(x'_k) - F(x0)) / (x'_k - x0)
    Rational b_second; // (F(x0) - F(x''_k)) / (x0 - x''_k)
};

inline std::vector<WitnessQuotients> nondiff_witness(const SystemSpec& spec,
                                                     const DigitString& x0, long k_max) {
    DigitString c = canonicalized(spec, x0);
    if (c.tail == TailKind::AltZeroMax)
        c = other_representation(spec, c); // flip to the AltMaxZero form
    if (c.tail != TailKind::AltMaxZero || c.prefix.empty())
        throw precondition_error("point is not nega-rational");
    Rational x = decode_exact(spec, c);
    Rational fx = series_from(spec, c, 0, MatrixSel::P);
    std::vector<WitnessQuotients> out;
    out.reserve(static_cast<size_t>(k_max));
    for (long k = 1; k <= k_max; ++k) {
        auto [xp, xs] = witness_points(spec, c, k);
        Rational xpv = decode_exact(spec, xp);
        Rational xsv = decode_exact(spec, xs);
        Rational fp = series_from(spec, xp, 0, MatrixSel::P);
        Rational fs = series_from(spec, xs, 0, MatrixSel::P);
        out.push_back({(fp - fx) / (xpv - x), (fx - fs) / (x - xsv)});
    }
    return out;
}

struct AffineMap {
    Rational x_offset; // a~
    Rational x_scale;  // q~
    Rational y_offset; // beta~
    Rational y_scale;  // p~
};

inline bool ifs_hypothesis_holds(const SystemSpec& spec) {
    auto nonzero = [](const ColumnPair& c) {
        for (const auto& v : c.p)
            if (v == 0) return false;
        return true;
    };
    for (const auto& c : spec.preamble)
        if (!nonzero(c)) return false;
    for (const auto& c : spec.block)
        if (!nonzero(c)) return false;
    return true;
}

// The self-affine maps psi_{i,n}: (x, y) -> (a~ + q~ x, beta~ + p~ y), one
// per digit of column n.
inline std::vector<AffineMap> ifs_maps(const SystemSpec& spec, long n) {
    int m = spec.alphabet_max(n);
    std::vector<AffineMap> maps;
    maps.reserve(static_cast<size_t>(m) + 1);
    for (int i = 0; i <= m; ++i) {
        TildeValues tv = tilde_values(spec, n, i);
        maps.push_back({tv.a, tv.q, tv.beta, tv.p});
    }
    return maps;
}

// (inf, F(inf)) and (sup, F(sup)) of every rank-depth cylinder, sorted by x
// and deduplicated at shared endpoints.
inline std::vector<std::pair<Rational, Rational>> graph_points(const SystemSpec& spec, long depth,
                                                               long max_points = 2'000'000) {
    if (depth < 0)
        throw precondition_error("depth must be >= 0");
    Rational cells = 1;
    for (long n = 1; n <= depth; ++n) cells *= spec.alphabet_max(n) + 1;
    if (cells > max_points)
        throw precondition_error("graph of depth " + std::to_string(depth) + " needs " +
                                 rational_string(cells) + " cylinders, above the cap of " +
                                 std::to_string(max_points));

    Rational tx_inf = tail_series(spec, RepKind::Nega, inf_tail(RepKind::Nega, depth), depth,
                                  MatrixSel::Q);
    Rational tx_sup = tail_series(spec, RepKind::Nega, sup_tail(RepKind::Nega, depth), depth,
                                  MatrixSel::Q);
    Rational ty_inf = tail_series(spec, RepKind::Nega, inf_tail(RepKind::Nega, depth), depth,
                                  MatrixSel::P);
    Rational ty_sup = tail_series(spec, RepKind::Nega, sup_tail(RepKind::Nega, depth), depth,
                                  MatrixSel::P);

    std::vector<std::pair<Rational, Rational>> pts;
    // DFS over digit words accumulating partial sums and weight products
    struct Frame {
        Rational sx, px, sy, py;
    };
    std::vector<Frame> stack(static_cast<size_t>(depth) + 1);
    stack[0] = {0, 1, 0, 1};
    long level = 0;
    std::vector<int> next(static_cast<size_t>(depth) + 1, 0);
    for (;;) {
        if (level == depth) {
            const Frame& f = stack[static_cast<size_t>(level)];
            pts.emplace_back(f.sx + f.px * tx_inf, f.sy + f.py * ty_inf);
            pts.emplace_back(f.sx + f.px * tx_sup, f.sy + f.py * ty_sup);
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
        stack[static_cast<size_t>(level + 1)] = {f.sx + f.px * tv.a, f.px * tv.q,
                                                 f.sy + f.py * tv.beta, f.py * tv.p};
        ++level;
    }
    std::sort(pts.begin(), pts.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              pts.end());
    return pts;
}

} // namespace qtilde
