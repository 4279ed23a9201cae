#pragma once

#include "qtilde/digit_string.hpp"
#include "qtilde/matrix_spec.hpp"

#include <algorithm>
#include <stdexcept>

namespace qtilde {

// Selects which matrix feeds a series: Q gives the x-side (a, q) values,
// P the y-side (beta, p) values.
enum class MatrixSel { Q, P };

namespace detail {

// Exact value of  sum_{t=0..inf} coeff(t) * prod_{s=0..t-1} weight(s)
// where (coeff, weight) are `period`-periodic for t >= stable_from and the
// weight product over one period has magnitude < 1.  The tail satisfies
// S = head + rho * S over one period and solves in rationals.
template <class CoeffFn, class WeightFn>
Rational periodic_linear_series(long stable_from, long period, CoeffFn coeff, WeightFn weight) {
    Rational acc = 0, prod = 1;
    long t = 0;
    for (; t < stable_from; ++t) {
        acc += coeff(t) * prod;
        prod *= weight(t);
    }
    Rational head = 0, hp = 1;
    for (long s = 0; s < period; ++s) {
        head += coeff(t + s) * hp;
        hp *= weight(t + s);
    }
    if (rational_abs(hp) >= 1)
        throw std::logic_error("periodic series does not contract");
    return acc + prod * head / (1 - hp);
}

// Effective column index of a digit: twisted at even positions for Nega
// strings, untouched for Plus.
inline int effective_digit(const SystemSpec& spec, RepKind kind, long n, int digit) {
    if (kind == RepKind::Plus) {
        int m = spec.alphabet_max(n);
        if (digit < 0 || digit > m)
            throw precondition_error("digit " + std::to_string(digit) + " at position " +
                                     std::to_string(n) + " outside alphabet");
        return digit;
    }
    return twist_digit(spec, n, digit);
}

inline Rational series_value_at(const SystemSpec& spec, RepKind kind, MatrixSel sel, long n,
                                int digit) {
    int e = effective_digit(spec, kind, n, digit);
    const ColumnPair& c = spec.column(n);
    return sel == MatrixSel::Q ? column_a(c, e) : column_beta(c, e);
}

inline Rational series_weight_at(const SystemSpec& spec, RepKind kind, MatrixSel sel, long n,
                                 int digit) {
    int e = effective_digit(spec, kind, n, digit);
    const ColumnPair& c = spec.column(n);
    return sel == MatrixSel::Q ? c.q[static_cast<size_t>(e)] : c.p[static_cast<size_t>(e)];
}

// Digit of a pure symbolic tail anchored after position `anchor`.
inline int tail_digit(const SystemSpec& spec, TailKind tail, long anchor, long n) {
    long off = n - anchor;
    switch (tail) {
        case TailKind::Zeros: return 0;
        case TailKind::Maxes: return spec.alphabet_max(n);
        case TailKind::AltMaxZero: return (off % 2 != 0) ? spec.alphabet_max(n) : 0;
        case TailKind::AltZeroMax: return (off % 2 != 0) ? 0 : spec.alphabet_max(n);
        case TailKind::Truncated: break;
    }
    throw precondition_error("truncated tail has no digits");
}

} // namespace detail

// Exact sum  V(start+1) + sum_{t>=2} V(start+t) * prod_{j=1..t-1} W(start+j)
// over the digits of `d`, where (V, W) are (a~, q~) / (beta~, p~) for Nega
// strings and (a, q) / (beta, p) for Plus strings at absolute positions.
// With start = 0 and sel = Q this is the representation value of d; with
// sel = P it is F(d); start = k evaluates the k-shifted system.
inline Rational series_from(const SystemSpec& spec, const DigitString& d, long start,
                            MatrixSel sel) {
    if (!tail_is_symbolic(d.tail))
        throw precondition_error("exact series needs a symbolic tail");
    long stable_pos = std::max(spec.preamble_size(), d.prefix_size());
    long stable_t = std::max(0L, stable_pos - start);
    return detail::periodic_linear_series(
        stable_t, spec.pattern_period(),
        [&](long t) {
            long n = start + 1 + t;
            return detail::series_value_at(spec, d.kind, sel, n, digit_at(spec, d, n));
        },
        [&](long t) {
            long n = start + 1 + t;
            return detail::series_weight_at(spec, d.kind, sel, n, digit_at(spec, d, n));
        });
}

// Pure-tail series value anchored after `anchor` (an empty prefix of that
// length), used to extend partial sums over a digit word to exact endpoint
// values: value(word + tail) = S(word) + prod(word) * tail_series(anchor).
inline Rational tail_series(const SystemSpec& spec, RepKind kind, TailKind tail, long anchor,
                            MatrixSel sel) {
    long stable_pos = std::max(spec.preamble_size(), anchor);
    long stable_t = std::max(0L, stable_pos - anchor);
    return detail::periodic_linear_series(
        stable_t, spec.pattern_period(),
        [&](long t) {
            long n = anchor + 1 + t;
            return detail::series_value_at(spec, kind, sel, n,
                                           detail::tail_digit(spec, tail, anchor, n));
        },
        [&](long t) {
            long n = anchor + 1 + t;
            return detail::series_weight_at(spec, kind, sel, n,
                                            detail::tail_digit(spec, tail, anchor, n));
        });
}

struct SeriesPartial {
    Rational sum = 0;         // partial series over the prefix
    Rational weights = 1;     // product of W over the prefix
    Rational abs_weights = 1; // product of |W|
};

inline SeriesPartial partial_series(const SystemSpec& spec, const DigitString& d, long start,
                                    MatrixSel sel, long count) {
    SeriesPartial r;
    Rational prod = 1;
    for (long t = 1; t <= count; ++t) {
        long n = start + t;
        int digit = digit_at(spec, d, n);
        r.sum += detail::series_value_at(spec, d.kind, sel, n, digit) * prod;
        prod *= detail::series_weight_at(spec, d.kind, sel, n, digit);
    }
    r.weights = prod;
    r.abs_weights = rational_abs(prod);
    return r;
}

// Exact upper bound on |F_k| over [0,1] for the k-shifted system:
// sum_{t>=1} betamax(k+t) * prod_{j<t} pmax(k+j) with per-column maxima.
// Equals 1 only in lucky cases; always finite since pmax < 1.
inline Rational sup_bound_F(const SystemSpec& spec, long start) {
    auto beta_max = [&](long n) {
        const ColumnPair& c = spec.column(n);
        Rational best = 0, partial = 0;
        for (size_t k = 0; k + 1 < c.p.size(); ++k) {
            partial += c.p[k];
            best = std::max(best, partial);
        }
        return best;
    };
    auto p_max = [&](long n) {
        const ColumnPair& c = spec.column(n);
        Rational best = 0;
        for (const auto& v : c.p) best = std::max(best, rational_abs(v));
        return best;
    };
    long stable_t = std::max(0L, spec.preamble_size() - start);
    return detail::periodic_linear_series(
        stable_t, spec.pattern_period(), [&](long t) { return beta_max(start + 1 + t); },
        [&](long t) { return p_max(start + 1 + t); });
}

inline bool all_p_nonnegative(const SystemSpec& spec) {
    auto ok = [](const ColumnPair& c) {
        for (const auto& v : c.p)
            if (v < 0) return false;
        return true;
    };
    for (const auto& c : spec.preamble)
        if (!ok(c)) return false;
    for (const auto& c : spec.block)
        if (!ok(c)) return false;
    return true;
}

// Literal evaluation of the alternating expansion
//   sum_{i<i_1} w_{i,1}
//   + sum_{n>=2} (-1)^{n-1} D~_{i_n,n} prod_{j<n} w~_{i_j,j}
//   + sum_{n>=1} prod_{j<=2n-1} w~_{i_j,j}
// with the four-case coefficient table
//   D~ = 1                      (n even, i_n = m_n)
//        sum_{i=m_n-i_n..m_n} w (n even, i_n != m_n)
//        0                      (n odd,  i_n = 0)
//        sum_{i<i_n} w          (n odd,  i_n != 0).
// sel = Q reproduces the representation value of a Nega string by an
// independent route; sel = P is the matching oracle for F.
inline Rational alternating_form_value(const SystemSpec& spec, const DigitString& d,
                                       MatrixSel sel) {
    if (d.kind != RepKind::Nega)
        throw precondition_error("alternating form is defined for Nega strings");
    if (!tail_is_symbolic(d.tail))
        throw precondition_error("alternating form needs a symbolic tail");
    auto weights = [&](long n) -> const std::vector<Rational>& {
        const ColumnPair& c = spec.column(n);
        return sel == MatrixSel::Q ? c.q : c.p;
    };
    auto d_coeff = [&](long n) {
        int i = digit_at(spec, d, n);
        int m = spec.alphabet_max(n);
        const auto& w = weights(n);
        Rational s = 0;
        if (n % 2 == 0) {
            if (i == m) return Rational(1);
            for (int j = m - i; j <= m; ++j) s += w[static_cast<size_t>(j)];
        } else {
            for (int j = 0; j < i; ++j) s += w[static_cast<size_t>(j)];
        }
        return s;
    };
    auto w_tilde = [&](long n) {
        int e = twist_digit(spec, n, digit_at(spec, d, n));
        return weights(n)[static_cast<size_t>(e)];
    };

    long stable_pos = std::max(spec.preamble_size(), d.prefix_size());
    long period = spec.pattern_period();

    Rational part1 = 0;
    {
        int i1 = digit_at(spec, d, 1);
        const auto& w = weights(1);
        for (int j = 0; j < i1; ++j) part1 += w[static_cast<size_t>(j)];
    }

    Rational w1 = w_tilde(1);
    Rational part2 =
        w1 * detail::periodic_linear_series(
                 std::max(0L, stable_pos - 1), period,
                 [&](long t) {
                     long n = 2 + t;
                     Rational c = d_coeff(n);
                     return (n % 2 == 0) ? -c : c; // (-1)^(n-1)
                 },
                 [&](long t) { return w_tilde(2 + t); });

    // Odd-depth partial products sum: terms u = 0,1,... are prod_{j<=2u+1} w~,
    // stepped by the pair ratio w~(2u+2) * w~(2u+3).
    Rational part3 = detail::periodic_linear_series(
        stable_pos, period, [&](long) { return w1; },
        [&](long u) { return w_tilde(2 * u + 2) * w_tilde(2 * u + 3); });

    return part1 + part2 + part3;
}

} // namespace qtilde
