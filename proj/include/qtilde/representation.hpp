#pragma once

#include "qtilde/digit_string.hpp"
#include "qtilde/matrix_spec.hpp"
#include "qtilde/series.hpp"

#include <utility>
#include <vector>

namespace qtilde {

struct EvalResult {
    Rational value;
    Rational error_bound; // 0 when exact
    long depth_used = 0;

    bool exact() const { return error_bound == 0; }
};

// Endpoint tails of the rank-n cylinder.  Nega cylinders swap ends with the
// parity of n; Plus cylinders are always [base+Zeros, base+Maxes].
inline TailKind inf_tail(RepKind kind, long rank) {
    if (kind == RepKind::Plus) return TailKind::Zeros;
    return (rank % 2 != 0) ? TailKind::AltMaxZero : TailKind::AltZeroMax;
}

inline TailKind sup_tail(RepKind kind, long rank) {
    if (kind == RepKind::Plus) return TailKind::Maxes;
    return (rank % 2 != 0) ? TailKind::AltZeroMax : TailKind::AltMaxZero;
}

struct Cylinder {
    RepKind kind = RepKind::Nega;
    std::vector<int> base;
    Rational inf;
    Rational sup;
    Rational length;
};

namespace detail {

inline Rational digit_weight(const SystemSpec& spec, RepKind kind, long n, int digit) {
    return series_weight_at(spec, kind, MatrixSel::Q, n, digit);
}

} // namespace detail

inline Cylinder cylinder(const SystemSpec& spec, RepKind kind, std::vector<int> base) {
    long rank = static_cast<long>(base.size());
    Cylinder c;
    c.kind = kind;
    Rational len = 1;
    for (long n = 1; n <= rank; ++n)
        len *= detail::digit_weight(spec, kind, n, base[static_cast<size_t>(n - 1)]);
    DigitString lo{kind, base, inf_tail(kind, rank)};
    DigitString hi{kind, base, sup_tail(kind, rank)};
    c.inf = series_from(spec, lo, 0, MatrixSel::Q);
    c.sup = series_from(spec, hi, 0, MatrixSel::Q);
    c.length = len;
    c.base = std::move(base);
    return c;
}

// Exact value for symbolic tails; for Truncated tails the rank-N cylinder
// midpoint with error_bound = half the cylinder length.
inline EvalResult decode(const SystemSpec& spec, const DigitString& d) {
    check_digit_string(spec, d);
    EvalResult r;
    r.depth_used = d.prefix_size();
    if (tail_is_symbolic(d.tail)) {
        r.value = series_from(spec, d, 0, MatrixSel::Q);
        r.error_bound = 0;
        return r;
    }
    long n = d.prefix_size();
    SeriesPartial part = partial_series(spec, d, 0, MatrixSel::Q, n);
    Rational t_inf = tail_series(spec, d.kind, inf_tail(d.kind, n), n, MatrixSel::Q);
    Rational t_sup = tail_series(spec, d.kind, sup_tail(d.kind, n), n, MatrixSel::Q);
    r.value = part.sum + part.weights * (t_inf + t_sup) / 2;
    r.error_bound = part.weights * (t_sup - t_inf) / 2;
    return r;
}

inline Rational decode_exact(const SystemSpec& spec, const DigitString& d) {
    if (!tail_is_symbolic(d.tail))
        throw precondition_error("exact decode of a truncated digit string");
    return decode(spec, d).value;
}

// Independent route: the alternating expansion with the four-case
// delta-coefficient table, summed literally.  Oracle for decode on Nega
// strings.
inline Rational decode_alternating_form(const SystemSpec& spec, const DigitString& d) {
    check_digit_string(spec, d);
    return alternating_form_value(spec, d, MatrixSel::Q);
}

// Alternate digit string denoting the same number, via
//   (.., i_n) + AltMaxZero == (.., i_n - 1) + AltZeroMax   (i_n != 0)
// and the trailing-zeros/maxes identity for Plus strings.  Both input and
// output are reduced to canonical (shortest-prefix) form.  Numbers with a
// unique representation (0, 1) are rejected.
inline DigitString other_representation(const SystemSpec& spec, const DigitString& d) {
    check_digit_string(spec, d);
    if (!tail_is_symbolic(d.tail))
        throw precondition_error("truncated digit string does not pin down a number");
    DigitString c = canonicalized(spec, d);
    long n = c.prefix_size();
    if (n == 0)
        throw precondition_error("point has a unique representation");
    int last = c.prefix.back();
    switch (c.tail) {
        case TailKind::Zeros:
            c.prefix.back() = last - 1;
            c.tail = TailKind::Maxes;
            break;
        case TailKind::Maxes:
            c.prefix.back() = last + 1;
            c.tail = TailKind::Zeros;
            break;
        case TailKind::AltMaxZero:
            c.prefix.back() = last - 1;
            c.tail = TailKind::AltZeroMax;
            break;
        case TailKind::AltZeroMax:
            c.prefix.back() = last + 1;
            c.tail = TailKind::AltMaxZero;
            break;
        case TailKind::Truncated: break;
    }
    // canonical forms keep the adjusted digit inside {0..m_n}
    return c;
}

// Digits i_{k+1} i_{k+2} ... against the k-shifted column sequence, with the
// decoded value of the shifted point.
struct ShiftResult {
    DigitString digits;
    EvalResult value;
};

inline ShiftResult shift(const SystemSpec& spec, const DigitString& d, long k) {
    if (d.kind != RepKind::Plus)
        throw precondition_error("shift acts on Plus digit strings");
    if (k < 0)
        throw precondition_error("shift count must be >= 0");
    check_digit_string(spec, d);
    ShiftResult r;
    r.digits.kind = d.kind;
    r.digits.tail = d.tail;
    if (k < d.prefix_size())
        r.digits.prefix.assign(d.prefix.begin() + k, d.prefix.end());
    r.value = decode(shifted_spec(spec, k), r.digits);
    return r;
}

// Nested-cylinder encoding: descends exactly `depth` ranks, breaking
// endpoint ties toward the smaller digit; if x is the rank-depth cylinder's
// endpoint the exact symbolic tail is attached, otherwise the tail is
// Truncated.
inline DigitString encode(const SystemSpec& spec, RepKind kind, const Rational& x, long depth) {
    if (x < 0 || x > 1)
        throw precondition_error("x outside [0, 1]");
    if (depth < 0)
        throw precondition_error("depth must be >= 0");
    Rational lo = 0, hi = 1;
    DigitString d;
    d.kind = kind;
    d.tail = TailKind::Truncated;
    for (long r = 1; r <= depth; ++r) {
        Rational len = hi - lo;
        int m = spec.alphabet_max(r);
        bool ascending = (kind == RepKind::Plus) || (r % 2 != 0);
        int digit = -1;
        if (ascending) {
            Rational upper = lo;
            for (int c = 0; c <= m; ++c) {
                Rational w = len * detail::digit_weight(spec, kind, r, c);
                upper += w;
                if (x <= upper || c == m) {
                    digit = c;
                    lo = upper - w;
                    hi = upper;
                    break;
                }
            }
        } else {
            // even-rank Nega children run right to left; digit 0 is rightmost
            Rational lower = hi;
            for (int c = 0; c <= m; ++c) {
                Rational w = len * detail::digit_weight(spec, kind, r, c);
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
    }
    if (x == lo)
        d.tail = inf_tail(kind, depth);
    else if (x == hi)
        d.tail = sup_tail(kind, depth);
    return d;
}

} // namespace qtilde
