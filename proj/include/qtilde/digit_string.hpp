#pragma once

#include "qtilde/matrix_spec.hpp"

#include <string>
#include <vector>

namespace qtilde {

enum class RepKind { Plus, Nega };

// Symbolic tails after a finite prefix of length N.
//   Zeros       0, 0, 0, ...                     (Plus)
//   Maxes       m_{N+1}, m_{N+2}, ...            (Plus)
//   AltMaxZero  m_{N+1}, 0, m_{N+3}, 0, ...      (Nega)
//   AltZeroMax  0, m_{N+2}, 0, m_{N+4}, ...      (Nega)
//   Truncated   unknown; value pinned only to the rank-N cylinder
enum class TailKind { Zeros, Maxes, AltMaxZero, AltZeroMax, Truncated };

struct DigitString {
    RepKind kind = RepKind::Nega;
    std::vector<int> prefix;
    TailKind tail = TailKind::Truncated;

    long prefix_size() const { return static_cast<long>(prefix.size()); }
};

inline bool tail_is_symbolic(TailKind t) { return t != TailKind::Truncated; }

inline bool tail_matches_kind(RepKind k, TailKind t) {
    switch (t) {
        case TailKind::Zeros:
        case TailKind::Maxes: return k == RepKind::Plus;
        case TailKind::AltMaxZero:
        case TailKind::AltZeroMax: return k == RepKind::Nega;
        case TailKind::Truncated: return true;
    }
    return false;
}

inline void check_digit_string(const SystemSpec& spec, const DigitString& d) {
    if (!tail_matches_kind(d.kind, d.tail))
        throw precondition_error("tail kind does not match representation kind");
    for (long n = 1; n <= d.prefix_size(); ++n) {
        int digit = d.prefix[static_cast<size_t>(n - 1)];
        int m = spec.alphabet_max(n);
        if (digit < 0 || digit > m)
            throw precondition_error("digit " + std::to_string(digit) + " at position " +
                                     std::to_string(n) + " outside alphabet {0.." +
                                     std::to_string(m) + "}");
    }
}

// Digit at absolute position n (prefix digits, then the symbolic pattern).
inline int digit_at(const SystemSpec& spec, const DigitString& d, long n) {
    long N = d.prefix_size();
    if (n < 1)
        throw precondition_error("digit position must be >= 1");
    if (n <= N)
        return d.prefix[static_cast<size_t>(n - 1)];
    long off = n - N; // 1-based offset into the tail
    switch (d.tail) {
        case TailKind::Zeros: return 0;
        case TailKind::Maxes: return spec.alphabet_max(n);
        case TailKind::AltMaxZero: return (off % 2 != 0) ? spec.alphabet_max(n) : 0;
        case TailKind::AltZeroMax: return (off % 2 != 0) ? 0 : spec.alphabet_max(n);
        case TailKind::Truncated: break;
    }
    throw precondition_error("digit position " + std::to_string(n) +
                             " beyond a truncated prefix of length " + std::to_string(N));
}

// Shortest prefix writing the same infinite digit sequence.  Trailing prefix
// digits that already match the tail pattern are absorbed:
//   (.., 0) + AltMaxZero == (..) + AltZeroMax
//   (.., m) + AltZeroMax == (..) + AltMaxZero
//   (.., 0) + Zeros      == (..) + Zeros
//   (.., m) + Maxes      == (..) + Maxes
inline DigitString canonicalized(const SystemSpec& spec, DigitString d) {
    if (!tail_is_symbolic(d.tail))
        return d;
    for (;;) {
        long N = d.prefix_size();
        if (N == 0)
            return d;
        int last = d.prefix.back();
        int m = spec.alphabet_max(N);
        switch (d.tail) {
            case TailKind::Zeros:
                if (last != 0) return d;
                break;
            case TailKind::Maxes:
                if (last != m) return d;
                break;
            case TailKind::AltMaxZero:
                if (last != 0) return d;
                d.tail = TailKind::AltZeroMax;
                break;
            case TailKind::AltZeroMax:
                if (last != m) return d;
                d.tail = TailKind::AltMaxZero;
                break;
            case TailKind::Truncated: return d;
        }
        d.prefix.pop_back();
    }
}

inline std::string tail_name(TailKind t) {
    switch (t) {
        case TailKind::Zeros: return "zeros";
        case TailKind::Maxes: return "maxes";
        case TailKind::AltMaxZero: return "altmaxzero";
        case TailKind::AltZeroMax: return "altzeromax";
        case TailKind::Truncated: return "truncated";
    }
    return "?";
}

// Wire format "kind:prefix:tail", e.g. "nega:1,0,2:altmaxzero"; empty prefix
// allowed ("nega::altzeromax").
inline std::string format_digit_string(const DigitString& d) {
    std::string s = (d.kind == RepKind::Plus) ? "plus:" : "nega:";
    for (size_t i = 0; i < d.prefix.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(d.prefix[i]);
    }
    s += ':';
    s += tail_name(d.tail);
    return s;
}

inline DigitString parse_digit_string(const std::string& s) {
    auto c1 = s.find(':');
    auto c2 = (c1 == std::string::npos) ? std::string::npos : s.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw parse_error("digit string '" + s + "' is not kind:prefix:tail");
    DigitString d;
    std::string kind = s.substr(0, c1);
    if (kind == "plus")
        d.kind = RepKind::Plus;
    else if (kind == "nega")
        d.kind = RepKind::Nega;
    else
        throw parse_error("unknown representation kind '" + kind + "'");
    std::string prefix = s.substr(c1 + 1, c2 - c1 - 1);
    size_t pos = 0;
    while (pos < prefix.size()) {
        size_t comma = prefix.find(',', pos);
        std::string tok = prefix.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            throw parse_error("bad digit '" + tok + "' in '" + s + "'");
        d.prefix.push_back(std::stoi(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    std::string tail = s.substr(c2 + 1);
    if (tail == "zeros") d.tail = TailKind::Zeros;
    else if (tail == "maxes") d.tail = TailKind::Maxes;
    else if (tail == "altmaxzero") d.tail = TailKind::AltMaxZero;
    else if (tail == "altzeromax") d.tail = TailKind::AltZeroMax;
    else if (tail == "truncated") d.tail = TailKind::Truncated;
    else throw parse_error("unknown tail kind '" + tail + "'");
    if (!tail_matches_kind(d.kind, d.tail))
        throw parse_error("tail '" + tail + "' not valid for kind '" + kind + "'");
    return d;
}

} // namespace qtilde
