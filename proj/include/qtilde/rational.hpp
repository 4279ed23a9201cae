#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qtilde {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Validation problems in a system spec (reported, see ValidationReport).
struct spec_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violated operation precondition (digit out of alphabet, x outside [0,1], ...).
struct precondition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline int sign(const Rational& r) {
    return r.sign();
}

inline Rational rational_abs(const Rational& r) {
    return r < 0 ? Rational(-r) : r;
}

namespace detail {

inline BigInt parse_big_int(std::string_view s, std::string_view whole) {
    if (s.empty())
        throw parse_error("empty integer in rational '" + std::string(whole) + "'");
    bool neg = s[0] == '-';
    if (s[0] == '-' || s[0] == '+') s.remove_prefix(1);
    if (s.empty())
        throw parse_error("bare sign in rational '" + std::string(whole) + "'");
    for (char c : s)
        if (c < '0' || c > '9')
            throw parse_error("bad digit in rational '" + std::string(whole) + "'");
    // strip leading zeros; cpp_int would read "025" as octal
    while (s.size() > 1 && s[0] == '0') s.remove_prefix(1);
    BigInt v{std::string(s)};
    return neg ? BigInt(-v) : v;
}

inline BigInt pow10(long k) {
    BigInt r = 1;
    for (long i = 0; i < k; ++i) r *= 10;
    return r;
}

} // namespace detail

// Accepts "3", "-2", "1/3", "-7/10", "0.25", "1e-9", "2.5e3".  Decimal and
// scientific forms convert exactly (digits over a power of ten); no floats.
inline Rational parse_rational(std::string_view s) {
    if (s.empty())
        throw parse_error("empty rational");
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        BigInt num = detail::parse_big_int(s.substr(0, slash), s);
        BigInt den = detail::parse_big_int(s.substr(slash + 1), s);
        if (den == 0)
            throw parse_error("zero denominator in rational '" + std::string(s) + "'");
        return Rational(num, den);
    }
    std::string_view mant = s;
    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        mant = s.substr(0, e);
        BigInt ex = detail::parse_big_int(s.substr(e + 1), s);
        if (ex > 9999 || ex < -9999)
            throw parse_error("exponent out of range in rational '" + std::string(s) + "'");
        exp10 = static_cast<long>(ex);
    }
    BigInt num;
    long frac_digits = 0;
    if (auto dot = mant.find('.'); dot != std::string_view::npos) {
        std::string_view ip = mant.substr(0, dot), fp = mant.substr(dot + 1);
        if (fp.empty())
            throw parse_error("trailing point in rational '" + std::string(s) + "'");
        std::string joined = std::string(ip.empty() ? "0" : ip) + std::string(fp);
        num = detail::parse_big_int(joined, s);
        frac_digits = static_cast<long>(fp.size());
    } else {
        num = detail::parse_big_int(mant, s);
    }
    Rational r(num);
    long net = exp10 - frac_digits;
    if (net >= 0)
        r *= Rational(detail::pow10(net));
    else
        r /= Rational(detail::pow10(-net));
    return r;
}

// "num/den" reduced, or plain integer when den == 1.
inline std::string rational_string(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1)
        s += "/" + denominator(r).str();
    return s;
}

// Fixed-point decimal rendering, round half away from zero, trailing zeros
// trimmed ("1/2", 6 -> "0.5"; "1", 6 -> "1").
inline std::string decimal_string(const Rational& r, int digits = 12) {
    if (digits < 0) digits = 0;
    BigInt num = numerator(r), den = denominator(r);
    bool neg = num < 0;
    if (neg) num = -num;
    BigInt scale = detail::pow10(digits);
    BigInt scaled = (num * scale * 2 + den) / (den * 2); // round half up on |r|
    BigInt ip = scaled / scale, fp = scaled % scale;
    std::string frac = fp.str();
    frac.insert(frac.begin(), static_cast<size_t>(digits) - frac.size(), '0');
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    std::string out = ip.str();
    if (!frac.empty()) out += "." + frac;
    if (neg && (ip != 0 || !frac.empty())) out.insert(out.begin(), '-');
    return out;
}

} // namespace qtilde
