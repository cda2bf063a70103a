#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "crn/errors.hpp"

namespace crn {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int numerator(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int denominator(const Rat& r) { return boost::multiprecision::denominator(r); }

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

inline int sign(const Rat& r) { return r.sign(); }
inline Rat abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

/// Exact rational value of a finite double (binary expansion, no rounding).
inline Rat rat_from_double(double x) {
    if (!std::isfinite(x)) throw DomainError("cannot convert non-finite double to rational");
    Rat r;
    int exp2 = 0;
    double m = std::frexp(x, &exp2);  // x = m * 2^exp2, |m| in [0.5, 1)
    // shift mantissa to an integer (53 bits suffice)
    for (int i = 0; i < 64 && m != std::floor(m); ++i) {
        m *= 2;
        --exp2;
    }
    Int mant(static_cast<long long>(m));
    r = mant;
    if (exp2 >= 0)
        r *= Rat(Int(1) << exp2);
    else
        r /= Rat(Int(1) << (-exp2));
    return r;
}

/// "p" when the denominator is 1, otherwise "p/q".
inline std::string rat_str(const Rat& r) {
    const Int n = numerator(r), d = denominator(r);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
}

/// Parses "p/q", integer, or decimal literals ("0.25", "2.5e-3"); decimals convert exactly.
inline Rat parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw UsageError("empty rational literal");

    auto bad = [&]() -> Rat { throw UsageError("malformed rational literal '" + text + "'"); };

    std::size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') neg = (s[i++] == '-');
    if (i >= s.size()) return bad();

    auto digits = [&](std::string& out) {
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) out.push_back(s[i++]);
    };

    std::string ip, fp, ep;
    digits(ip);
    if (i < s.size() && s[i] == '/') {
        // p/q form
        ++i;
        std::string q;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            if (s[i] == '-') neg = !neg;
            ++i;
        }
        digits(q);
        if (ip.empty() || q.empty() || i != s.size()) return bad();
        Int qq(q);
        if (qq == 0) return bad();
        Rat r(Int(ip), qq);
        return neg ? Rat(-r) : r;
    }
    if (i < s.size() && s[i] == '.') {
        ++i;
        digits(fp);
    }
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ep.push_back(s[i++]);
        std::string ed;
        digits(ed);
        if (ed.empty()) return bad();
        ep += ed;
    }
    if (i != s.size() || (ip.empty() && fp.empty())) return bad();

    Rat r(Int(ip.empty() ? "0" : ip));
    if (!fp.empty()) r += Rat(Int(fp), boost::multiprecision::pow(Int(10), static_cast<unsigned>(fp.size())));
    if (!ep.empty()) {
        long e = std::stol(ep);
        Int p10 = boost::multiprecision::pow(Int(10), static_cast<unsigned>(e < 0 ? -e : e));
        if (e >= 0)
            r *= Rat(p10);
        else
            r /= Rat(p10);
    }
    return neg ? Rat(-r) : r;
}

using RatVec = std::vector<Rat>;

} // namespace crn
