#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <vector>

#include "tropgrob/errors.hpp"

namespace tropgrob {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int rat_den(const Rat& q) { return boost::multiprecision::denominator(q); }

// "p/q" with q omitted when 1; round-trips through parse_rat.
inline std::string rat_str(const Rat& q) {
    std::string s = rat_num(q).str();
    if (rat_den(q) != 1) s += "/" + rat_den(q).str();
    return s;
}

inline Rat parse_rat(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ParseError("empty rational literal");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw ParseError("rational with zero denominator: " + text);
        return Rat(num, den);
    } catch (const std::exception& e) {
        throw ParseError("bad rational literal '" + text + "'");
    }
}

using QVec = std::vector<Rat>;
using ZVec = std::vector<Int>;

inline Rat dot(const QVec& a, const QVec& b) {
    Rat r = 0;
    for (size_t i = 0; i < a.size(); ++i) r += a[i] * b[i];
    return r;
}

inline QVec to_qvec(const std::vector<int>& v) {
    QVec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = v[i];
    return r;
}

// Scales a rational vector by the unique positive rational making it an
// integer vector with content 1. Zero vectors are returned unchanged.
inline ZVec primitive_integer(const QVec& v) {
    Int l = 1;
    for (const Rat& q : v) l = boost::multiprecision::lcm(l, rat_den(q));
    ZVec w(v.size());
    Int g = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        w[i] = rat_num(v[i]) * (l / rat_den(v[i]));
        g = boost::multiprecision::gcd(g, w[i]);
    }
    if (g > 1)
        for (Int& x : w) x /= g;
    return w;
}

inline Int binomial(long n, long k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    Int r = 1;
    for (long i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

// Valuations take values in Q together with +infinity (valuation of zero).
// An empty optional encodes +infinity.
using ValOrInf = std::optional<Rat>;

inline bool val_less(const ValOrInf& a, const ValOrInf& b) {
    if (!a) return false;
    if (!b) return true;
    return *a < *b;
}

}  // namespace tropgrob
