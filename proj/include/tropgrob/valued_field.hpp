#pragma once

#include <map>
#include <string>
#include <utility>

#include "tropgrob/errors.hpp"
#include "tropgrob/rational.hpp"

namespace tropgrob {

enum class FieldKind { PAdic, TAdic };

// Describes the coefficient field: Q with the p-adic valuation (value group
// Z) or the rational function field Q(t^(1/N)) with the t-adic valuation
// (value group (1/N)Z). The residue field is Z/p respectively Q.
class FieldSpec {
public:
    static FieldSpec padic(const Int& p) {
        if (p < 2 || !is_prime(p)) throw InvalidFieldSpec("p must be a prime, got " + p.str());
        FieldSpec s;
        s.kind_ = FieldKind::PAdic;
        s.p_ = p;
        return s;
    }
    static FieldSpec tadic(long ramification) {
        if (ramification < 1)
            throw InvalidFieldSpec("N must be a positive integer, got " + std::to_string(ramification));
        FieldSpec s;
        s.kind_ = FieldKind::TAdic;
        s.N_ = ramification;
        return s;
    }

    FieldKind kind() const { return kind_; }
    const Int& prime() const { return p_; }
    long ramification() const { return N_; }

    // Value group membership: Z for PAdic, (1/N)Z for TAdic.
    bool gamma_contains(const Rat& q) const {
        if (kind_ == FieldKind::PAdic) return rat_den(q) == 1;
        return rat_den(q * N_) == 1;
    }

    bool operator==(const FieldSpec& o) const {
        return kind_ == o.kind_ && p_ == o.p_ && N_ == o.N_;
    }
    bool operator!=(const FieldSpec& o) const { return !(*this == o); }

    std::string str() const {
        if (kind_ == FieldKind::PAdic) return "Qp p=" + p_.str();
        return "Qt N=" + std::to_string(N_);
    }

private:
    FieldSpec() = default;
    static bool is_prime(const Int& p) {
        if (p < 2) return false;
        for (Int d = 2; d * d <= p; ++d)
            if (p % d == 0) return false;
        return true;
    }

    FieldKind kind_ = FieldKind::PAdic;
    Int p_ = 2;
    long N_ = 1;
};

namespace detail {

// Sparse univariate polynomial over Q in the uniformizer s = t^(1/N).
// Invariant: no zero coefficients stored.
struct UPoly {
    std::map<long, Rat> c;

    bool is_zero() const { return c.empty(); }
    long min_exp() const { return c.begin()->first; }
    long max_exp() const { return c.rbegin()->first; }
    const Rat& min_coeff() const { return c.begin()->second; }

    void set(long e, const Rat& v) {
        if (v == 0)
            c.erase(e);
        else
            c[e] = v;
    }
    void add_term(long e, const Rat& v) {
        auto it = c.find(e);
        if (it == c.end()) {
            if (v != 0) c[e] = v;
        } else {
            it->second += v;
            if (it->second == 0) c.erase(it);
        }
    }

    static UPoly constant(const Rat& v) {
        UPoly r;
        r.set(0, v);
        return r;
    }
    static UPoly power(long e) {
        UPoly r;
        r.set(e, 1);
        return r;
    }

    friend UPoly operator+(const UPoly& a, const UPoly& b) {
        UPoly r = a;
        for (const auto& [e, v] : b.c) r.add_term(e, v);
        return r;
    }
    friend UPoly operator-(const UPoly& a, const UPoly& b) {
        UPoly r = a;
        for (const auto& [e, v] : b.c) r.add_term(e, -v);
        return r;
    }
    friend UPoly operator*(const UPoly& a, const UPoly& b) {
        UPoly r;
        for (const auto& [ea, va] : a.c)
            for (const auto& [eb, vb] : b.c) r.add_term(ea + eb, va * vb);
        return r;
    }
    UPoly scaled(const Rat& v) const {
        UPoly r;
        if (v == 0) return r;
        for (const auto& [e, co] : c) r.c[e] = co * v;
        return r;
    }
    bool operator==(const UPoly& o) const { return c == o.c; }
};

// Euclidean remainder a mod b, b nonzero.
inline UPoly upoly_rem(UPoly a, const UPoly& b) {
    while (!a.is_zero() && a.max_exp() >= b.max_exp()) {
        long shift = a.max_exp() - b.max_exp();
        Rat f = a.c.rbegin()->second / b.c.rbegin()->second;
        UPoly t = b.scaled(f);
        UPoly shifted;
        for (const auto& [e, v] : t.c) shifted.c[e + shift] = v;
        a = a - shifted;
    }
    return a;
}

// Monic gcd; gcd(0, b) = monic b.
inline UPoly upoly_gcd(UPoly a, UPoly b) {
    while (!b.is_zero()) {
        UPoly r = upoly_rem(a, b);
        a = b;
        b = r;
    }
    if (!a.is_zero()) a = a.scaled(Rat(1) / a.c.rbegin()->second);
    return a;
}

// Exact division; quotient must be a polynomial with exponents >= 0 after
// accounting for min exponents (division happens inside Q[s, s^-1], callers
// only divide by genuine factors).
inline UPoly upoly_div_exact(const UPoly& a, const UPoly& b) {
    UPoly rem = a, q;
    while (!rem.is_zero()) {
        long shift = rem.max_exp() - b.max_exp();
        if (shift < 0) throw InvariantViolation("inexact univariate division");
        Rat f = rem.c.rbegin()->second / b.c.rbegin()->second;
        q.add_term(shift, f);
        UPoly t = b.scaled(f);
        UPoly shifted;
        for (const auto& [e, v] : t.c) shifted.c[e + shift] = v;
        rem = rem - shifted;
    }
    return q;
}

inline long padic_val_int(Int n, const Int& p) {
    long v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

// Inverse of a modulo p (a not divisible by p), result in [0, p).
inline Int mod_inverse(Int a, const Int& p) {
    a %= p;
    if (a < 0) a += p;
    Int t = 0, new_t = 1, r = p, new_r = a;
    while (new_r != 0) {
        Int q = r / new_r;
        Int tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (r != 1) throw ZeroDivision("element not invertible modulo p");
    if (t < 0) t += p;
    return t;
}

}  // namespace detail

// Element of the residue field: Z/p for PAdic, Q for TAdic.
class ResidueElement {
public:
    static ResidueElement zero(const FieldSpec& spec) { return ResidueElement(spec, Int(0), Rat(0)); }
    static ResidueElement one(const FieldSpec& spec) { return ResidueElement(spec, Int(1), Rat(1)); }
    static ResidueElement from_int(const FieldSpec& spec, const Int& n) {
        if (spec.kind() == FieldKind::PAdic) {
            Int r = n % spec.prime();
            if (r < 0) r += spec.prime();
            return ResidueElement(spec, r, Rat(0));
        }
        return ResidueElement(spec, Int(0), Rat(n));
    }
    static ResidueElement from_rat(const FieldSpec& spec, const Rat& q) {
        if (spec.kind() == FieldKind::TAdic) return ResidueElement(spec, Int(0), q);
        Int den = rat_den(q);
        if (den % spec.prime() == 0)
            throw NotInValuationRing("denominator divisible by p in residue");
        Int r = rat_num(q) % spec.prime() * detail::mod_inverse(den, spec.prime()) % spec.prime();
        if (r < 0) r += spec.prime();
        return ResidueElement(spec, r, Rat(0));
    }

    const FieldSpec& spec() const { return spec_; }
    bool is_zero() const {
        return spec_.kind() == FieldKind::PAdic ? int_ == 0 : rat_ == 0;
    }
    bool is_one() const {
        return spec_.kind() == FieldKind::PAdic ? int_ == 1 : rat_ == 1;
    }

    friend ResidueElement operator+(const ResidueElement& a, const ResidueElement& b) {
        a.check(b);
        if (a.spec_.kind() == FieldKind::PAdic)
            return ResidueElement(a.spec_, (a.int_ + b.int_) % a.spec_.prime(), Rat(0));
        return ResidueElement(a.spec_, Int(0), a.rat_ + b.rat_);
    }
    friend ResidueElement operator-(const ResidueElement& a, const ResidueElement& b) {
        a.check(b);
        if (a.spec_.kind() == FieldKind::PAdic) {
            Int r = (a.int_ - b.int_) % a.spec_.prime();
            if (r < 0) r += a.spec_.prime();
            return ResidueElement(a.spec_, r, Rat(0));
        }
        return ResidueElement(a.spec_, Int(0), a.rat_ - b.rat_);
    }
    ResidueElement operator-() const { return zero(spec_) - *this; }
    friend ResidueElement operator*(const ResidueElement& a, const ResidueElement& b) {
        a.check(b);
        if (a.spec_.kind() == FieldKind::PAdic)
            return ResidueElement(a.spec_, a.int_ * b.int_ % a.spec_.prime(), Rat(0));
        return ResidueElement(a.spec_, Int(0), a.rat_ * b.rat_);
    }
    friend ResidueElement operator/(const ResidueElement& a, const ResidueElement& b) {
        a.check(b);
        if (b.is_zero()) throw ZeroDivision("division by zero residue element");
        if (a.spec_.kind() == FieldKind::PAdic)
            return ResidueElement(
                a.spec_, a.int_ * detail::mod_inverse(b.int_, a.spec_.prime()) % a.spec_.prime(),
                Rat(0));
        return ResidueElement(a.spec_, Int(0), a.rat_ / b.rat_);
    }
    bool operator==(const ResidueElement& o) const {
        return spec_ == o.spec_ && int_ == o.int_ && rat_ == o.rat_;
    }
    bool operator!=(const ResidueElement& o) const { return !(*this == o); }

    std::string str() const {
        return spec_.kind() == FieldKind::PAdic ? int_.str() : rat_str(rat_);
    }
    // Exposes the rational payload (TAdic) / canonical representative (PAdic).
    Rat rat_value() const { return spec_.kind() == FieldKind::PAdic ? Rat(int_) : rat_; }

private:
    ResidueElement(FieldSpec spec, Int i, Rat r)
        : spec_(std::move(spec)), int_(std::move(i)), rat_(std::move(r)) {}
    void check(const ResidueElement& o) const {
        if (spec_ != o.spec_) throw InvalidFieldSpec("mixed field specs in residue arithmetic");
    }

    FieldSpec spec_;
    Int int_;  // PAdic payload, canonical representative in [0, p)
    Rat rat_;  // TAdic payload
};

// Element of the valued field. Canonical form: reduced fraction; the TAdic
// denominator is coprime to the numerator and normalized so its lowest term
// has coefficient 1.
class FieldElement {
public:
    static FieldElement zero(const FieldSpec& spec) { return from_rat(spec, Rat(0)); }
    static FieldElement one(const FieldSpec& spec) { return from_rat(spec, Rat(1)); }
    static FieldElement from_rat(const FieldSpec& spec, const Rat& q) {
        FieldElement e(spec);
        if (spec.kind() == FieldKind::PAdic)
            e.rat_ = q;
        else {
            e.num_ = detail::UPoly::constant(q);
            e.den_ = detail::UPoly::constant(Rat(1));
        }
        return e;
    }
    // t^q; requires q in (1/N)Z.
    static FieldElement t_power(const FieldSpec& spec, const Rat& q) {
        if (spec.kind() != FieldKind::TAdic)
            throw ParseError("t is only an element of Qt fields");
        Rat e = q * spec.ramification();
        if (rat_den(e) != 1)
            throw ValueGroupError("exponent " + rat_str(q) + " not in (1/N)Z for N=" +
                                  std::to_string(spec.ramification()));
        FieldElement r(spec);
        long k = static_cast<long>(rat_num(e));
        if (k >= 0) {
            r.num_ = detail::UPoly::power(k);
            r.den_ = detail::UPoly::constant(Rat(1));
        } else {
            r.num_ = detail::UPoly::constant(Rat(1));
            r.den_ = detail::UPoly::power(-k);
        }
        return r;
    }

    const FieldSpec& spec() const { return spec_; }
    bool is_zero() const {
        return spec_.kind() == FieldKind::PAdic ? rat_ == 0 : num_.is_zero();
    }
    bool is_one() const { return *this == one(spec_); }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
        a.check(b);
        FieldElement r(a.spec_);
        if (a.spec_.kind() == FieldKind::PAdic)
            r.rat_ = a.rat_ + b.rat_;
        else
            r.assign_reduced(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
        return r;
    }
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
        a.check(b);
        FieldElement r(a.spec_);
        if (a.spec_.kind() == FieldKind::PAdic)
            r.rat_ = a.rat_ - b.rat_;
        else
            r.assign_reduced(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
        return r;
    }
    FieldElement operator-() const { return zero(spec_) - *this; }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
        a.check(b);
        FieldElement r(a.spec_);
        if (a.spec_.kind() == FieldKind::PAdic)
            r.rat_ = a.rat_ * b.rat_;
        else
            r.assign_reduced(a.num_ * b.num_, a.den_ * b.den_);
        return r;
    }
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
        a.check(b);
        if (b.is_zero()) throw ZeroDivision("division by zero field element");
        FieldElement r(a.spec_);
        if (a.spec_.kind() == FieldKind::PAdic)
            r.rat_ = a.rat_ / b.rat_;
        else
            r.assign_reduced(a.num_ * b.den_, a.den_ * b.num_);
        return r;
    }
    bool operator==(const FieldElement& o) const {
        return spec_ == o.spec_ && rat_ == o.rat_ && num_ == o.num_ && den_ == o.den_;
    }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    // val(0) = +infinity, encoded as an empty optional.
    ValOrInf val() const {
        if (is_zero()) return std::nullopt;
        if (spec_.kind() == FieldKind::PAdic) {
            long v = detail::padic_val_int(rat_num(rat_), spec_.prime()) -
                     detail::padic_val_int(rat_den(rat_), spec_.prime());
            return Rat(v);
        }
        return Rat(num_.min_exp() - den_.min_exp(), spec_.ramification());
    }
    // Valuation of a nonzero element as a plain rational.
    Rat val_nonzero() const {
        ValOrInf v = val();
        if (!v) throw ZeroElement("valuation of zero requested as finite");
        return *v;
    }

    // Image in the residue field; requires val >= 0.
    ResidueElement residue() const {
        if (is_zero()) return ResidueElement::zero(spec_);
        Rat v = val_nonzero();
        if (v < 0) throw NotInValuationRing("residue of element with negative valuation");
        if (v > 0) return ResidueElement::zero(spec_);
        if (spec_.kind() == FieldKind::PAdic) return ResidueElement::from_rat(spec_, rat_);
        // Canonical form gives min_exp(den) = 0 and min coefficient 1 here.
        auto it_n = num_.c.find(0);
        Rat n0 = it_n == num_.c.end() ? Rat(0) : it_n->second;
        auto it_d = den_.c.find(0);
        Rat d0 = it_d == den_.c.end() ? Rat(0) : it_d->second;
        return ResidueElement::from_rat(spec_, n0 / d0);
    }

    // residue(split(-val(a)) * a); the multiplicative "leading unit".
    ResidueElement unit_part() const {
        if (is_zero()) throw ZeroElement("unit_part of zero");
        if (spec_.kind() == FieldKind::PAdic) {
            Int n = rat_num(rat_), d = rat_den(rat_);
            const Int& p = spec_.prime();
            while (n % p == 0) n /= p;
            while (d % p == 0) d /= p;
            return ResidueElement::from_rat(spec_, Rat(n, d));
        }
        return ResidueElement::from_rat(spec_, num_.min_coeff() / den_.min_coeff());
    }

    std::string str() const;

private:
    friend FieldElement split(const FieldSpec&, const Rat&);
    explicit FieldElement(FieldSpec spec) : spec_(std::move(spec)) {}
    void check(const FieldElement& o) const {
        if (spec_ != o.spec_) throw InvalidFieldSpec("mixed field specs in field arithmetic");
    }
    // Installs num/den in canonical reduced form.
    void assign_reduced(detail::UPoly n, detail::UPoly d) {
        if (n.is_zero()) {
            num_ = n;
            den_ = detail::UPoly::constant(Rat(1));
            return;
        }
        detail::UPoly g = detail::upoly_gcd(n, d);
        if (!(g.c.size() == 1 && g.c.count(0))) {
            n = detail::upoly_div_exact(n, g);
            d = detail::upoly_div_exact(d, g);
        }
        // Shared s-powers cancel.
        long shift = std::min(n.min_exp(), d.min_exp());
        if (shift != 0) {
            detail::UPoly n2, d2;
            for (const auto& [e, v] : n.c) n2.c[e - shift] = v;
            for (const auto& [e, v] : d.c) d2.c[e - shift] = v;
            n = n2;
            d = d2;
        }
        Rat lead = d.min_coeff();
        num_ = n.scaled(Rat(1) / lead);
        den_ = d.scaled(Rat(1) / lead);
    }

    FieldSpec spec_;
    Rat rat_;                  // PAdic payload
    detail::UPoly num_, den_;  // TAdic payload
};

// The splitting w -> t^w of the valuation: p^w for PAdic (w in Z),
// t^w for TAdic (w in (1/N)Z). Errors with ValueGroupError otherwise.
inline FieldElement split(const FieldSpec& spec, const Rat& w) {
    if (!spec.gamma_contains(w))
        throw ValueGroupError("split at " + rat_str(w) + " outside value group of " + spec.str());
    if (spec.kind() == FieldKind::TAdic) return FieldElement::t_power(spec, w);
    Int e = rat_num(w);
    FieldElement r(spec);
    Rat q = 1;
    for (Int i = 0; i < boost::multiprecision::abs(e); ++i) q *= spec.prime();
    r.rat_ = e >= 0 ? q : 1 / q;
    return r;
}

inline std::string FieldElement::str() const {
    if (spec_.kind() == FieldKind::PAdic) return rat_str(rat_);
    if (is_zero()) return "0";
    auto upoly_str = [&](const detail::UPoly& u) {
        std::string s;
        for (const auto& [e, v] : u.c) {
            std::string term;
            Rat q(e, spec_.ramification());
            if (e == 0)
                term = rat_str(v);
            else {
                std::string tp;
                if (q == 1)
                    tp = "t";
                else if (rat_den(q) == 1 && q > 0)
                    tp = "t^" + rat_str(q);
                else
                    tp = "t^(" + rat_str(q) + ")";
                if (v == 1)
                    term = tp;
                else if (v == -1)
                    term = "-" + tp;
                else
                    term = rat_str(v) + "*" + tp;
            }
            if (!s.empty() && term[0] != '-') s += "+";
            s += term;
        }
        return s;
    };
    std::string n = upoly_str(num_);
    if (den_ == detail::UPoly::constant(Rat(1))) return n;
    std::string nn = num_.c.size() > 1 ? "(" + n + ")" : n;
    return nn + "/(" + upoly_str(den_) + ")";
}

}  // namespace tropgrob
