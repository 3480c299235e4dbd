#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "tropgrob/errors.hpp"
#include "tropgrob/rational.hpp"
#include "tropgrob/valued_field.hpp"

namespace tropgrob {

// Exponent vector of a (Laurent) monomial; entries may be negative.
struct Monomial {
    std::vector<int> e;

    Monomial() = default;
    explicit Monomial(std::vector<int> exps) : e(std::move(exps)) {}
    static Monomial unit(int arity) { return Monomial(std::vector<int>(arity, 0)); }

    int arity() const { return static_cast<int>(e.size()); }
    long degree() const {
        long d = 0;
        for (int x : e) d += x;
        return d;
    }
    bool is_polynomial() const {
        return std::all_of(e.begin(), e.end(), [](int x) { return x >= 0; });
    }
    bool divides(const Monomial& m) const {
        for (int i = 0; i < arity(); ++i)
            if (e[i] > m.e[i]) return false;
        return true;
    }
    Rat dot(const QVec& w) const {
        Rat r = 0;
        for (int i = 0; i < arity(); ++i) r += w[i] * e[i];
        return r;
    }
    friend Monomial operator+(const Monomial& a, const Monomial& b) {
        Monomial r = a;
        for (int i = 0; i < r.arity(); ++i) r.e[i] += b.e[i];
        return r;
    }
    friend Monomial operator-(const Monomial& a, const Monomial& b) {
        Monomial r = a;
        for (int i = 0; i < r.arity(); ++i) r.e[i] -= b.e[i];
        return r;
    }
    bool operator==(const Monomial& o) const { return e == o.e; }
    bool operator!=(const Monomial& o) const { return e != o.e; }
    // Lexicographic order, first coordinate most significant.
    bool operator<(const Monomial& o) const {
        return std::lexicographical_compare(e.begin(), e.end(), o.e.begin(), o.e.end());
    }
};

// Descending lexicographic order: the canonical term order for storage,
// printing, and Macaulay matrix columns.
struct MonomialLexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const { return b < a; }
};

// Sparse multivariate polynomial with exact coefficients. C is FieldElement
// (coefficients in K) or ResidueElement (coefficients in the residue field).
// Invariant: no zero coefficients stored; fixed arity.
template <class C>
class Polynomial {
public:
    using Terms = std::map<Monomial, C, MonomialLexGreater>;

    Polynomial() = default;
    explicit Polynomial(int arity) : arity_(arity) {}

    int arity() const { return arity_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const Terms& terms() const { return terms_; }
    bool is_monomial() const { return terms_.size() == 1; }

    void add_term(const Monomial& m, const C& c) {
        if (m.arity() != arity_) throw InvariantViolation("monomial arity mismatch");
        if (c.is_zero()) return;
        auto it = terms_.find(m);
        if (it == terms_.end())
            terms_.emplace(m, c);
        else {
            it->second = it->second + c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        Polynomial r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        Polynomial r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
        return r;
    }
    Polynomial operator-() const {
        Polynomial r(arity_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial r(a.arity_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(ma + mb, ca * cb);
        return r;
    }
    Polynomial scaled(const C& c) const {
        Polynomial r(arity_);
        if (c.is_zero()) return r;
        for (const auto& [m, co] : terms_) r.add_term(m, co * c);
        return r;
    }
    Polynomial shifted(const Monomial& m) const {
        Polynomial r(arity_);
        for (const auto& [mm, c] : terms_) r.terms_.emplace(mm + m, c);
        return r;
    }
    bool operator==(const Polynomial& o) const {
        return arity_ == o.arity_ && terms_ == o.terms_;
    }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    long degree() const {
        if (is_zero()) throw ZeroPolynomial("degree of zero polynomial");
        long d = terms_.begin()->first.degree();
        for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }
    bool is_homogeneous() const {
        if (is_zero()) return true;
        long d = terms_.begin()->first.degree();
        for (const auto& [m, c] : terms_)
            if (m.degree() != d) return false;
        return true;
    }
    bool is_polynomial() const {
        for (const auto& [m, c] : terms_)
            if (!m.is_polynomial()) return false;
        return true;
    }

private:
    int arity_ = 0;
    Terms terms_;
};

using KPoly = Polynomial<FieldElement>;
using RPoly = Polynomial<ResidueElement>;

// Value and argument set of trop(f) at w: the minimum over terms of
// val(c_u) + w.u together with the monomials attaining it.
struct TropValue {
    Rat value;
    std::vector<Monomial> argmin;
};

inline TropValue trop_eval(const KPoly& f, const QVec& w) {
    if (f.is_zero()) throw ZeroPolynomial("trop_eval of zero polynomial");
    if (static_cast<int>(w.size()) != f.arity())
        throw InvariantViolation("weight vector arity mismatch");
    TropValue out;
    bool first = true;
    for (const auto& [m, c] : f.terms()) {
        Rat v = c.val_nonzero() + m.dot(w);
        if (first || v < out.value) {
            out.value = v;
            out.argmin.clear();
            first = false;
        }
        if (v == out.value) out.argmin.push_back(m);
    }
    return out;
}

// Initial form over the residue field: keeps the terms attaining the tropical
// minimum, with coefficients replaced by their unit parts. Accepts arbitrary
// rational weights; the computation only splits at coefficient valuations,
// which always lie in the value group (scalar extension semantics).
inline RPoly initial_form_ext(const KPoly& f, const QVec& w) {
    TropValue t = trop_eval(f, w);
    RPoly g(f.arity());
    for (const Monomial& m : t.argmin) g.add_term(m, f.terms().at(m).unit_part());
    return g;
}

// Public initial form: rejects weights outside the value group.
inline RPoly initial_form(const KPoly& f, const QVec& w) {
    if (f.is_zero()) throw ZeroPolynomial("initial form of zero polynomial");
    const FieldSpec& spec = f.terms().begin()->second.spec();
    for (const Rat& q : w)
        if (!spec.gamma_contains(q))
            throw ValueGroupError("weight entry " + rat_str(q) + " outside value group of " +
                                  spec.str());
    return initial_form_ext(f, w);
}

// Initial form of a residue polynomial under the trivial valuation: keeps the
// terms minimizing v.u.
inline RPoly initial_form_residue(const RPoly& g, const QVec& v) {
    if (g.is_zero()) throw ZeroPolynomial("initial form of zero polynomial");
    if (static_cast<int>(v.size()) != g.arity())
        throw InvariantViolation("weight vector arity mismatch");
    Rat best;
    bool first = true;
    for (const auto& [m, c] : g.terms()) {
        Rat d = m.dot(v);
        if (first || d < best) {
            best = d;
            first = false;
        }
    }
    RPoly r(g.arity());
    for (const auto& [m, c] : g.terms())
        if (m.dot(v) == best) r.add_term(m, c);
    return r;
}

// Largest eps such that the argmin pattern of trop(f) at w + eps'*v is
// constant for all 0 < eps' < eps; returns 1 when no competing term exists.
// On (0, eps) that pattern is argmin of v.u over the w-argmin, so
// in_{w+eps'v}(f) = in_v(in_w(f)) there.
inline Rat epsilon_bound(const KPoly& f, const QVec& w, const QVec& v) {
    TropValue t = trop_eval(f, w);
    Rat w_prime;
    bool first = true;
    for (const Monomial& m : t.argmin) {
        Rat d = m.dot(v);
        if (first || d < w_prime) {
            w_prime = d;
            first = false;
        }
    }
    Rat eps = 0;
    bool have = false;
    for (const auto& [m, c] : f.terms()) {
        Rat gap = c.val_nonzero() + m.dot(w) - t.value;
        if (gap == 0) continue;  // w-minimal terms never cross for eps' > 0
        Rat slope = m.dot(v);
        if (slope >= w_prime) continue;  // gap widens or stays
        Rat cross = gap / (w_prime - slope);
        if (!have || cross < eps) {
            eps = cross;
            have = true;
        }
    }
    return have ? eps : Rat(1);
}

// Homogenization: prepend a coordinate x0 with exponent deg(f) - |u|.
inline KPoly homogenize(const KPoly& f) {
    if (f.is_zero()) throw ZeroPolynomial("homogenize of zero polynomial");
    if (!f.is_polynomial())
        throw NotPolynomial("homogenize requires nonnegative exponents; apply monomial_clear");
    long d = f.degree();
    KPoly r(f.arity() + 1);
    for (const auto& [m, c] : f.terms()) {
        std::vector<int> e(f.arity() + 1);
        e[0] = static_cast<int>(d - m.degree());
        std::copy(m.e.begin(), m.e.end(), e.begin() + 1);
        r.add_term(Monomial(std::move(e)), c);
    }
    return r;
}

// Substitutes x0 = 1 and drops the first coordinate.
template <class C>
Polynomial<C> dehomogenize(const Polynomial<C>& f) {
    Polynomial<C> r(f.arity() - 1);
    for (const auto& [m, c] : f.terms())
        r.add_term(Monomial(std::vector<int>(m.e.begin() + 1, m.e.end())), c);
    return r;
}

// Multiplies by the unique monomial making all exponents nonnegative with
// some exponent zero in each variable.
template <class C>
Polynomial<C> monomial_clear(const Polynomial<C>& f) {
    if (f.is_zero()) throw ZeroPolynomial("monomial_clear of zero polynomial");
    std::vector<int> mins = f.terms().begin()->first.e;
    for (const auto& [m, c] : f.terms())
        for (int i = 0; i < f.arity(); ++i) mins[i] = std::min(mins[i], m.e[i]);
    Polynomial<C> r(f.arity());
    for (const auto& [m, c] : f.terms()) {
        Monomial mm = m;
        for (int i = 0; i < f.arity(); ++i) mm.e[i] -= mins[i];
        r.add_term(mm, c);
    }
    return r;
}

// All monomials of the given total degree in `arity` variables, in descending
// lexicographic order: the fixed column order of Macaulay matrices.
inline std::vector<Monomial> monomials_of_degree(int arity, long degree) {
    std::vector<Monomial> out;
    std::vector<int> cur(arity, 0);
    auto rec = [&](auto&& self, int pos, long rem) -> void {
        if (pos == arity - 1) {
            cur[pos] = static_cast<int>(rem);
            out.push_back(Monomial(cur));
            return;
        }
        for (long k = rem; k >= 0; --k) {
            cur[pos] = static_cast<int>(k);
            self(self, pos + 1, rem - k);
        }
    };
    if (arity == 0) {
        if (degree == 0) out.push_back(Monomial::unit(0));
        return out;
    }
    rec(rec, 0, degree);
    return out;
}

}  // namespace tropgrob
