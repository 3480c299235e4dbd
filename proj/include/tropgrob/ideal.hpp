#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tropgrob/errors.hpp"
#include "tropgrob/linalg.hpp"
#include "tropgrob/poly.hpp"
#include "tropgrob/rational.hpp"
#include "tropgrob/valued_field.hpp"

namespace tropgrob {

// A weight together with an infinitesimal tilt direction.  Term orders
// compare (val(c) + w.u, v.u) lexicographically, which computes initial data
// at w + eps*v for every sufficiently small eps > 0 without choosing eps.
struct PairWeight {
    QVec w;
    QVec v;

    static PairWeight plain(QVec weight) {
        PairWeight p;
        p.v.assign(weight.size(), Rat(0));
        p.w = std::move(weight);
        return p;
    }
    static PairWeight tilted(QVec weight, QVec tilt) {
        if (weight.size() != tilt.size()) throw ArityError("weight/tilt arity mismatch");
        PairWeight p;
        p.w = std::move(weight);
        p.v = std::move(tilt);
        return p;
    }
    size_t arity() const { return w.size(); }
};

struct PairVal {
    Rat a;
    Rat b;

    bool operator==(const PairVal& o) const { return a == o.a && b == o.b; }
    bool operator<(const PairVal& o) const { return a != o.a ? a < o.a : b < o.b; }
};

inline PairVal term_pairval(const FieldElement& c, const Monomial& u, const PairWeight& pw) {
    return {c.val_nonzero() + u.dot(pw.w), u.dot(pw.v)};
}

namespace detail {

inline void require_weight_in_gamma(const FieldSpec& spec, const QVec& w) {
    for (const Rat& q : w)
        if (!spec.gamma_contains(q))
            throw ValueGroupError("weight entry " + rat_str(q) + " is not in the value group of " +
                                  spec.str());
}

}  // namespace detail

// A homogeneous ideal presented by generators, with its graded pieces
// materialized degree by degree as exact coefficient matrices.
class HomogeneousIdeal {
public:
    struct DegreePiece {
        long degree = 0;
        std::vector<Monomial> cols;  // monomials of this degree, lex descending
        std::vector<KPoly> basis;    // independent rows spanning the degree piece
    };

    HomogeneousIdeal(FieldSpec spec, std::vector<KPoly> gens)
        : spec_(std::move(spec)), gens_(std::move(gens)) {
        if (gens_.empty()) throw ZeroPolynomial("ideal needs at least one generator");
        arity_ = gens_.front().arity();
        for (const KPoly& g : gens_) {
            if (g.is_zero()) throw ZeroPolynomial("zero polynomial among ideal generators");
            if (g.arity() != arity_) throw ArityError("generators in different polynomial rings");
            if (!g.is_polynomial())
                throw NotPolynomial("ideal generators must have nonnegative exponents");
            if (!g.is_homogeneous())
                throw NotHomogeneous("generator is not homogeneous: run through tropicalization "
                                     "preprocessing first");
        }
    }

    const FieldSpec& spec() const { return spec_; }
    int arity() const { return arity_; }
    const std::vector<KPoly>& gens() const { return gens_; }

    long max_gen_degree() const {
        long d = 0;
        for (const KPoly& g : gens_) d = std::max(d, g.degree());
        return d;
    }

    const DegreePiece& piece(long d) const {
        auto it = cache_.find(d);
        if (it != cache_.end()) return it->second;
        DegreePiece p;
        p.degree = d;
        p.cols = monomials_of_degree(arity_, d);
        std::map<Monomial, size_t, MonomialLexGreater> col_index;
        for (size_t j = 0; j < p.cols.size(); ++j) col_index.emplace(p.cols[j], j);

        std::vector<KPoly> rows;
        for (const KPoly& g : gens_) {
            long shift = d - g.degree();
            if (shift < 0) continue;
            for (const Monomial& m : monomials_of_degree(arity_, shift))
                rows.push_back(g.shifted(m));
        }
        DenseMatrix<FieldElement> M(rows.size(), p.cols.size(), FieldElement::zero(spec_));
        for (size_t i = 0; i < rows.size(); ++i)
            for (const auto& [m, c] : rows[i].terms()) M.at(i, col_index.at(m)) = c;
        std::vector<size_t> piv = rref(M);
        for (size_t i = 0; i < piv.size(); ++i) {
            KPoly f(arity_);
            for (size_t j = 0; j < p.cols.size(); ++j)
                if (!M.at(i, j).is_zero()) f.add_term(p.cols[j], M.at(i, j));
            p.basis.push_back(std::move(f));
        }
        return cache_.emplace(d, std::move(p)).first->second;
    }

    // dim of (R/I)_d over the field.
    long hilbert_dim(long d) const {
        const DegreePiece& p = piece(d);
        return static_cast<long>(p.cols.size()) - static_cast<long>(p.basis.size());
    }

private:
    FieldSpec spec_;
    std::vector<KPoly> gens_;
    int arity_ = 0;
    mutable std::map<long, DegreePiece> cache_;
};

// The space of initial forms of a graded piece at a (possibly tilted) weight,
// in canonical reduced form over the residue field.
struct InitialSpace {
    long degree = 0;
    std::vector<RPoly> reduced;             // canonical residue-field basis (reduced echelon)
    std::vector<KPoly> witnesses;           // rows of I_d whose initial forms are triangular
    std::vector<Monomial> member_monomials; // monomials contained in the span
    bool is_monomial_space = false;
    std::string key;
};

namespace detail {

struct ElimRow {
    KPoly f;
    PairVal t;
    Monomial pivot;
};

inline void recompute_pivot(ElimRow& r, const PairWeight& pw) {
    bool first = true;
    for (const auto& [m, c] : r.f.terms()) {
        PairVal pv = term_pairval(c, m, pw);
        if (first || pv < r.t) {
            r.t = pv;
            r.pivot = m;
            first = false;
        } else if (pv == r.t && m < r.pivot) {
            r.pivot = m;
        }
    }
}

// Initial form of f at the tilted weight: terms attaining the minimal pair
// value, with unit-part coefficients.
inline RPoly pair_initial_form(const KPoly& f, const PairWeight& pw) {
    PairVal best;
    bool first = true;
    for (const auto& [m, c] : f.terms()) {
        PairVal pv = term_pairval(c, m, pw);
        if (first || pv < best) {
            best = pv;
            first = false;
        }
    }
    RPoly g(f.arity());
    for (const auto& [m, c] : f.terms())
        if (term_pairval(c, m, pw) == best) g.add_term(m, c.unit_part());
    return g;
}

}  // namespace detail

// Compute the initial space of the degree-d piece at a tilted weight.  Rows
// start as an independent basis and are combined until their initial forms
// have pairwise distinct pivot monomials; triangularity then makes the
// initial forms an independent spanning set of the initial space.
inline InitialSpace initial_space_ext(const HomogeneousIdeal& I, const PairWeight& pw, long d) {
    if (static_cast<int>(pw.arity()) != I.arity())
        throw ArityError("weight arity does not match the polynomial ring");
    const auto& piece = I.piece(d);

    std::vector<detail::ElimRow> rows;
    for (const KPoly& f : piece.basis) {
        detail::ElimRow r;
        r.f = f;
        detail::recompute_pivot(r, pw);
        rows.push_back(std::move(r));
    }

    for (;;) {
        std::map<Monomial, std::vector<size_t>> groups;
        for (size_t i = 0; i < rows.size(); ++i) groups[rows[i].pivot].push_back(i);
        bool changed = false;
        for (auto& [mono, idxs] : groups) {
            if (idxs.size() < 2) continue;
            changed = true;
            size_t lead = idxs[0];
            for (size_t i : idxs)
                if (rows[i].t < rows[lead].t) lead = i;
            const FieldElement& cg = rows[lead].f.terms().at(mono);
            for (size_t i : idxs) {
                if (i == lead) continue;
                FieldElement lambda = rows[i].f.terms().at(mono) / cg;
                rows[i].f = rows[i].f - rows[lead].f.scaled(lambda);
                if (rows[i].f.is_zero())
                    throw InvariantViolation("independent row vanished during elimination");
                detail::recompute_pivot(rows[i], pw);
            }
        }
        if (!changed) break;
    }

    InitialSpace S;
    S.degree = d;
    for (auto& r : rows) S.witnesses.push_back(r.f);

    // Reduce the initial forms over the residue field for a canonical basis.
    std::map<Monomial, size_t, MonomialLexGreater> col_index;
    for (size_t j = 0; j < piece.cols.size(); ++j) col_index.emplace(piece.cols[j], j);
    ResidueElement zero = ResidueElement::from_int(I.spec(), 0);
    DenseMatrix<ResidueElement> M(rows.size(), piece.cols.size(), zero);
    for (size_t i = 0; i < rows.size(); ++i) {
        RPoly in_i = detail::pair_initial_form(rows[i].f, pw);
        for (const auto& [m, c] : in_i.terms()) M.at(i, col_index.at(m)) = c;
    }
    std::vector<size_t> piv = rref(M);
    if (piv.size() != rows.size())
        throw InvariantViolation("initial space dimension dropped below the piece dimension");
    for (size_t i = 0; i < piv.size(); ++i) {
        RPoly g(I.arity());
        size_t support = 0;
        for (size_t j = 0; j < piece.cols.size(); ++j)
            if (!M.at(i, j).is_zero()) {
                g.add_term(piece.cols[j], M.at(i, j));
                ++support;
            }
        if (support == 1) S.member_monomials.push_back(piece.cols[piv[i]]);
        S.reduced.push_back(std::move(g));
    }
    S.is_monomial_space = S.member_monomials.size() == S.reduced.size();

    std::ostringstream os;
    os << "deg" << d;
    for (const RPoly& g : S.reduced) {
        os << "|";
        bool first = true;
        for (const auto& [m, c] : g.terms()) {
            if (!first) os << "+";
            first = false;
            for (size_t j = 0; j < m.e.size(); ++j) os << (j ? "," : "") << m.e[j];
            os << ":" << c.str();
        }
    }
    S.key = os.str();
    return S;
}

// Public version: the weight must live in the value group of the field.
inline InitialSpace initial_space(const HomogeneousIdeal& I, const QVec& w, long d) {
    detail::require_weight_in_gamma(I.spec(), w);
    return initial_space_ext(I, PairWeight::plain(w), d);
}

struct GBElement {
    KPoly g;           // x^initial + terms supported on standard monomials
    Monomial initial;  // the unique weight-minimal term of g
};

// Reduced basis of I_d adapted to a weight with monomial initial space: each
// row has a distinct initial monomial with coefficient one, and every other
// term is a standard monomial of strictly larger weighted valuation.  The
// second form reuses an initial space already computed at (pw, d).
inline std::vector<GBElement> groebner_basis_at(const HomogeneousIdeal& I, const PairWeight& pw,
                                                long d, const InitialSpace& S) {
    if (S.degree != d)
        throw InvariantViolation("initial space degree does not match the requested piece");
    if (!S.is_monomial_space)
        throw InconsistentInitial("basis extraction at a weight without monomial initial space");
    const auto& piece = I.piece(d);
    size_t r = S.reduced.size();

    std::vector<Monomial> order = S.member_monomials;
    std::sort(order.begin(), order.end(), MonomialLexGreater());
    {
        std::set<Monomial> in_set(order.begin(), order.end());
        for (const Monomial& m : piece.cols)
            if (!in_set.count(m)) order.push_back(m);
    }
    std::map<Monomial, size_t, MonomialLexGreater> col_index;
    for (size_t j = 0; j < order.size(); ++j) col_index.emplace(order[j], j);

    DenseMatrix<FieldElement> M(r, order.size(), FieldElement::zero(I.spec()));
    for (size_t i = 0; i < r; ++i)
        for (const auto& [m, c] : piece.basis[i].terms()) M.at(i, col_index.at(m)) = c;
    std::vector<size_t> piv = rref(M);
    for (size_t i = 0; i < piv.size(); ++i)
        if (piv[i] != i)
            throw InvariantViolation("pivots escaped the initial-monomial block");

    std::vector<GBElement> out;
    for (size_t i = 0; i < r; ++i) {
        GBElement e;
        e.initial = order[i];
        KPoly g(I.arity());
        for (size_t j = 0; j < order.size(); ++j)
            if (!M.at(i, j).is_zero()) g.add_term(order[j], M.at(i, j));
        e.g = std::move(g);
        // The initial term is provably unique; keep the check as an invariant.
        PairVal lead = term_pairval(e.g.terms().at(e.initial), e.initial, pw);
        for (const auto& [m, c] : e.g.terms())
            if (!(m == e.initial) && !(lead < term_pairval(c, m, pw)))
                throw InvariantViolation("initial term of a basis row is not unique");
        out.push_back(std::move(e));
    }
    return out;
}

inline std::vector<GBElement> groebner_basis_at(const HomogeneousIdeal& I, const PairWeight& pw,
                                                long d) {
    return groebner_basis_at(I, pw, d, initial_space_ext(I, pw, d));
}

struct GenericTilt {
    QVec v;       // integer tilt direction
    Rat epsilon;  // w + e*v has monomial initial spaces for all e in (0, epsilon]
};

// Find a tilt direction making every initial space up to degree D a monomial
// space.  Directions are drawn from growing integer boxes; a generic choice
// works, so failures are retried with a doubled box.
inline GenericTilt generic_monomial_initial(const HomogeneousIdeal& I, const QVec& w, long D,
                                            unsigned long seed) {
    if (static_cast<int>(w.size()) != I.arity())
        throw ArityError("weight arity does not match the polynomial ring");
    std::mt19937_64 rng(seed);
    long box = 4;
    for (int attempt = 0; attempt < 8; ++attempt, box *= 2) {
        std::uniform_int_distribution<long> pick(-box, box);
        QVec v(w.size());
        for (auto& x : v) x = Rat(pick(rng));
        PairWeight pw = PairWeight::tilted(w, v);
        bool ok = true;
        for (long d = 1; d <= D && ok; ++d)
            ok = initial_space_ext(I, pw, d).is_monomial_space;
        if (!ok) continue;
        Rat eps(1);
        for (long d = 1; d <= D; ++d)
            for (const GBElement& e : groebner_basis_at(I, pw, d)) {
                Rat b = epsilon_bound(e.g, w, v);
                if (b < eps) eps = b;
            }
        return {std::move(v), eps / 2};
    }
    throw RetryExhausted("no tilt direction with monomial initial spaces found after 8 attempts");
}

// Whether some degree-d piece of the initial ideal at w, d <= D, contains a
// monomial.  Weights are not restricted to the value group here: the query is
// used on relative-interior points of cells, which may be arbitrary rationals.
inline bool contains_monomial_up_to(const HomogeneousIdeal& I, const QVec& w, long D) {
    PairWeight pw = PairWeight::plain(w);
    for (long d = 1; d <= D; ++d)
        if (!initial_space_ext(I, pw, d).member_monomials.empty()) return true;
    return false;
}

// Heuristic degree bound: the largest degree of a minimal generator of one
// generic monomial initial ideal, sampled with three tilt draws and combined
// by majority (falling back to the maximum).  Not certified: the true bound
// ranges over every monomial initial ideal, so callers should warn.
struct DegreeBoundGuess {
    long D = 0;
    std::vector<long> draws;
};

inline DegreeBoundGuess default_degree_bound(const HomogeneousIdeal& I, unsigned long seed = 1) {
    QVec zero(I.arity(), Rat(0));
    const long floor_d = std::max<long>(I.max_gen_degree(), 1);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> pick(-50, 50);

    auto one_draw = [&]() -> long {
        for (int attempt = 0; attempt < 8; ++attempt) {
            QVec v(zero.size());
            for (auto& x : v) x = Rat(pick(rng));
            PairWeight pw = PairWeight::tilted(zero, v);
            std::vector<Monomial> mins;
            long last_new = 0;
            bool generic = true;
            for (long d = 1; d <= floor_d + 16; ++d) {
                InitialSpace S = initial_space_ext(I, pw, d);
                if (!S.is_monomial_space) {
                    generic = false;
                    break;
                }
                for (const Monomial& m : S.member_monomials) {
                    bool fresh = true;
                    for (const Monomial& g : mins)
                        if (g.divides(m)) {
                            fresh = false;
                            break;
                        }
                    if (fresh) {
                        mins.push_back(m);
                        last_new = d;
                    }
                }
                if (d >= floor_d && d >= last_new + 2) break;
            }
            if (generic) return std::max(last_new, floor_d);
        }
        throw RetryExhausted("no generic tilt found while guessing the degree bound");
    };

    DegreeBoundGuess out;
    for (int i = 0; i < 3; ++i) out.draws.push_back(one_draw());
    for (long v : out.draws) {
        int votes = 0;
        for (long w : out.draws)
            if (v == w) ++votes;
        if (votes >= 2) {
            out.D = v;
            return out;
        }
    }
    out.D = *std::max_element(out.draws.begin(), out.draws.end());
    return out;
}

// Remainder of a homogeneous h modulo the degree-deg(h) piece of I.  The piece
// basis is in reduced echelon form with descending-lex pivots, so one pass
// eliminates every pivot column; a zero remainder certifies h in I_deg(h).
inline KPoly reduce_mod_piece(const HomogeneousIdeal& I, const KPoly& h) {
    if (h.is_zero()) return h;
    if (h.arity() != I.arity()) throw ArityError("reduction arity mismatch");
    if (!h.is_homogeneous()) throw NotHomogeneous("reduction of an inhomogeneous polynomial");
    KPoly r = h;
    for (const KPoly& b : I.piece(h.degree()).basis) {
        if (r.is_zero()) break;
        const auto& [pivot, lead] = *b.terms().begin();
        auto it = r.terms().find(pivot);
        if (it != r.terms().end()) r = r - b.scaled(it->second / lead);
    }
    return r;
}

}  // namespace tropgrob
