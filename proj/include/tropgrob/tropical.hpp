#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tropgrob/errors.hpp"
#include "tropgrob/grobner.hpp"
#include "tropgrob/ideal.hpp"
#include "tropgrob/linalg.hpp"
#include "tropgrob/poly.hpp"
#include "tropgrob/polyhedra.hpp"
#include "tropgrob/rational.hpp"
#include "tropgrob/valued_field.hpp"

namespace tropgrob {

// An ideal of the Laurent polynomial ring, presented by generators.  Exponents
// may be negative; monomial factors of the generators are irrelevant.
struct LaurentIdeal {
    FieldSpec spec;
    std::vector<KPoly> gens;

    LaurentIdeal(FieldSpec s, std::vector<KPoly> g) : spec(std::move(s)), gens(std::move(g)) {
        if (gens.empty()) throw ZeroPolynomial("ideal needs at least one generator");
        for (const KPoly& f : gens) {
            if (f.is_zero()) throw ZeroPolynomial("zero polynomial among ideal generators");
            if (f.arity() != gens.front().arity())
                throw ArityError("generators in different polynomial rings");
        }
    }

    int arity() const { return gens.front().arity(); }
};

// Locus in R^n where the minimum of val(c_u) + w.u over the terms of f is
// attained at least twice.
inline PolyhedralComplex trop_hypersurface(const KPoly& f) {
    if (f.is_zero()) throw ZeroPolynomial("tropical hypersurface of the zero polynomial");
    if (f.term_count() == 1)
        throw MonomialInput("tropical hypersurface of a single term is empty");
    std::vector<AffineFunc> funcs;
    for (const auto& [m, c] : f.terms()) {
        QVec u(m.e.size());
        for (size_t j = 0; j < u.size(); ++j) u[j] = Rat(m.e[j]);
        funcs.push_back({c.val_nonzero(), std::move(u)});
    }
    return nonlinearity_locus(static_cast<size_t>(f.arity()), std::move(funcs));
}

namespace detail {

// Multiplies f by the smallest monomial making every exponent nonnegative.
// Unlike monomial_clear this leaves polynomials untouched, which keeps the
// degree of membership tests as low as possible.
inline KPoly nonneg_shift(const KPoly& f) {
    if (f.is_zero()) throw ZeroPolynomial("shift of zero polynomial");
    std::vector<int> shift(f.arity(), 0);
    for (const auto& [m, c] : f.terms())
        for (int i = 0; i < f.arity(); ++i) shift[i] = std::min(shift[i], m.e[i]);
    KPoly r(f.arity());
    for (const auto& [m, c] : f.terms()) {
        Monomial mm = m;
        for (int i = 0; i < f.arity(); ++i) mm.e[i] -= shift[i];
        r.add_term(mm, c);
    }
    return r;
}

}  // namespace detail

// The homogenization of I \cap K[x_1..x_n] approximated degreewise: cleared
// and homogenized generators, closed under x_0...x_n-saturation with the given
// slack.  The warning records that bounded-slack saturation is heuristic.
struct HomogenizedIdeal {
    HomogeneousIdeal ideal;       // lives in K[x_0,...,x_n]
    std::vector<KPoly> adjoined;  // forms added by the saturation sweeps
    std::string warning;
};

inline HomogenizedIdeal homogenized_ideal(const LaurentIdeal& L, long D, long slack = 2) {
    if (D < 1) throw DegreeBoundTooSmall("degree bound must be at least 1");
    if (slack < 0) throw ParseError("saturation slack must be nonnegative");
    const int n = L.arity();
    const int nh = n + 1;
    std::vector<KPoly> gens;
    for (const KPoly& f : L.gens) gens.push_back(homogenize(monomial_clear(f)));
    HomogeneousIdeal cur(L.spec, gens);
    std::vector<KPoly> adjoined;

    // Each adjoined form strictly enlarges one graded piece of degree <= D, so
    // the total number of adjoins is bounded by the sum of the piece widths.
    long adjoin_budget = 1;
    for (long d = 1; d <= D; ++d)
        adjoin_budget += static_cast<long>(monomials_of_degree(nh, d).size());
    long adjoins = 0;

    bool changed = true;
    bool unit_found = false;
    while (changed && !unit_found) {
        changed = false;
        for (long d = 0; d <= D && !unit_found; ++d) {
            for (long k = 1; k <= slack && !unit_found; ++k) {
                const long dd = d + k * nh;
                // Columns: monomials not divisible by (x_0...x_n)^k first, the
                // divisible ones after, each block in descending lex order.
                std::vector<Monomial> nondiv, divisible;
                for (Monomial& m : monomials_of_degree(nh, dd)) {
                    bool div = true;
                    for (int i = 0; i < nh && div; ++i) div = m.e[i] >= k;
                    (div ? divisible : nondiv).push_back(std::move(m));
                }
                if (static_cast<unsigned long long>(nondiv.size() + divisible.size()) >
                    default_combinatorial_cap())
                    throw CombinatorialCapExceeded(
                        "saturation matrix at degree " + std::to_string(dd) +
                        " exceeds the combinatorial cap");
                std::map<Monomial, size_t, MonomialLexGreater> col;
                const size_t split = nondiv.size();
                for (size_t j = 0; j < nondiv.size(); ++j) col.emplace(nondiv[j], j);
                for (size_t j = 0; j < divisible.size(); ++j) col.emplace(divisible[j], split + j);

                // Macaulay rows of the current generators at degree dd.
                std::vector<std::map<size_t, FieldElement>> rows;
                for (const KPoly& g : cur.gens()) {
                    long shift = dd - g.degree();
                    if (shift < 0) continue;
                    for (const Monomial& m : monomials_of_degree(nh, shift)) {
                        std::map<size_t, FieldElement> row;
                        for (const auto& [mm, c] : g.terms()) row.emplace(col.at(mm + m), c);
                        rows.push_back(std::move(row));
                    }
                }
                auto lead = sparse_echelon(std::move(rows), FieldElement::zero(L.spec));

                // Echelon rows leading inside the divisible block vanish on
                // every earlier column, so they span exactly the part of the
                // degree-dd piece divisible by (x_0...x_n)^k.  Dividing gives
                // degree-d members of the saturation.
                for (const auto& [lc, row] : lead) {
                    if (lc < split) continue;
                    KPoly h(nh);
                    for (const auto& [c, x] : row) {
                        Monomial m = divisible[c - split];
                        for (int i = 0; i < nh; ++i) m.e[i] -= static_cast<int>(k);
                        h.add_term(m, x);
                    }
                    if (reduce_mod_piece(cur, h).is_zero()) continue;
                    // A degree-0 member makes the ideal everything.
                    if (h.degree() == 0) unit_found = true;
                    gens.push_back(h);
                    adjoined.push_back(std::move(h));
                    cur = HomogeneousIdeal(L.spec, gens);
                    changed = true;
                    if (++adjoins > adjoin_budget)
                        throw NonConvergence("saturation sweeps did not stabilize");
                    if (unit_found) break;
                }
            }
        }
    }

    std::ostringstream warn;
    warn << "saturation: degreewise sweeps with slack " << slack << " up to degree " << D
         << " adjoined " << adjoined.size()
         << " form(s); completeness is heuristic, a larger slack strengthens the result";
    return {std::move(cur), std::move(adjoined), warn.str()};
}

// The tropical variety of a Laurent ideal: slice w_0 = 0 of the monomial-free
// part of the Groebner complex of its homogenization, with the leading
// coordinate dropped.  Labels carry the initial data at (0, w) per cell.
struct Tropicalization {
    PolyhedralComplex complex;  // in R^n
    HomogenizedIdeal hom;
    long degree_bound = 0;
};

namespace detail {

// Monomial-free cells of the Groebner complex, found by descending from the
// walls of the full-cone traversal without building the complex itself.  Any
// monomial in the initial ideal of a cell stays in the initial ideal of every
// cell having it as a face, so each maximal monomial-free cell F is a face of
// some wall, and every chain of covering faces from that wall down to F
// passes through monomial-containing cells only (a monomial-free cell between
// them would make F non-maximal); expanding exactly the monomial-containing
// faces therefore reaches every maximal monomial-free cell.
inline std::vector<QPolyhedron> monomial_free_cells_traversal(const HomogeneousIdeal& I, long D,
                                                              unsigned long seed,
                                                              unsigned long long cap) {
    TraversalCore core = traverse_full_cones(I, D, seed, cap);
    std::set<std::string> visited;
    std::deque<QPolyhedron> expand;
    std::vector<QPolyhedron> kept;

    auto classify = [&](QPolyhedron f) {
        if (!visited.insert(f.canonical_key()).second) return;
        if (visited.size() > cap)
            throw CombinatorialCapExceeded("face descent visited more than " +
                                           std::to_string(cap) + " faces (raise TROPGROB_CAP)");
        const QVec& x = f.relint_point();
        // If some generator has a single-term initial form at x, that term is
        // a monomial of the initial ideal; the tie test is far cheaper than
        // the echelon behind the full membership query.
        bool all_tied = true;
        for (const KPoly& g : I.gens())
            if (trop_eval(g, x).argmin.size() < 2) {
                all_tied = false;
                break;
            }
        if (all_tied && !contains_monomial_up_to(I, x, D))
            kept.push_back(std::move(f));
        else
            expand.push_back(std::move(f));
    };

    for (auto& [key, wall] : core.walls) classify(std::move(wall));
    while (!expand.empty()) {
        QPolyhedron f = std::move(expand.front());
        expand.pop_front();
        for (QPolyhedron& g : f.facets()) classify(std::move(g));
    }
    return kept;
}

}  // namespace detail

inline Tropicalization tropicalize(const LaurentIdeal& L, long D, long slack = 2,
                                   ComplexMode mode = ComplexMode::State, unsigned long seed = 1,
                                   unsigned long long cap = default_combinatorial_cap()) {
    HomogenizedIdeal hom = homogenized_ideal(L, D, slack);
    const size_t n = static_cast<size_t>(L.arity());

    std::vector<QPolyhedron> sliced;
    if (mode == ComplexMode::Traversal) {
        for (QPolyhedron& f :
             detail::monomial_free_cells_traversal(hom.ideal, D, seed, cap)) {
            QPolyhedron s = f.substitute_coord(0, Rat(0));
            if (s.is_empty())
                throw InvariantViolation("Groebner cell missed the w0 = 0 slice despite lineality");
            sliced.push_back(std::move(s));
        }
    } else {
        GrobnerComplex G = groebner_complex(hom.ideal, D, mode, seed, cap);
        const PolyhedralComplex& pc = G.complex;

        std::vector<char> keep(pc.cells.size(), 0);
        for (size_t i = 0; i < pc.cells.size(); ++i)
            keep[i] = !contains_monomial_up_to(hom.ideal, pc.cells[i].relint_point(), D);
        // Monomial-freeness passes from a cell to its faces, so the kept set
        // must be closed under the covering relations of the complex.
        for (const auto& [face, cell] : pc.face_pairs)
            if (keep[cell] && !keep[face])
                throw InvariantViolation("monomial-free cell with a monomial-containing face");

        for (size_t i = 0; i < pc.cells.size(); ++i) {
            if (!keep[i]) continue;
            bool covered = false;
            for (const auto& [face, cell] : pc.face_pairs)
                if (face == i && keep[cell]) {
                    covered = true;
                    break;
                }
            if (covered) continue;  // a kept cell above it produces a superset slice
            QPolyhedron s = pc.cells[i].substitute_coord(0, Rat(0));
            if (s.is_empty())
                throw InvariantViolation("Groebner cell missed the w0 = 0 slice despite lineality");
            sliced.push_back(std::move(s));
        }
    }
    if (sliced.empty())
        throw IdealIsUnit("every initial ideal up to degree " + std::to_string(D) +
                          " contains a monomial");

    PolyhedralComplex trop = PolyhedralComplex::from_maximal(n, std::move(sliced));
    for (size_t j = 0; j < trop.cells.size(); ++j) {
        QVec w = trop.cells[j].relint_point();
        QVec wh(n + 1, Rat(0));
        for (size_t t = 0; t < n; ++t) wh[t + 1] = w[t];
        trop.labels[j] = initial_label(hom.ideal, wh, D);
    }
    return Tropicalization{std::move(trop), std::move(hom), D};
}

namespace detail {

// Whether the initial form of h is the same single term everywhere on the
// relative interior of the cell: the term minimizing at the representative
// must stay weakly minimal over the whole cell; strictness at the interior
// representative then forces strictness on the entire relative interior.
inline bool single_term_on_cell(const KPoly& h, const QPolyhedron& cell, const QVec& rep) {
    TropValue t = trop_eval(h, rep);
    if (t.argmin.size() != 1) return false;
    const Monomial& a = t.argmin.front();
    const Rat va = h.terms().at(a).val_nonzero();
    const size_t n = rep.size();
    for (const auto& [m, c] : h.terms()) {
        if (m == a) continue;
        ConstraintRow row;
        row.a.assign(n, Rat(0));
        for (size_t j = 0; j < n; ++j) row.a[j] = Rat(a.e[j] - m.e[j]);
        row.b = c.val_nonzero() - va;
        if (!poly_subset(cell, QPolyhedron::from_constraints(n, {std::move(row)}, {})))
            return false;
    }
    return true;
}

}  // namespace detail

// A generating set F with trop(V(I)) equal to the intersection of the
// hypersurfaces trop(f), f in F, together with a per-cell certificate: for
// every Groebner-complex cell whose initial ideal contains a monomial, the
// index of a basis element whose initial form is that single monomial across
// the whole cell.
struct TropicalBasis {
    std::vector<KPoly> polynomials;            // prefix: the original generators
    std::map<std::string, size_t> certificate; // cell canonical key -> index
    std::string warning;
};

inline TropicalBasis tropical_basis(const LaurentIdeal& L, long D, long slack = 2,
                                    ComplexMode mode = ComplexMode::State, unsigned long seed = 1,
                                    unsigned long long cap = default_combinatorial_cap()) {
    HomogenizedIdeal hom = homogenized_ideal(L, D, slack);
    GrobnerComplex G = groebner_complex(hom.ideal, D, mode, seed, cap);

    TropicalBasis out;
    out.warning = hom.warning;
    out.polynomials = L.gens;
    std::vector<KPoly> homforms;  // homogeneous companions used on cells
    for (const KPoly& f : L.gens) homforms.push_back(homogenize(monomial_clear(f)));

    const size_t npos = static_cast<size_t>(-1);
    for (const QPolyhedron& cell : G.complex.cells) {
        QVec rep = cell.relint_point();
        long dmono = 0;
        Monomial u;
        for (long d = 1; d <= D && dmono == 0; ++d) {
            InitialSpace S = initial_space_ext(hom.ideal, PairWeight::plain(rep), d);
            if (!S.member_monomials.empty()) {
                dmono = d;
                u = S.member_monomials.front();
            }
        }
        if (dmono == 0) continue;  // cell lies in the tropical variety

        size_t found = npos;
        for (size_t i = 0; i < homforms.size() && found == npos; ++i)
            if (detail::single_term_on_cell(homforms[i], cell, rep)) found = i;
        if (found == npos) {
            // Perturb to a monomial initial space and take the adapted basis
            // row at the member monomial: x^u plus standard-monomial terms.
            GenericTilt tilt = generic_monomial_initial(hom.ideal, rep, dmono, seed);
            const GBElement* hit = nullptr;
            std::vector<GBElement> rows =
                groebner_basis_at(hom.ideal, PairWeight::tilted(rep, tilt.v), dmono);
            for (const GBElement& e : rows)
                if (e.initial == u) {
                    hit = &e;
                    break;
                }
            if (!hit) throw InvariantViolation("monomial member missing from the adapted basis");
            if (!detail::single_term_on_cell(hit->g, cell, rep))
                throw InvariantViolation("witness initial form is not monomial on its cell");
            out.polynomials.push_back(dehomogenize(hit->g));
            homforms.push_back(hit->g);
            found = homforms.size() - 1;
        }
        out.certificate[cell.canonical_key()] = found;
    }
    return out;
}

// Outcome of comparing the prevariety of a candidate basis with the variety.
struct BasisCheck {
    bool equal = false;
    std::optional<QVec> witness;  // in the prevariety but outside the variety
};

inline BasisCheck verify_tropical_basis(const std::vector<KPoly>& F, const LaurentIdeal& L,
                                        long D, long slack = 2,
                                        ComplexMode mode = ComplexMode::State,
                                        unsigned long seed = 1,
                                        unsigned long long cap = default_combinatorial_cap()) {
    if (F.empty()) throw ZeroPolynomial("empty candidate basis");
    const size_t n = static_cast<size_t>(L.arity());
    for (const KPoly& f : F) {
        if (f.is_zero()) throw ZeroPolynomial("zero polynomial in candidate basis");
        if (f.arity() != L.arity()) throw ArityError("candidate basis arity mismatch");
    }

    HomogenizedIdeal hom = homogenized_ideal(L, D, slack);
    for (size_t i = 0; i < F.size(); ++i) {
        KPoly h = homogenize(detail::nonneg_shift(F[i]));
        if (!reduce_mod_piece(hom.ideal, h).is_zero())
            throw NotInIdeal("candidate basis element " + std::to_string(i) +
                             " is not a degreewise-certified member of the ideal");
    }

    // Prevariety: common refinement of the generator hypersurfaces.  A single
    // term has empty hypersurface and empties the whole intersection.
    std::optional<PolyhedralComplex> prev;
    bool empty_prev = false;
    for (const KPoly& f : F) {
        if (f.term_count() == 1) {
            empty_prev = true;
            break;
        }
        PolyhedralComplex hs = trop_hypersurface(f);
        prev = prev ? common_refinement(*prev, hs) : std::move(hs);
        if (prev->cells.empty()) {
            empty_prev = true;
            break;
        }
    }
    PolyhedralComplex prevariety =
        empty_prev ? PolyhedralComplex::from_maximal(n, {}) : std::move(*prev);

    PolyhedralComplex variety = PolyhedralComplex::from_maximal(n, {});
    try {
        variety = tropicalize(L, D, slack, mode, seed, cap).complex;
    } catch (const IdealIsUnit&) {
        // empty tropical variety
    }

    BasisCheck out;
    if (auto w = support_difference_witness(prevariety, variety)) {
        out.equal = false;
        out.witness = *w;
        return out;
    }
    if (support_difference_witness(variety, prevariety))
        throw InvariantViolation("tropical variety escaped the prevariety of ideal members");
    out.equal = true;
    return out;
}

}  // namespace tropgrob
