#pragma once

#include <cstdlib>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tropgrob/errors.hpp"
#include "tropgrob/ideal.hpp"
#include "tropgrob/polyhedra.hpp"

namespace tropgrob {

// Enumeration guard shared by the combinatorial constructions.  The default
// keeps accidental blowups (large minor counts, runaway traversals) from
// consuming the machine; override it with the TROPGROB_CAP environment
// variable or an explicit argument.
inline unsigned long long default_combinatorial_cap() {
    if (const char* s = std::getenv("TROPGROB_CAP")) {
        unsigned long long v = std::strtoull(s, nullptr, 10);
        if (v > 0) return v;
    }
    return 200000ULL;
}

namespace detail {

inline void require_degree_bound(const HomogeneousIdeal& I, long D) {
    if (D < I.max_gen_degree())
        throw DegreeBoundTooSmall("degree bound " + std::to_string(D) +
                                  " is below the largest generator degree " +
                                  std::to_string(I.max_gen_degree()));
}

}  // namespace detail

// Canonical description of all initial spaces of degree at most D at the
// weight w.  Weights with equal labels have equal initial data up to degree D.
inline std::string initial_label(const HomogeneousIdeal& I, const QVec& w, long D) {
    std::ostringstream os;
    for (long d = 1; d <= D; ++d) {
        if (d > 1) os << ";";
        os << initial_space_ext(I, PairWeight::plain(w), d).key;
    }
    return os.str();
}

// The closed region of weights whose initial data up to degree D agrees with
// the monomial data selected by the tilted weight: for every adapted basis row
// x^u + sum c_m x^m, the term at u stays weight-minimal.  The second form
// reuses initial spaces already computed at pw for degrees 1..D.
inline QPolyhedron cone_from_monomial_tilt(const HomogeneousIdeal& I, const PairWeight& pw, long D,
                                           const std::vector<InitialSpace>& spaces) {
    size_t n = static_cast<size_t>(I.arity());
    std::vector<ConstraintRow> ineqs;
    for (long d = 1; d <= D; ++d) {
        for (const GBElement& e : groebner_basis_at(I, pw, d, spaces[static_cast<size_t>(d - 1)])) {
            Rat lead_val = e.g.terms().at(e.initial).val_nonzero();
            for (const auto& [m, c] : e.g.terms()) {
                if (m == e.initial) continue;
                QVec a(n);
                for (size_t j = 0; j < n; ++j) a[j] = Rat(e.initial.e[j] - m.e[j]);
                ineqs.push_back({std::move(a), c.val_nonzero() - lead_val});
            }
        }
    }
    return QPolyhedron::from_constraints(n, std::move(ineqs), {});
}

inline QPolyhedron cone_from_monomial_tilt(const HomogeneousIdeal& I, const PairWeight& pw,
                                           long D) {
    std::vector<InitialSpace> spaces;
    for (long d = 1; d <= D; ++d) spaces.push_back(initial_space_ext(I, pw, d));
    return cone_from_monomial_tilt(I, pw, D, spaces);
}

// A cell of the Groebner complex together with its initial data.
struct GrobnerCell {
    QPolyhedron poly;
    std::string label;   // joined initial-space keys for degrees 1..D
    QVec representative; // the queried weight; lies in the relative interior
};

// The Groebner cell of an arbitrary rational weight: adapted basis rows are
// computed at a generic tilt of w, terms tied with the lead at w become
// equalities and all other terms stay inequalities.
inline GrobnerCell cone_of_ext(const HomogeneousIdeal& I, const QVec& w, long D,
                               unsigned long seed = 0) {
    detail::require_degree_bound(I, D);
    GenericTilt tilt = generic_monomial_initial(I, w, D, seed);
    PairWeight pw = PairWeight::tilted(w, tilt.v);
    size_t n = static_cast<size_t>(I.arity());
    std::vector<ConstraintRow> ineqs, eqs;
    for (long d = 1; d <= D; ++d) {
        for (const GBElement& e : groebner_basis_at(I, pw, d)) {
            Rat lead_val = e.g.terms().at(e.initial).val_nonzero();
            Rat lead_at_w = lead_val + e.initial.dot(w);
            for (const auto& [m, c] : e.g.terms()) {
                if (m == e.initial) continue;
                QVec a(n);
                for (size_t j = 0; j < n; ++j) a[j] = Rat(e.initial.e[j] - m.e[j]);
                ConstraintRow row{std::move(a), c.val_nonzero() - lead_val};
                if (c.val_nonzero() + m.dot(w) == lead_at_w) eqs.push_back(std::move(row));
                else ineqs.push_back(std::move(row));
            }
        }
    }
    GrobnerCell cell;
    cell.poly = QPolyhedron::from_constraints(n, std::move(ineqs), std::move(eqs));
    cell.label = initial_label(I, w, D);
    cell.representative = w;
    if (!cell.poly.relint_contains(cell.representative))
        throw InvariantViolation("queried weight is not interior to its own cell");
    return cell;
}

inline GrobnerCell cone_of(const HomogeneousIdeal& I, const QVec& w, long D,
                           unsigned long seed = 0) {
    detail::require_weight_in_gamma(I.spec(), w);
    return cone_of_ext(I, w, D, seed);
}

// One affine function per independent column subset of a graded piece: the
// valuation of the minor plus the total column exponent paired with w.  The
// weights minimizing a common function share their degree-d initial space.
struct StateFunctions {
    long degree = 0;
    std::vector<AffineFunc> funcs;
};

inline std::vector<StateFunctions> state_data(const HomogeneousIdeal& I, long D,
                                              unsigned long long cap = default_combinatorial_cap()) {
    detail::require_degree_bound(I, D);
    size_t n = static_cast<size_t>(I.arity());
    std::vector<StateFunctions> out;
    Int budget = Int(cap);
    for (long d = 1; d <= D; ++d) {
        const auto& piece = I.piece(d);
        size_t r = piece.basis.size();
        if (r == 0) continue;
        size_t N = piece.cols.size();

        Int count = 1;
        for (size_t k = 0; k < r; ++k) count = count * Int(N - k) / Int(k + 1);
        budget -= count;
        if (budget < 0)
            throw CombinatorialCapExceeded(
                "state enumeration at degree " + std::to_string(d) + " needs " + count.str() +
                " minors and exceeds the cap of " + std::to_string(cap) +
                " (raise TROPGROB_CAP or use the traversal mode)");

        std::map<Monomial, size_t, MonomialLexGreater> col_index;
        for (size_t j = 0; j < N; ++j) col_index.emplace(piece.cols[j], j);
        DenseMatrix<FieldElement> M(r, N, FieldElement::zero(I.spec()));
        for (size_t i = 0; i < r; ++i)
            for (const auto& [m, c] : piece.basis[i].terms()) M.at(i, col_index.at(m)) = c;

        StateFunctions sf;
        sf.degree = d;
        std::vector<size_t> J(r);
        for (size_t k = 0; k < r; ++k) J[k] = k;
        for (;;) {
            DenseMatrix<FieldElement> sub(r, r, FieldElement::zero(I.spec()));
            for (size_t i = 0; i < r; ++i)
                for (size_t k = 0; k < r; ++k) sub.at(i, k) = M.at(i, J[k]);
            FieldElement det = det_of(sub, FieldElement::zero(I.spec()));
            if (!det.is_zero()) {
                AffineFunc f;
                f.c = det.val_nonzero();
                f.u.assign(n, Rat(0));
                for (size_t k = 0; k < r; ++k)
                    for (size_t j = 0; j < n; ++j) f.u[j] += Rat(piece.cols[J[k]].e[j]);
                sf.funcs.push_back(std::move(f));
            }
            // next r-combination of {0..N-1} in lexicographic order
            size_t k = r;
            while (k > 0 && J[k - 1] == N - r + (k - 1)) --k;
            if (k == 0) break;
            ++J[k - 1];
            for (size_t t = k; t < r; ++t) J[t] = J[t - 1] + 1;
        }
        if (sf.funcs.empty())
            throw InvariantViolation("independent rows admit no invertible column minor");
        out.push_back(std::move(sf));
    }
    if (out.empty())
        throw InvariantViolation("no graded piece up to the degree bound has any element");
    return out;
}

// A polyhedral complex covering weight space whose cells carry constant
// initial data up to the degree bound; labels hold the initial-space keys.
struct GrobnerComplex {
    PolyhedralComplex complex;
    long degree_bound = 0;
};

namespace detail {

inline void label_initial_data(const HomogeneousIdeal& I, PolyhedralComplex& pc, long D) {
    pc.labels.assign(pc.cells.size(), std::string());
    for (size_t i = 0; i < pc.cells.size(); ++i)
        pc.labels[i] = initial_label(I, pc.cells[i].relint_point(), D);
}

}  // namespace detail

// State mode: per degree, the linearity regions of the minor functions are
// exactly the regions of constant degree-d initial space, so the common
// refinement over all degrees up to D yields the Groebner complex.
inline GrobnerComplex complex_state_mode(const HomogeneousIdeal& I, long D,
                                         unsigned long long cap = default_combinatorial_cap()) {
    size_t n = static_cast<size_t>(I.arity());
    std::vector<StateFunctions> data = state_data(I, D, cap);
    PolyhedralComplex acc = linearity_complex(n, data.front().funcs);
    for (size_t k = 1; k < data.size(); ++k)
        acc = common_refinement(acc, linearity_complex(n, data[k].funcs));
    detail::label_initial_data(I, acc, D);
    GrobnerComplex out;
    out.complex = std::move(acc);
    out.degree_bound = D;
    return out;
}

namespace detail {

// Full-dimensional cells discovered by breadth-first facet flipping, keyed by
// their initial-monomial data, together with every wall (facet of a cell)
// encountered.  Crossing a facet with relative-interior point x and outward
// normal a lands in the neighbor cell, whose initial data is the tilted
// initial data at (x, a); no explicit step size is needed.
struct TraversalCore {
    std::map<std::string, QPolyhedron> cones;  // initial-monomial signature -> cell
    std::map<std::string, QPolyhedron> walls;  // canonical key -> facet
};

inline TraversalCore traverse_full_cones(const HomogeneousIdeal& I, long D, unsigned long seed,
                                         unsigned long long cap) {
    require_degree_bound(I, D);
    size_t n = static_cast<size_t>(I.arity());
    TraversalCore core;
    std::deque<const QPolyhedron*> queue;

    // Cells are identified by their initial monomials per degree, which costs
    // one echelon per degree instead of a canonical constraint description;
    // the constraint description is built only for cells not seen before.
    auto visit = [&](const PairWeight& pw) {
        std::vector<InitialSpace> spaces;
        std::string sig;
        for (long d = 1; d <= D; ++d) {
            InitialSpace S = initial_space_ext(I, pw, d);
            if (!S.is_monomial_space)
                throw InvariantViolation("facet crossing landed outside a full-dimensional cell");
            sig += "d";
            sig += std::to_string(d);
            for (const Monomial& m : S.member_monomials) {
                sig += "|";
                for (size_t j = 0; j < m.e.size(); ++j) {
                    if (j) sig += ",";
                    sig += std::to_string(m.e[j]);
                }
            }
            spaces.push_back(std::move(S));
        }
        if (core.cones.count(sig)) return;
        if (core.cones.size() >= cap)
            throw CombinatorialCapExceeded("traversal found more than " + std::to_string(cap) +
                                           " full-dimensional cells (raise TROPGROB_CAP)");
        QPolyhedron cone = cone_from_monomial_tilt(I, pw, D, spaces);
        auto [it, fresh] = core.cones.emplace(std::move(sig), std::move(cone));
        queue.push_back(&it->second);
    };

    QVec w0(n, Rat(0));
    GenericTilt tilt = generic_monomial_initial(I, w0, D, seed);
    visit(PairWeight::tilted(w0, tilt.v));
    while (!queue.empty()) {
        const QPolyhedron& cone = *queue.front();
        queue.pop_front();
        const std::vector<ConstraintRow>& rows = cone.ineq_rows();
        for (size_t i = 0; i < rows.size(); ++i) {
            std::vector<ConstraintRow> ineqs;
            for (size_t j = 0; j < rows.size(); ++j)
                if (j != i) ineqs.push_back(rows[j]);
            std::vector<ConstraintRow> eqs = cone.eq_rows();
            eqs.push_back(rows[i]);
            QPolyhedron facet =
                QPolyhedron::from_constraints(n, std::move(ineqs), std::move(eqs));
            if (facet.is_empty())
                throw InvariantViolation("canonical inequality row does not support a facet");
            std::string fkey = facet.canonical_key();
            if (core.walls.count(fkey)) continue;  // the cell across was already visited
            PairWeight across = PairWeight::tilted(facet.relint_point(), rows[i].a);
            core.walls.emplace(std::move(fkey), std::move(facet));
            visit(across);
        }
    }
    return core;
}

}  // namespace detail

// Traversal mode: start from the full-dimensional cell at a generic tilt and
// breadth-first flip across facets.
inline GrobnerComplex complex_traversal_mode(const HomogeneousIdeal& I, long D,
                                             unsigned long seed = 0,
                                             unsigned long long cap = default_combinatorial_cap()) {
    size_t n = static_cast<size_t>(I.arity());
    detail::TraversalCore core = detail::traverse_full_cones(I, D, seed, cap);
    std::vector<QPolyhedron> cones;
    for (auto& [sig, cone] : core.cones) cones.push_back(std::move(cone));
    PolyhedralComplex pc = PolyhedralComplex::from_maximal(n, std::move(cones));
    detail::label_initial_data(I, pc, D);
    GrobnerComplex out;
    out.complex = std::move(pc);
    out.degree_bound = D;
    return out;
}

enum class ComplexMode { State, Traversal };

inline GrobnerComplex groebner_complex(const HomogeneousIdeal& I, long D, ComplexMode mode,
                                       unsigned long seed = 1,
                                       size_t cap = default_combinatorial_cap()) {
    return mode == ComplexMode::State ? complex_state_mode(I, D, cap)
                                      : complex_traversal_mode(I, D, seed, cap);
}

}  // namespace tropgrob
