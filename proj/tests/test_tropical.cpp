#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "tropgrob/textio.hpp"
#include "tropgrob/tropical.hpp"

using namespace tropgrob;

namespace {

// ---------------------------------------------------------------------------
// Oracle 1: span checker for the sparse echelon.  Ground truth is the dense
// reduced row echelon form, which is a canonical basis of the row space.
// ---------------------------------------------------------------------------

template <typename C>
DenseMatrix<C> dense_from_sparse(const std::vector<std::map<size_t, C>>& rows, size_t ncols,
                                 const C& zero) {
    DenseMatrix<C> M(rows.size(), ncols, zero);
    for (size_t i = 0; i < rows.size(); ++i)
        for (const auto& [j, x] : rows[i]) M.at(i, j) = x;
    return M;
}

// ---------------------------------------------------------------------------
// Oracle 2: planar tie structure of min_i(c_i + a_i x + b_i y), computed with
// nothing but interval arithmetic on the pairwise tie lines.  Used as the
// independent reference for hypersurface slices.
// ---------------------------------------------------------------------------

namespace tie_oracle {

struct Fn {
    Rat c, a, b;
    Rat eval(const Rat& x, const Rat& y) const { return c + a * x + b * y; }
};

using P2 = std::pair<Rat, Rat>;

inline Rat dot2(const P2& u, const P2& v) { return u.first * v.first + u.second * v.second; }
inline P2 sub2(const P2& u, const P2& v) { return {u.first - v.first, u.second - v.second}; }

// A maximal piece of {f_i = f_j = min} on its tie line, parameterized as
// p0 + t*dir with t in [lo, hi]; a missing bound means unbounded.
struct Piece {
    P2 p0, dir;
    std::optional<Rat> lo, hi;
    std::string line_key;  // canonical description of the supporting line

    P2 at(const Rat& t) const {
        return {p0.first + t * dir.first, p0.second + t * dir.second};
    }
};

inline std::string line_key_of(Rat nx, Rat ny, Rat rhs) {
    Rat lead = nx != Rat(0) ? nx : ny;
    nx = nx / lead;
    ny = ny / lead;
    rhs = rhs / lead;
    return rat_str(nx) + "|" + rat_str(ny) + "|" + rat_str(rhs);
}

// The minimum count of the family at a point: how many functions attain it.
inline int argmin_count(const std::vector<Fn>& fns, const Rat& x, const Rat& y) {
    Rat best = fns[0].eval(x, y);
    for (const Fn& f : fns) best = std::min(best, f.eval(x, y));
    int k = 0;
    for (const Fn& f : fns)
        if (f.eval(x, y) == best) ++k;
    return k;
}

struct Structure {
    std::set<std::pair<std::string, std::string>> vertices;  // rat_str coordinates
    long edges = 0;
};

inline bool point_on_piece(const Piece& p, const P2& q) {
    // q must lie on the supporting line and inside the interval.
    P2 d = sub2(q, p.p0);
    if (d.first * p.dir.second != d.second * p.dir.first) return false;
    Rat t = dot2(d, p.dir) / dot2(p.dir, p.dir);
    if (p.lo && t < *p.lo) return false;
    if (p.hi && t > *p.hi) return false;
    return true;
}

inline bool piece_subset(const Piece& p, const Piece& q) {
    if (p.line_key != q.line_key) return false;
    Rat denom = dot2(q.dir, q.dir);
    Rat B = dot2(p.dir, q.dir) / denom;
    Rat A = dot2(sub2(p.p0, q.p0), q.dir) / denom;
    std::optional<Rat> lo, hi;  // p's interval in q's parameter
    if (B > Rat(0)) {
        if (p.lo) lo = A + B * *p.lo;
        if (p.hi) hi = A + B * *p.hi;
    } else {
        if (p.hi) lo = A + B * *p.hi;
        if (p.lo) hi = A + B * *p.lo;
    }
    if (q.lo && (!lo || *lo < *q.lo)) return false;
    if (q.hi && (!hi || *hi > *q.hi)) return false;
    return true;
}

inline Structure tie_structure(std::vector<Fn> fns) {
    Structure out;
    std::vector<Piece> pieces;
    std::vector<P2> point_pieces;
    for (size_t i = 0; i < fns.size(); ++i)
        for (size_t j = i + 1; j < fns.size(); ++j) {
            Rat nx = fns[i].a - fns[j].a, ny = fns[i].b - fns[j].b;
            Rat rhs = fns[j].c - fns[i].c;
            if (nx == Rat(0) && ny == Rat(0)) continue;  // parallel: no tie line
            Piece p;
            p.p0 = nx != Rat(0) ? P2{rhs / nx, Rat(0)} : P2{Rat(0), rhs / ny};
            p.dir = {-ny, nx};
            p.line_key = line_key_of(nx, ny, rhs);
            bool feasible = true;
            for (size_t m = 0; m < fns.size() && feasible; ++m) {
                if (m == i || m == j) continue;
                // f_i(p0 + t dir) <= f_m(p0 + t dir)  <=>  alpha + t beta <= gamma
                Rat dax = fns[i].a - fns[m].a, dby = fns[i].b - fns[m].b;
                Rat alpha = dax * p.p0.first + dby * p.p0.second;
                Rat beta = dax * p.dir.first + dby * p.dir.second;
                Rat gamma = fns[m].c - fns[i].c;
                if (beta == Rat(0)) {
                    if (alpha > gamma) feasible = false;
                } else {
                    Rat t = (gamma - alpha) / beta;
                    if (beta > Rat(0)) {
                        if (!p.hi || t < *p.hi) p.hi = t;
                    } else {
                        if (!p.lo || t > *p.lo) p.lo = t;
                    }
                }
            }
            if (!feasible) continue;
            if (p.lo && p.hi && *p.lo > *p.hi) continue;
            if (p.lo && p.hi && *p.lo == *p.hi)
                point_pieces.push_back(p.at(*p.lo));
            else
                pieces.push_back(std::move(p));
        }

    // Drop duplicated or contained pieces; the survivors are the 1-cells.
    std::vector<Piece> kept;
    for (size_t i = 0; i < pieces.size(); ++i) {
        bool redundant = false;
        for (size_t j = 0; j < pieces.size() && !redundant; ++j) {
            if (i == j) continue;
            if (!piece_subset(pieces[i], pieces[j])) continue;
            // mutual containment = equality: keep only the first copy
            redundant = !piece_subset(pieces[j], pieces[i]) || j < i;
        }
        if (!redundant) kept.push_back(pieces[i]);
    }
    out.edges = static_cast<long>(kept.size());

    auto add_vertex = [&](const P2& q) {
        out.vertices.insert({rat_str(q.first), rat_str(q.second)});
    };
    for (const Piece& p : kept) {
        if (p.lo) add_vertex(p.at(*p.lo));
        if (p.hi) add_vertex(p.at(*p.hi));
    }
    for (const P2& q : point_pieces) {
        bool covered = false;
        for (const Piece& p : kept)
            if (point_on_piece(p, q)) {
                covered = true;
                break;
            }
        if (!covered) add_vertex(q);  // isolated 0-cell
    }
    return out;
}

}  // namespace tie_oracle

// ---------------------------------------------------------------------------
// Shared helpers.
// ---------------------------------------------------------------------------

LaurentIdeal parse_laurent(const FieldSpec& spec, const std::vector<std::string>& vars,
                           const std::vector<std::string>& polys) {
    std::vector<KPoly> gens;
    for (const auto& s : polys) gens.push_back(parse_poly(s, spec, vars));
    return LaurentIdeal(spec, std::move(gens));
}

KPoly random_laurent(const FieldSpec& spec, int arity, std::mt19937_64& rng, int lo_exp,
                     int hi_exp) {
    std::uniform_int_distribution<int> nterms(2, 3), expd(lo_exp, hi_exp), coeff(1, 4),
        sign(0, 1), valshift(0, 2);
    for (;;) {
        KPoly f(arity);
        int t = nterms(rng);
        for (int i = 0; i < t; ++i) {
            std::vector<int> e(arity);
            for (auto& x : e) x = expd(rng);
            Rat c = Rat(coeff(rng)) * (sign(rng) ? Rat(1) : Rat(-1));
            f.add_term(Monomial(std::move(e)),
                       FieldElement::from_rat(spec, c) * split(spec, Rat(valshift(rng))));
        }
        if (f.term_count() >= 2) return f;
    }
}

QVec prepend_zero(const QVec& w) {
    QVec wh(w.size() + 1, Rat(0));
    for (size_t i = 0; i < w.size(); ++i) wh[i + 1] = w[i];
    return wh;
}

}  // namespace

// ---------------------------------------------------------------------------
// Oracle validation on hand-checkable inputs, before any library use.
// ---------------------------------------------------------------------------

TEST_CASE("tie oracle reproduces the tropical line by hand") {
    // min(x, y, 0): the tie locus has one vertex at the origin and three
    // unbounded edges (the standard tropical line).
    std::vector<tie_oracle::Fn> fns = {{Rat(0), Rat(1), Rat(0)},
                                       {Rat(0), Rat(0), Rat(1)},
                                       {Rat(0), Rat(0), Rat(0)}};
    auto s = tie_oracle::tie_structure(fns);
    CHECK(s.edges == 3);
    REQUIRE(s.vertices.size() == 1);
    CHECK(s.vertices.count({"0", "0"}) == 1);
    CHECK(tie_oracle::argmin_count(fns, Rat(0), Rat(0)) == 3);
    CHECK(tie_oracle::argmin_count(fns, Rat(-3), Rat(-3)) == 2);
    CHECK(tie_oracle::argmin_count(fns, Rat(-3), Rat(-1)) == 1);
}

TEST_CASE("tie oracle handles a bounded segment between two vertices") {
    // min(2y, 3x, 2x, 4): derived by solving ties by hand -- vertices (0,0)
    // and (2,2); edges: segment (0,0)-(2,2), rays x=0 up, y=2 right, x=2 up,
    // and the ray from the origin with direction (-2,-3).
    std::vector<tie_oracle::Fn> fns = {{Rat(0), Rat(0), Rat(2)},
                                       {Rat(0), Rat(3), Rat(0)},
                                       {Rat(0), Rat(2), Rat(0)},
                                       {Rat(4), Rat(0), Rat(0)}};
    auto s = tie_oracle::tie_structure(fns);
    CHECK(s.edges == 5);
    REQUIRE(s.vertices.size() == 2);
    CHECK(s.vertices.count({"0", "0"}) == 1);
    CHECK(s.vertices.count({"2", "2"}) == 1);
}

TEST_CASE("sparse echelon is triangular and spans the same rows as dense rref") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> entry(-3, 3), density(0, 1);
    for (int rep = 0; rep < 30; ++rep) {
        const size_t nrows = 5, ncols = 7;
        std::vector<std::map<size_t, Rat>> rows(nrows);
        for (auto& r : rows)
            for (size_t j = 0; j < ncols; ++j) {
                if (density(rng)) continue;
                int v = entry(rng);
                if (v != 0) r.emplace(j, Rat(v));
            }
        DenseMatrix<Rat> M = dense_from_sparse(rows, ncols, Rat(0));
        auto lead = sparse_echelon(std::move(rows), Rat(0));

        std::vector<std::map<size_t, Rat>> out_rows;
        for (const auto& [lc, r] : lead) {
            REQUIRE(!r.empty());
            CHECK(r.begin()->first == lc);       // leading column is the key
            CHECK(r.begin()->second == Rat(1));  // normalized
            out_rows.push_back(r);
        }
        DenseMatrix<Rat> E = dense_from_sparse(out_rows, ncols, Rat(0));
        std::vector<size_t> piv_in = rref(M);
        std::vector<size_t> piv_out = rref(E);
        REQUIRE(piv_in == piv_out);  // same row space => same canonical form
        for (size_t i = 0; i < piv_in.size(); ++i)
            for (size_t j = 0; j < ncols; ++j) CHECK(M.at(i, j) == E.at(i, j));
    }
}

TEST_CASE("sparse echelon over a valued field matches the dense span") {
    FieldSpec q3 = FieldSpec::padic(3);
    auto el = [&](int v) { return FieldElement::from_rat(q3, Rat(v)); };
    std::vector<std::map<size_t, FieldElement>> rows(3);
    rows[0] = {{0, el(3)}, {2, el(1)}};
    rows[1] = {{0, el(6)}, {2, el(2)}};  // dependent on row 0
    rows[2] = {{1, el(2)}, {2, el(9)}, {3, el(1)}};
    DenseMatrix<FieldElement> M = dense_from_sparse(rows, 4, FieldElement::zero(q3));
    auto lead = sparse_echelon(std::move(rows), FieldElement::zero(q3));
    REQUIRE(lead.size() == 2);
    std::vector<std::map<size_t, FieldElement>> out_rows;
    for (const auto& [lc, r] : lead) {
        CHECK(r.begin()->first == lc);
        CHECK(r.begin()->second.is_one());
        out_rows.push_back(r);
    }
    DenseMatrix<FieldElement> E = dense_from_sparse(out_rows, 4, FieldElement::zero(q3));
    std::vector<size_t> piv_in = rref(M);
    std::vector<size_t> piv_out = rref(E);
    REQUIRE(piv_in == piv_out);
    for (size_t i = 0; i < piv_in.size(); ++i)
        for (size_t j = 0; j < 4; ++j) CHECK((M.at(i, j) - E.at(i, j)).is_zero());
}

// ---------------------------------------------------------------------------
// Tropical hypersurfaces.
// ---------------------------------------------------------------------------

TEST_CASE("tropical line of x+y+1 over the trivial valuation") {
    FieldSpec qt = FieldSpec::tadic(1);
    KPoly f = parse_poly("x+y+1", qt, {"x", "y"});
    PolyhedralComplex H = trop_hypersurface(f);
    CHECK(H.ambient == 2);
    CHECK(H.count_of_dim(1) == 3);
    CHECK(H.count_of_dim(0) == 1);
    CHECK(H.cells.size() == 4);
    CHECK_FALSE(H.check_axioms().has_value());
    for (size_t i : H.maximal_indices()) CHECK(H.cells[i].dim() == 1);
    // rays: (1,0), (0,1), (-1,-1) from the origin
    CHECK(H.support_contains({Rat(7), Rat(0)}));
    CHECK(H.support_contains({Rat(0), Rat(7)}));
    CHECK(H.support_contains({Rat(-5), Rat(-5)}));
    CHECK(H.support_contains({Rat(0), Rat(0)}));
    CHECK_FALSE(H.support_contains({Rat(3), Rat(1)}));
    CHECK_FALSE(H.support_contains({Rat(-1), Rat(-2)}));
}

TEST_CASE("two-term hypersurface is the tie line of the coefficient valuations") {
    FieldSpec q2 = FieldSpec::padic(2);
    KPoly f = parse_poly("x+2*y", q2, {"x", "y"});
    PolyhedralComplex H = trop_hypersurface(f);
    REQUIRE(H.cells.size() == 1);
    CHECK(H.cells[0].dim() == 1);
    QPolyhedron line = QPolyhedron::from_constraints(
        2, {}, {{{Rat(1), Rat(-1)}, Rat(1)}});  // w1 - w2 = 1
    CHECK(H.cells[0].canonical_key() == line.canonical_key());
}

TEST_CASE("hypersurface rejects degenerate inputs") {
    FieldSpec q2 = FieldSpec::padic(2);
    CHECK_THROWS_AS(trop_hypersurface(parse_poly("4*x^2*y", q2, {"x", "y"})), MonomialInput);
    CHECK_THROWS_AS(trop_hypersurface(KPoly(2)), ZeroPolynomial);
    // terms that merge into a single one are monomial input too
    CHECK_THROWS_AS(trop_hypersurface(parse_poly("x+y-y", q2, {"x", "y"})), MonomialInput);
}

TEST_CASE("cubic curve hypersurface matches the affine family and the tie oracle") {
    FieldSpec q2 = FieldSpec::padic(2);
    KPoly f = parse_poly("y^2*z-x^3-x^2*z-16*z^3", q2, {"x", "y", "z"});
    PolyhedralComplex H = trop_hypersurface(f);

    // The term data is min(2y+z, 3x, 2x+z, 3z+4); build it by hand.
    std::vector<AffineFunc> fam = {
        {Rat(0), {Rat(0), Rat(2), Rat(1)}},
        {Rat(0), {Rat(3), Rat(0), Rat(0)}},
        {Rat(0), {Rat(2), Rat(0), Rat(1)}},
        {Rat(4), {Rat(0), Rat(0), Rat(3)}},
    };
    PolyhedralComplex N = nonlinearity_locus(3, fam);
    REQUIRE(H.cells.size() == N.cells.size());
    for (size_t i = 0; i < H.cells.size(); ++i)
        CHECK(H.cells[i].canonical_key() == N.cells[i].canonical_key());
    CHECK(support_equal(H, N).equal);

    // Every slope has total degree 3, so R*(1,1,1) is lineality everywhere and
    // the z=0 slice carries the full structure.
    CHECK(H.lineality_everywhere({Rat(1), Rat(1), Rat(1)}));
    for (size_t i : H.maximal_indices()) CHECK(H.cells[i].dim() == 2);  // pure
    CHECK_FALSE(H.check_axioms().has_value());

    // Independent oracle on the slice.
    std::vector<tie_oracle::Fn> fns = {{Rat(0), Rat(0), Rat(2)},
                                       {Rat(0), Rat(3), Rat(0)},
                                       {Rat(0), Rat(2), Rat(0)},
                                       {Rat(4), Rat(0), Rat(0)}};
    auto s = tie_oracle::tie_structure(fns);
    PolyhedralComplex S = H.substitute_coord(2, Rat(0));
    CHECK(S.count_of_dim(0) == s.vertices.size());
    CHECK(S.count_of_dim(1) == static_cast<size_t>(s.edges));
    CHECK(s.vertices.count({"0", "0"}) == 1);
    CHECK(s.vertices.count({"2", "2"}) == 1);

    // Grid membership agreement between the slice and the oracle.
    for (int x = -6; x <= 6; ++x)
        for (int y = -6; y <= 6; ++y) {
            bool in_oracle = tie_oracle::argmin_count(fns, Rat(x), Rat(y)) >= 2;
            CHECK(S.support_contains({Rat(x), Rat(y)}) == in_oracle);
        }

    // R^3 counts: the slice structure swept by the lineality line.
    CHECK(H.count_of_dim(2) == static_cast<size_t>(s.edges));
    CHECK(H.count_of_dim(1) == s.vertices.size());
}

// ---------------------------------------------------------------------------
// Homogenization with degreewise saturation.
// ---------------------------------------------------------------------------

TEST_CASE("homogenization leaves saturated linear ideals untouched") {
    FieldSpec q2 = FieldSpec::padic(2);
    LaurentIdeal L = parse_laurent(q2, {"x", "y", "z"}, {"x+2*y", "x+4*z"});
    HomogenizedIdeal hom = homogenized_ideal(L, 2);
    CHECK(hom.ideal.arity() == 4);
    CHECK(hom.adjoined.empty());
    CHECK(hom.ideal.gens().size() == 2);
    CHECK(hom.warning.find("slack 2") != std::string::npos);
    std::vector<std::string> hv = {"x0", "x", "y", "z"};
    CHECK(poly_str(hom.ideal.gens()[0], hv) == "x+2*y");
    CHECK(poly_str(hom.ideal.gens()[1], hv) == "x+4*z");
}

TEST_CASE("homogenization clears Laurent monomial factors") {
    FieldSpec q2 = FieldSpec::padic(2);
    LaurentIdeal L = parse_laurent(q2, {"x", "y"}, {"x^(-1)*y+1"});
    HomogenizedIdeal hom = homogenized_ideal(L, 1);
    REQUIRE(hom.ideal.gens().size() == 1);
    CHECK(poly_str(hom.ideal.gens()[0], {"x0", "x", "y"}) == "x+y");
    CHECK(hom.adjoined.empty());
}

TEST_CASE("saturation detects the unit ideal hidden in x+y, x+y+z") {
    FieldSpec q2 = FieldSpec::padic(2);
    LaurentIdeal L = parse_laurent(q2, {"x", "y", "z"}, {"x+y", "x+y+z"});
    HomogenizedIdeal hom = homogenized_ideal(L, 2);
    // z = (x+y+z)-(x+y) is in the ideal, a unit of the Laurent ring; the
    // degree-0 colon finds the constant, so the homogenized ideal is all of R.
    CHECK_FALSE(hom.adjoined.empty());
    CHECK_FALSE(hom.ideal.piece(0).basis.empty());
    KPoly zh = parse_poly("z", q2, {"x0", "x", "y", "z"});
    CHECK(reduce_mod_piece(hom.ideal, zh).is_zero());
    CHECK_THROWS_AS(tropicalize(L, 2), IdealIsUnit);
}

// ---------------------------------------------------------------------------
// Tropicalization.
// ---------------------------------------------------------------------------

TEST_CASE("tropicalization of the line ideal agrees with its hypersurface") {
    FieldSpec qt = FieldSpec::tadic(1);
    LaurentIdeal L = parse_laurent(qt, {"x", "y"}, {"x+y+1"});
    Tropicalization T = tropicalize(L, 1);
    CHECK(T.complex.ambient == 2);
    CHECK(T.complex.count_of_dim(1) == 3);
    CHECK(T.complex.count_of_dim(0) == 1);
    CHECK_FALSE(T.complex.check_axioms().has_value());
    for (const std::string& l : T.complex.labels) CHECK_FALSE(l.empty());
    CHECK(support_equal(T.complex, trop_hypersurface(L.gens[0])).equal);
}

TEST_CASE("tropicalization of a binomial line over the 2-adics") {
    FieldSpec q2 = FieldSpec::padic(2);
    LaurentIdeal L = parse_laurent(q2, {"x", "y"}, {"x+2*y"});
    Tropicalization T = tropicalize(L, 1);
    REQUIRE(T.complex.cells.size() == 1);
    CHECK(T.complex.cells[0].dim() == 1);
    CHECK(T.complex.support_contains({Rat(1), Rat(0)}));
    CHECK(T.complex.support_contains({Rat(3), Rat(2)}));
    CHECK_FALSE(T.complex.support_contains({Rat(0), Rat(0)}));
}

TEST_CASE("tropicalization of the linear space ideal is the derived line") {
    FieldSpec q2 = FieldSpec::padic(2);
    LaurentIdeal L = parse_laurent(q2, {"x", "y", "z"}, {"x+2*y", "x+4*z"});
    for (ComplexMode mode : {ComplexMode::State, ComplexMode::Traversal}) {
        Tropicalization T = tropicalize(L, 2, 2, mode, 5);
        // The variety is the curve (s, -s/2, -s/4), so its tropicalization is
        // the single line (v, v-1, v-2).
        REQUIRE(T.complex.cells.size() == 1);
        CHECK(T.complex.cells[0].dim() == 1);
        CHECK(T.complex.support_contains({Rat(0), Rat(-1), Rat(-2)}));
        CHECK(T.complex.support_contains({Rat(5), Rat(4), Rat(3)}));
        CHECK_FALSE(T.complex.support_contains({Rat(0), Rat(0), Rat(0)}));
    }
}

TEST_CASE("principal tropicalization has the hypersurface support") {
    std::mt19937_64 rng(2026);
    std::uniform_int_distribution<int> nv(2, 3), field_pick(0, 1);
    int done = 0;
    while (done < 50) {
        FieldSpec spec = field_pick(rng) ? FieldSpec::padic(2) : FieldSpec::tadic(1);
        int n = nv(rng);
        KPoly f = random_laurent(spec, n, rng, -2, 2);
        long D = monomial_clear(f).degree();
        if (D < 1 || D > 5) continue;
        ++done;
        LaurentIdeal L(spec, {f});
        Tropicalization T = tropicalize(L, D, 1);
        CHECK(support_equal(T.complex, trop_hypersurface(f)).equal);
        CHECK_FALSE(T.complex.check_axioms().has_value());
    }
}

TEST_CASE("tropical variety sits inside every generator hypersurface") {
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<int> nv(2, 3), field_pick(0, 1);
    int done = 0;
    while (done < 10) {
        FieldSpec spec = field_pick(rng) ? FieldSpec::padic(3) : FieldSpec::tadic(1);
        int n = nv(rng);
        std::vector<KPoly> gens = {random_laurent(spec, n, rng, 0, 2),
                                   random_laurent(spec, n, rng, 0, 2)};
        long D = 0;
        for (const KPoly& g : gens) D = std::max(D, monomial_clear(g).degree());
        if (D < 1 || D > 2) continue;
        ++done;
        LaurentIdeal L(spec, gens);
        PolyhedralComplex trop;
        bool unit = false;
        HomogenizedIdeal hom = homogenized_ideal(L, D, 1);
        try {
            Tropicalization T = tropicalize(L, D, 1);
            trop = T.complex;
        } catch (const IdealIsUnit&) {
            unit = true;
        }
        if (!unit) {
            CHECK_FALSE(trop.check_axioms().has_value());
            for (const KPoly& g : gens)
                CHECK_FALSE(support_difference_witness(trop, trop_hypersurface(g)).has_value());
        }
        // Slice criterion: a lattice weight lies in the tropicalization
        // exactly when the initial ideal at (0, w) stays monomial-free.
        std::uniform_int_distribution<int> coord(-4, 4);
        for (int s = 0; s < 8; ++s) {
            QVec w(n);
            for (auto& q : w) q = Rat(coord(rng));
            bool mono = contains_monomial_up_to(hom.ideal, prepend_zero(w), D);
            bool in_support = !unit && trop.support_contains(w);
            CHECK(mono == !in_support);
        }
    }
}

// ---------------------------------------------------------------------------
// Tropical bases.
// ---------------------------------------------------------------------------

TEST_CASE("a principal ideal is its own tropical basis") {
    FieldSpec q2 = FieldSpec::padic(2);
    LaurentIdeal L = parse_laurent(q2, {"x", "y"}, {"6*x^2+5*x*y+7*y^2"});
    TropicalBasis B = tropical_basis(L, 2);
    REQUIRE(B.polynomials.size() == 1);
    CHECK(B.polynomials[0] == L.gens[0]);
    CHECK_FALSE(B.certificate.empty());
    BasisCheck chk = verify_tropical_basis(B.polynomials, L, 2);
    CHECK(chk.equal);
    CHECK_FALSE(chk.witness.has_value());
}

TEST_CASE("tropical basis certificate covers exactly the monomial cells") {
    FieldSpec q2 = FieldSpec::padic(2);
    LaurentIdeal L = parse_laurent(q2, {"x", "y", "z"}, {"x+2*y", "x+4*z"});
    long D = 2;
    TropicalBasis B = tropical_basis(L, D);
    // originals are a prefix
    REQUIRE(B.polynomials.size() >= 2);
    CHECK(B.polynomials[0] == L.gens[0]);
    CHECK(B.polynomials[1] == L.gens[1]);

    // Recompute the complex and check the certificate cell by cell against
    // the definition: the indexed polynomial has a one-term initial form at
    // the cell representative, and certified cells are exactly those whose
    // initial ideal contains a monomial.
    HomogenizedIdeal hom = homogenized_ideal(L, D);
    GrobnerComplex G = groebner_complex(hom.ideal, D, ComplexMode::State);
    for (const QPolyhedron& cell : G.complex.cells) {
        QVec rep = cell.relint_point();
        bool mono = contains_monomial_up_to(hom.ideal, rep, D);
        auto it = B.certificate.find(cell.canonical_key());
        REQUIRE((it != B.certificate.end()) == mono);
        if (!mono) continue;
        REQUIRE(it->second < B.polynomials.size());
        KPoly h = homogenize(monomial_clear(B.polynomials[it->second]));
        CHECK(initial_form_ext(h, rep).term_count() == 1);
    }
    BasisCheck chk = verify_tropical_basis(B.polynomials, L, D);
    CHECK(chk.equal);
}

TEST_CASE("unit ideals get a basis with an empty joint prevariety") {
    FieldSpec q2 = FieldSpec::padic(2);
    LaurentIdeal L = parse_laurent(q2, {"x", "y", "z"}, {"x+y", "x+y+z"});
    TropicalBasis B = tropical_basis(L, 2);
    REQUIRE(B.polynomials.size() >= 3);
    bool has_single_term = false;
    for (const KPoly& f : B.polynomials) has_single_term |= f.term_count() == 1;
    CHECK(has_single_term);
    BasisCheck chk = verify_tropical_basis(B.polynomials, L, 2);
    CHECK(chk.equal);
}

// ---------------------------------------------------------------------------
// Basis verification.
// ---------------------------------------------------------------------------

TEST_CASE("generators of the unit ideal are not a tropical basis") {
    FieldSpec q2 = FieldSpec::padic(2);
    LaurentIdeal L = parse_laurent(q2, {"x", "y", "z"}, {"x+y", "x+y+z"});
    BasisCheck chk = verify_tropical_basis(L.gens, L, 2);
    REQUIRE_FALSE(chk.equal);
    REQUIRE(chk.witness.has_value());
    // The witness lies on both hypersurfaces while the variety is empty.
    for (const KPoly& f : L.gens) CHECK(trop_eval(f, *chk.witness).argmin.size() >= 2);
}

TEST_CASE("the linear space generators are certified as a tropical basis") {
    FieldSpec q2 = FieldSpec::padic(2);
    LaurentIdeal L = parse_laurent(q2, {"x", "y", "z"}, {"x+2*y", "x+4*z"});
    // trop(x+2y) = {w1 = 1+w2} and trop(x+4z) = {w1 = 2+w3} intersect in the
    // line (v, v-1, v-2), which is exactly the tropicalization.
    BasisCheck chk = verify_tropical_basis(L.gens, L, 2);
    CHECK(chk.equal);
}

TEST_CASE("membership precheck rejects polynomials outside the ideal") {
    FieldSpec q2 = FieldSpec::padic(2);
    LaurentIdeal L = parse_laurent(q2, {"x", "y"}, {"x+2*y"});
    std::vector<KPoly> F = {parse_poly("x+2*y", q2, {"x", "y"}),
                            parse_poly("y", q2, {"x", "y"})};
    CHECK_THROWS_AS(verify_tropical_basis(F, L, 1), NotInIdeal);
}

// ---------------------------------------------------------------------------
// Degree bound heuristic.
// ---------------------------------------------------------------------------

TEST_CASE("degree bound guess on small ideals") {
    FieldSpec q2 = FieldSpec::padic(2);
    std::vector<KPoly> lin = {parse_poly("x+2*y", q2, {"x", "y", "z"}),
                              parse_poly("x+4*z", q2, {"x", "y", "z"})};
    HomogeneousIdeal I(q2, lin);
    DegreeBoundGuess g = default_degree_bound(I);
    CHECK(g.D == 1);
    REQUIRE(g.draws.size() == 3);

    std::vector<KPoly> quad = {parse_poly("6*x^2+5*x*y+7*y^2", q2, {"x", "y"})};
    HomogeneousIdeal Q(q2, quad);
    CHECK(default_degree_bound(Q).D == 2);
}
