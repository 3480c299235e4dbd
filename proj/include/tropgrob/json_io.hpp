#pragma once

// JSON serialization of polyhedral complexes and the objects built on them.
// Rationals are serialized as strings "p/q" (or "p" when the denominator is
// one); floats never appear.  Key order is fixed so identical inputs produce
// byte-identical documents.

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

#include "tropgrob/grobner.hpp"
#include "tropgrob/polyhedra.hpp"
#include "tropgrob/textio.hpp"
#include "tropgrob/tropical.hpp"

namespace tropgrob {

using OrderedJson = nlohmann::ordered_json;

namespace detail {

// Scale a constraint row so the normal becomes a primitive integer vector,
// keeping the inequality orientation (the scale factor is positive).
inline std::pair<std::vector<long long>, std::string> integer_row(const ConstraintRow& row) {
    Int lcm_den(1);
    for (const Rat& q : row.a) lcm_den = boost::multiprecision::lcm(lcm_den, rat_den(q));
    std::vector<Int> scaled;
    Int g(0);
    for (const Rat& q : row.a) {
        Int v = rat_num(q) * (lcm_den / rat_den(q));
        scaled.push_back(v);
        g = boost::multiprecision::gcd(g, v);
    }
    if (g == 0) g = 1;  // zero normal: keep as-is
    std::vector<long long> normal;
    for (const Int& v : scaled) normal.push_back(static_cast<long long>(v / g));
    Rat offset = row.b * Rat(lcm_den, g);
    return {std::move(normal), rat_str(offset)};
}

inline OrderedJson row_json(const ConstraintRow& row) {
    auto [normal, offset] = integer_row(row);
    OrderedJson j;
    j["normal"] = normal;
    j["offset"] = offset;
    return j;
}

// A basis of the common lineality space of all cells: the kernel of the
// stacked constraint normals of the maximal cells.
inline std::vector<QVec> common_lineality(const PolyhedralComplex& K) {
    std::vector<const ConstraintRow*> rows;
    for (size_t i : K.maximal_indices()) {
        for (const auto& r : K.cells[i].ineq_rows()) rows.push_back(&r);
        for (const auto& r : K.cells[i].eq_rows()) rows.push_back(&r);
    }
    if (K.maximal_indices().empty()) return {};
    DenseMatrix<Rat> M(rows.size(), K.ambient, Rat(0));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < K.ambient; ++j) M.at(i, j) = rows[i]->a[j];
    std::vector<std::vector<Rat>> ker = kernel_basis(M, Rat(0), Rat(1));
    std::vector<QVec> out;
    for (auto& v : ker) out.push_back(QVec(v.begin(), v.end()));
    return out;
}

inline std::vector<std::string> rat_vec_json(const QVec& v) {
    std::vector<std::string> out;
    for (const Rat& q : v) out.push_back(rat_str(q));
    return out;
}

}  // namespace detail

inline OrderedJson complex_json(const PolyhedralComplex& K) {
    OrderedJson out;
    out["ambient_dim"] = K.ambient;
    OrderedJson lin = OrderedJson::array();
    for (const QVec& v : detail::common_lineality(K)) lin.push_back(detail::rat_vec_json(v));
    out["lineality"] = std::move(lin);
    OrderedJson cells = OrderedJson::array();
    for (size_t i = 0; i < K.cells.size(); ++i) {
        const QPolyhedron& c = K.cells[i];
        OrderedJson jc;
        jc["dim"] = c.dim();
        OrderedJson ineqs = OrderedJson::array();
        for (const auto& r : c.ineq_rows()) ineqs.push_back(detail::row_json(r));
        jc["inequalities"] = std::move(ineqs);
        OrderedJson eqs = OrderedJson::array();
        for (const auto& r : c.eq_rows()) eqs.push_back(detail::row_json(r));
        jc["equalities"] = std::move(eqs);
        jc["label"] = i < K.labels.size() ? K.labels[i] : std::string();
        jc["maximal"] = static_cast<bool>(K.maximal[i]);
        cells.push_back(std::move(jc));
    }
    out["cells"] = std::move(cells);
    OrderedJson faces = OrderedJson::array();
    for (const auto& [f, c] : K.face_pairs) faces.push_back(OrderedJson::array({f, c}));
    out["faces"] = std::move(faces);
    return out;
}

// The complex schema extended per cell with the degreewise initial data at
// the cell representative: generators of the initial space rendered over the
// residue field, whether the initial ideal is monomial through the degree
// bound, and the representative itself.
inline OrderedJson grobner_complex_json(const HomogeneousIdeal& I, const GrobnerComplex& G,
                                        const std::vector<std::string>& vars) {
    OrderedJson out = complex_json(G.complex);
    out["degree_bound"] = G.degree_bound;
    for (size_t i = 0; i < G.complex.cells.size(); ++i) {
        const QVec& w = G.complex.cells[i].relint_point();
        std::vector<std::string> gens;
        bool monomial = true;
        for (long d = 1; d <= G.degree_bound; ++d) {
            InitialSpace sp = initial_space_ext(I, PairWeight::plain(w), d);
            monomial = monomial && sp.is_monomial_space;
            for (const auto& row : sp.reduced) gens.push_back(poly_str(row, vars));
        }
        out["cells"][i]["initial_ideal"] = gens;
        out["cells"][i]["monomial"] = monomial;
        out["cells"][i]["representative_w"] = detail::rat_vec_json(w);
    }
    return out;
}

inline OrderedJson tropicalization_json(const Tropicalization& T) {
    OrderedJson out = complex_json(T.complex);
    out["degree_bound"] = T.degree_bound;
    return out;
}

inline OrderedJson tropical_basis_json(const TropicalBasis& B,
                                       const std::vector<std::string>& vars) {
    OrderedJson out;
    std::vector<std::string> polys;
    for (const KPoly& f : B.polynomials) polys.push_back(poly_str(f, vars));
    out["polynomials"] = polys;
    OrderedJson cert = OrderedJson::object();
    for (const auto& [key, idx] : B.certificate) cert[key] = idx;
    out["certificate"] = std::move(cert);
    return out;
}

inline OrderedJson basis_check_json(const BasisCheck& chk) {
    OrderedJson out;
    out["equal"] = chk.equal;
    if (chk.witness)
        out["witness"] = detail::rat_vec_json(*chk.witness);
    else
        out["witness"] = nullptr;
    return out;
}

}  // namespace tropgrob
