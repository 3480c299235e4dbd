#pragma once

// Command-line driver: problem-file loading, option merging, JSON emission on
// stdout, optional SVG rendering, and exit-code mapping (0 ok, 2 user error,
// 3 internal inconsistency, 4 resource cap).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "tropgrob/json_io.hpp"
#include "tropgrob/svg.hpp"
#include "tropgrob/textio.hpp"
#include "tropgrob/tropical.hpp"

namespace tropgrob {
namespace cli {

struct RenderFlags {
    std::string svg_path;
    long slice = -1;  // pin this coordinate to 0 before rendering; <0 = none
    bool no_labels = false;
    std::string viewport;  // "xmin,xmax,ymin,ymax"
};

inline Problem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file '" + path + "'");
    return parse_problem(in);
}

inline void write_svg_if_requested(const PolyhedralComplex& K, const RenderFlags& rf) {
    if (rf.svg_path.empty()) return;
    RenderSpec rs;
    if (rf.slice >= 0) rs.slice_coord = static_cast<size_t>(rf.slice);
    rs.labels = !rf.no_labels;
    if (!rf.viewport.empty()) {
        QVec v = parse_weight(rf.viewport);
        if (v.size() != 4) throw ParseError("--viewport needs xmin,xmax,ymin,ymax");
        rs.viewport = std::array<Rat, 4>{v[0], v[1], v[2], v[3]};
    }
    std::ofstream out(rf.svg_path, std::ios::binary);
    if (!out) throw ParseError("cannot open SVG output file '" + rf.svg_path + "'");
    out << render_svg(K, rs);
}

inline ComplexMode mode_enum(const std::string& m) {
    return m == "traversal" ? ComplexMode::Traversal : ComplexMode::State;
}

// Agreement assertion backing `--mode both`.
inline void require_modes_agree(const PolyhedralComplex& a, const PolyhedralComplex& b) {
    bool ok = a.cells.size() == b.cells.size() && a.face_pairs == b.face_pairs &&
              a.labels == b.labels && a.maximal == b.maximal;
    for (size_t i = 0; ok && i < a.cells.size(); ++i)
        ok = a.cells[i].canonical_key() == b.cells[i].canonical_key();
    if (!ok) throw InvariantViolation("state and traversal modes produced different complexes");
}

// Degree bound: explicit option wins; otherwise a generic-initial heuristic
// with a printed warning, since no a-priori bound is computed.
inline long resolve_degree_bound(const HomogeneousIdeal& I, const Options& o) {
    if (o.degree_bound) return *o.degree_bound;
    DegreeBoundGuess g = default_degree_bound(I, o.seed + 1);
    std::cerr << "warning: no degree bound given; generic-initial scan suggests D=" << g.D
              << " (draws:";
    for (long d : g.draws) std::cerr << " " << d;
    std::cerr << "); results are degreewise-exact only up to D, pass option D= or --D to "
                 "override\n";
    return g.D;
}

inline HomogeneousIdeal plain_homogenization(const LaurentIdeal& L) {
    std::vector<KPoly> gens;
    for (const KPoly& f : L.gens) gens.push_back(homogenize(monomial_clear(f)));
    return HomogeneousIdeal(L.spec, std::move(gens));
}

inline void emit_json(const OrderedJson& doc) { std::cout << doc.dump(2) << "\n"; }

inline int cmd_initial_form(const Problem& prob, const std::string& weight_arg) {
    if (prob.polys.empty()) throw ParseError("no 'poly' lines in input");
    std::vector<QVec> ws = prob.weights;
    if (!weight_arg.empty()) {
        QVec w = parse_weight(weight_arg);
        if (w.size() != prob.vars.size())
            throw ParseError("--weight length does not match ring arity");
        ws = {std::move(w)};
    }
    if (ws.empty()) throw ParseError("initial-form needs a 'weight' line or --weight");
    for (const QVec& w : ws)
        for (const KPoly& f : prob.polys)
            std::cout << poly_str(initial_form(f, w), prob.vars) << "\n";
    return 0;
}

inline int cmd_groebner_complex(const Problem& prob, const Options& o, const RenderFlags& rf) {
    if (prob.polys.empty()) throw ParseError("no 'poly' lines in input");
    HomogeneousIdeal I(prob.field_spec(), prob.polys);
    long D = resolve_degree_bound(I, o);
    GrobnerComplex G = o.mode == "traversal"
                           ? groebner_complex(I, D, ComplexMode::Traversal, o.seed)
                           : groebner_complex(I, D, ComplexMode::State, o.seed);
    if (o.mode == "both") {
        GrobnerComplex G2 = groebner_complex(I, D, ComplexMode::Traversal, o.seed);
        require_modes_agree(G.complex, G2.complex);
    }
    emit_json(grobner_complex_json(I, G, prob.vars));
    write_svg_if_requested(G.complex, rf);
    return 0;
}

inline int cmd_trop_hypersurface(const Problem& prob, const RenderFlags& rf) {
    if (prob.polys.size() != 1)
        throw ParseError("trop-hypersurface expects exactly one 'poly' line, got " +
                         std::to_string(prob.polys.size()));
    PolyhedralComplex H = trop_hypersurface(prob.polys[0]);
    emit_json(complex_json(H));
    write_svg_if_requested(H, rf);
    return 0;
}

inline int cmd_tropicalize(const Problem& prob, const Options& o, const RenderFlags& rf) {
    LaurentIdeal L(prob.field_spec(), prob.polys);
    long D = o.degree_bound ? *o.degree_bound
                            : resolve_degree_bound(plain_homogenization(L), o);
    Tropicalization T = tropicalize(L, D, o.slack, mode_enum(o.mode), o.seed);
    if (o.mode == "both") {
        Tropicalization T2 = tropicalize(L, D, o.slack, ComplexMode::Traversal, o.seed);
        require_modes_agree(T.complex, T2.complex);
    }
    std::cerr << "warning: " << T.hom.warning << "\n";
    emit_json(tropicalization_json(T));
    write_svg_if_requested(T.complex, rf);
    return 0;
}

inline int cmd_tropical_basis(const Problem& prob, const Options& o) {
    LaurentIdeal L(prob.field_spec(), prob.polys);
    long D = o.degree_bound ? *o.degree_bound
                            : resolve_degree_bound(plain_homogenization(L), o);
    TropicalBasis B = tropical_basis(L, D, o.slack, mode_enum(o.mode), o.seed);
    if (o.mode == "both") {
        TropicalBasis B2 = tropical_basis(L, D, o.slack, ComplexMode::Traversal, o.seed);
        if (B.polynomials != B2.polynomials || B.certificate != B2.certificate)
            throw InvariantViolation("state and traversal modes produced different bases");
    }
    std::cerr << "warning: " << B.warning << "\n";
    emit_json(tropical_basis_json(B, prob.vars));
    return 0;
}

inline int cmd_verify_basis(const Problem& prob, const std::string& ideal_path,
                            const Options& o) {
    Problem ideal_prob = prob;
    if (!ideal_path.empty()) {
        ideal_prob = load_problem(ideal_path);
        if (ideal_prob.field_spec().str() != prob.field_spec().str() ||
            ideal_prob.vars != prob.vars)
            throw ParseError("--ideal file must declare the same field and ring");
    }
    LaurentIdeal L(ideal_prob.field_spec(), ideal_prob.polys);
    long D = o.degree_bound ? *o.degree_bound
                            : resolve_degree_bound(plain_homogenization(L), o);
    BasisCheck chk = verify_tropical_basis(prob.polys, L, D, o.slack, mode_enum(o.mode), o.seed);
    if (o.mode == "both") {
        BasisCheck chk2 =
            verify_tropical_basis(prob.polys, L, D, o.slack, ComplexMode::Traversal, o.seed);
        if (chk.equal != chk2.equal)
            throw InvariantViolation("state and traversal modes disagree on the basis check");
    }
    emit_json(basis_check_json(chk));
    return 0;
}

inline int run(int argc, char** argv) {
    CLI::App app{"tropgrob: exact initial forms, Groebner complexes and tropicalization "
                 "over valued fields"};
    app.require_subcommand(1);

    std::string file, ideal_file, weight_arg, mode = "state";
    long D = 0, slack = 2;
    unsigned long seed = 0;
    RenderFlags rf;

    auto add_file = [&](CLI::App* s) {
        s->add_option("file", file, "problem file (field/ring/poly/weight/option lines)")
            ->required();
    };
    auto add_compute = [&](CLI::App* s, bool with_slack) {
        s->add_option("--D", D, "degree bound for degreewise computations");
        if (with_slack) s->add_option("--slack", slack, "saturation slack (default 2)");
        s->add_option("--mode", mode, "state | traversal | both")
            ->check(CLI::IsMember({"state", "traversal", "both"}));
        s->add_option("--seed", seed, "seed for generic perturbations");
    };
    auto add_render = [&](CLI::App* s) {
        s->add_option("--svg", rf.svg_path, "write an SVG rendering to this path");
        s->add_option("--slice", rf.slice, "pin this coordinate to 0 before rendering");
        s->add_flag("--no-labels", rf.no_labels, "omit cell labels in the SVG");
        s->add_option("--viewport", rf.viewport, "xmin,xmax,ymin,ymax (rationals)");
    };

    CLI::App* c_init = app.add_subcommand(
        "initial-form", "initial form of each input polynomial at a weight vector");
    add_file(c_init);
    c_init->add_option("--weight", weight_arg, "weight vector q,q,... (overrides file)");

    CLI::App* c_grob = app.add_subcommand(
        "groebner-complex", "Groebner complex of a homogeneous ideal up to a degree bound");
    add_file(c_grob);
    add_compute(c_grob, false);
    add_render(c_grob);

    CLI::App* c_hyp =
        app.add_subcommand("trop-hypersurface", "tropical hypersurface of one polynomial");
    add_file(c_hyp);
    add_render(c_hyp);

    CLI::App* c_trop = app.add_subcommand(
        "tropicalize", "tropical variety of a Laurent ideal via homogenization");
    add_file(c_trop);
    add_compute(c_trop, true);
    add_render(c_trop);

    CLI::App* c_basis = app.add_subcommand(
        "tropical-basis", "tropical basis with per-cell monomial certificates");
    add_file(c_basis);
    add_compute(c_basis, true);

    CLI::App* c_verify = app.add_subcommand(
        "verify-basis", "check whether the input polynomials form a tropical basis");
    add_file(c_verify);
    add_compute(c_verify, true);
    c_verify->add_option("--ideal", ideal_file,
                         "problem file generating the ideal (default: the input file)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // help exits cleanly; parse failures are user errors
    }

    try {
        Problem prob = load_problem(file);
        Options o = prob.options;
        auto merge = [&](CLI::App* s) {
            auto has = [&](const std::string& name) {
                const CLI::Option* opt = s->get_option_no_throw(name);
                return opt && opt->count() > 0;
            };
            if (has("--D")) o.degree_bound = D;
            if (has("--slack")) o.slack = slack;
            if (has("--mode")) o.mode = mode;
            if (has("--seed")) o.seed = seed;
        };
        if (app.got_subcommand(c_init)) return cmd_initial_form(prob, weight_arg);
        if (app.got_subcommand(c_grob)) {
            merge(c_grob);
            return cmd_groebner_complex(prob, o, rf);
        }
        if (app.got_subcommand(c_hyp)) return cmd_trop_hypersurface(prob, rf);
        if (app.got_subcommand(c_trop)) {
            merge(c_trop);
            return cmd_tropicalize(prob, o, rf);
        }
        if (app.got_subcommand(c_basis)) {
            merge(c_basis);
            return cmd_tropical_basis(prob, o);
        }
        if (app.got_subcommand(c_verify)) {
            merge(c_verify);
            return cmd_verify_basis(prob, ideal_file, o);
        }
        throw InvariantViolation("unhandled subcommand");
    } catch (const TropError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace cli
}  // namespace tropgrob
