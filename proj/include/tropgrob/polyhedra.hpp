#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tropgrob/errors.hpp"
#include "tropgrob/linalg.hpp"
#include "tropgrob/lp.hpp"
#include "tropgrob/rational.hpp"

namespace tropgrob {

// One linear constraint a.x (<= or =) b.
struct ConstraintRow {
    QVec a;
    Rat b;

    bool operator==(const ConstraintRow& o) const { return a == o.a && b == o.b; }
    bool operator<(const ConstraintRow& o) const { return a != o.a ? a < o.a : b < o.b; }
};

// A closed convex rational polyhedron in canonical form: the equality rows
// cut out the affine hull, every inequality row defines a facet, normals are
// primitive integer vectors, and rows are sorted.  Canonical forms are unique,
// so string keys decide equality of polyhedra.
class QPolyhedron {
public:
    QPolyhedron() = default;

    static QPolyhedron from_constraints(size_t ambient, std::vector<ConstraintRow> ineqs,
                                        std::vector<ConstraintRow> eqs) {
        QPolyhedron p;
        p.ambient_ = ambient;
        p.canonicalize(std::move(ineqs), std::move(eqs));
        return p;
    }

    static QPolyhedron full_space(size_t ambient) { return from_constraints(ambient, {}, {}); }

    size_t ambient_dim() const { return ambient_; }
    bool is_empty() const { return empty_; }
    int dim() const { return dim_; }
    int lineality_dim() const { return lineality_dim_; }
    const std::vector<ConstraintRow>& ineq_rows() const { return in_; }
    const std::vector<ConstraintRow>& eq_rows() const { return eq_; }

    const QVec& relint_point() const {
        if (empty_) throw InvariantViolation("relint_point of an empty polyhedron");
        return relint_;
    }

    bool contains(const QVec& x) const {
        if (x.size() != ambient_) throw ArityError("point/polyhedron dimension mismatch");
        if (empty_) return false;
        for (const auto& r : eq_)
            if (dot(r.a, x) != r.b) return false;
        for (const auto& r : in_)
            if (dot(r.a, x) > r.b) return false;
        return true;
    }

    bool relint_contains(const QVec& x) const {
        if (x.size() != ambient_) throw ArityError("point/polyhedron dimension mismatch");
        if (empty_) return false;
        for (const auto& r : eq_)
            if (dot(r.a, x) != r.b) return false;
        for (const auto& r : in_)
            if (dot(r.a, x) >= r.b) return false;
        return true;
    }

    // v lies in the lineality space: translation by v preserves the set.
    bool lineality_contains(const QVec& v) const {
        if (v.size() != ambient_) throw ArityError("direction dimension mismatch");
        if (empty_) return false;
        for (const auto& r : eq_)
            if (dot(r.a, v) != 0) return false;
        for (const auto& r : in_)
            if (dot(r.a, v) != 0) return false;
        return true;
    }

    QPolyhedron intersect(const QPolyhedron& o) const {
        if (ambient_ != o.ambient_) throw ArityError("intersection of different ambient spaces");
        if (empty_) return *this;
        if (o.empty_) return o;
        std::vector<ConstraintRow> ineqs = in_, eqs = eq_;
        ineqs.insert(ineqs.end(), o.in_.begin(), o.in_.end());
        eqs.insert(eqs.end(), o.eq_.begin(), o.eq_.end());
        return from_constraints(ambient_, std::move(ineqs), std::move(eqs));
    }

    // The codimension-one faces, one per facet inequality.
    std::vector<QPolyhedron> facets() const {
        std::vector<QPolyhedron> out;
        if (empty_) return out;
        for (size_t i = 0; i < in_.size(); ++i) {
            std::vector<ConstraintRow> ineqs;
            for (size_t j = 0; j < in_.size(); ++j)
                if (j != i) ineqs.push_back(in_[j]);
            std::vector<ConstraintRow> eqs = eq_;
            eqs.push_back(in_[i]);
            out.push_back(from_constraints(ambient_, std::move(ineqs), std::move(eqs)));
        }
        return out;
    }

    // All nonempty faces, this polyhedron included.
    std::vector<QPolyhedron> all_faces() const {
        std::vector<QPolyhedron> out;
        if (empty_) return out;
        std::set<std::string> seen;
        std::deque<QPolyhedron> queue = {*this};
        seen.insert(canonical_key());
        while (!queue.empty()) {
            QPolyhedron cur = std::move(queue.front());
            queue.pop_front();
            for (auto& f : cur.facets())
                if (seen.insert(f.canonical_key()).second) queue.push_back(f);
            out.push_back(std::move(cur));
        }
        return out;
    }

    // Is *this a face of p?  Decided through the unique minimal face of p
    // whose relative interior contains our relative-interior point.
    bool is_face_of(const QPolyhedron& p) const {
        if (ambient_ != p.ambient_) throw ArityError("face test in different ambient spaces");
        if (empty_ || p.empty_) return false;
        const QVec& z = relint_;
        if (!p.contains(z)) return false;
        std::vector<ConstraintRow> ineqs, eqs = p.eq_;
        for (const auto& r : p.in_) {
            if (dot(r.a, z) == r.b)
                eqs.push_back(r);
            else
                ineqs.push_back(r);
        }
        QPolyhedron minimal = from_constraints(ambient_, std::move(ineqs), std::move(eqs));
        return minimal.canonical_key() == canonical_key();
    }

    std::string canonical_key() const {
        std::ostringstream os;
        if (empty_) {
            os << "empty@" << ambient_;
            return os.str();
        }
        os << "d" << dim_ << "@" << ambient_;
        for (const auto& r : eq_) os << ";E" << row_str(r);
        for (const auto& r : in_) os << ";I" << row_str(r);
        return os.str();
    }

    // The polyhedron {x' : (x'_0,..,value,..) in *this} with coordinate idx
    // pinned to value and removed.
    QPolyhedron substitute_coord(size_t idx, const Rat& value) const {
        if (idx >= ambient_) throw InvariantViolation("substitute_coord index out of range");
        auto strip = [&](const ConstraintRow& r) {
            ConstraintRow s;
            s.b = r.b - r.a[idx] * value;
            for (size_t j = 0; j < ambient_; ++j)
                if (j != idx) s.a.push_back(r.a[j]);
            return s;
        };
        std::vector<ConstraintRow> ineqs, eqs;
        for (const auto& r : in_) ineqs.push_back(strip(r));
        for (const auto& r : eq_) eqs.push_back(strip(r));
        if (empty_) {
            // Preserve emptiness explicitly.
            ineqs.clear();
            eqs.clear();
            ConstraintRow bad;
            bad.a.assign(ambient_ - 1, Rat(0));
            bad.b = Rat(-1);
            ineqs.push_back(bad);
        }
        return from_constraints(ambient_ - 1, std::move(ineqs), std::move(eqs));
    }

private:
    static std::string row_str(const ConstraintRow& r) {
        std::ostringstream os;
        for (size_t j = 0; j < r.a.size(); ++j) os << (j ? "," : "") << rat_str(r.a[j]);
        os << "|" << rat_str(r.b);
        return os.str();
    }

    LinearProgram base_lp(const std::vector<ConstraintRow>& ineqs,
                          const std::vector<ConstraintRow>& eqs) const {
        LinearProgram lp(ambient_);
        for (const auto& r : ineqs) lp.add_le(r.a, r.b);
        for (const auto& r : eqs) lp.add_eq(r.a, r.b);
        return lp;
    }

    void canonicalize(std::vector<ConstraintRow> ineqs, std::vector<ConstraintRow> eqs) {
        for (const auto& r : ineqs)
            if (r.a.size() != ambient_) throw ArityError("constraint arity mismatch");
        for (const auto& r : eqs)
            if (r.a.size() != ambient_) throw ArityError("constraint arity mismatch");

        // Collapse repeated directions before any linear program runs: rows
        // with the same primitive normal keep only the tightest offset.
        {
            std::map<QVec, Rat> tight;
            bool zero_infeasible = false;
            for (auto& r : ineqs) {
                bool zero = true;
                for (const auto& c : r.a) zero = zero && c == 0;
                if (zero) {
                    if (r.b < 0) zero_infeasible = true;
                    continue;
                }
                scale_primitive(r);
                auto it = tight.find(r.a);
                if (it == tight.end())
                    tight.emplace(std::move(r.a), std::move(r.b));
                else if (r.b < it->second)
                    it->second = r.b;
            }
            ineqs.clear();
            if (zero_infeasible) {
                ConstraintRow bad;
                bad.a.assign(ambient_, Rat(0));
                bad.b = Rat(-1);
                ineqs.push_back(std::move(bad));
            }
            for (auto& [a, b] : tight) ineqs.push_back({a, b});
        }

        if (solve_lp(base_lp(ineqs, eqs)).status != LPStatus::Optimal) {
            empty_ = true;
            dim_ = -1;
            lineality_dim_ = -1;
            return;
        }

        // A point satisfying every inequality strictly proves there are no
        // implicit equalities and is itself a relative-interior point; the
        // per-row promotion pass below is then unnecessary.
        bool have_interior = false;
        QVec interior;
        if (!ineqs.empty()) {
            LinearProgram lp(ambient_ + 1);
            for (const auto& r : ineqs) {
                QVec a = r.a;
                a.push_back(Rat(1));
                lp.add_le(std::move(a), r.b);
            }
            for (const auto& r : eqs) {
                QVec a = r.a;
                a.push_back(Rat(0));
                lp.add_eq(std::move(a), r.b);
            }
            QVec cap(ambient_ + 1, Rat(0));
            cap[ambient_] = 1;
            lp.add_le(cap, Rat(1));
            lp.objective = cap;
            LPResult r = solve_lp(lp);
            if (r.status == LPStatus::Optimal && r.objective > 0) {
                have_interior = true;
                interior.assign(r.point.begin(), r.point.begin() + ambient_);
            }
        }

        // Promote implicit equalities: rows whose minimum over the set equals
        // the offset hold with equality everywhere.
        if (!have_interior) {
            std::vector<ConstraintRow> kept;
            for (size_t i = 0; i < ineqs.size(); ++i) {
                LinearProgram lp = base_lp(ineqs, eqs);
                for (size_t j = 0; j < ambient_; ++j) lp.objective[j] = -ineqs[i].a[j];
                LPResult r = solve_lp(lp);
                if (r.status == LPStatus::Optimal && -r.objective == ineqs[i].b)
                    eqs.push_back(ineqs[i]);
                else
                    kept.push_back(ineqs[i]);
            }
            ineqs = std::move(kept);
        }

        // Canonical affine hull: RREF the equality system, then scale each row
        // to a primitive integer normal (leading coefficient positive).
        std::vector<size_t> pivot_cols;
        {
            DenseMatrix<Rat> M(eqs.size(), ambient_ + 1, Rat(0));
            for (size_t i = 0; i < eqs.size(); ++i) {
                for (size_t j = 0; j < ambient_; ++j) M.at(i, j) = eqs[i].a[j];
                M.at(i, ambient_) = eqs[i].b;
            }
            pivot_cols = rref(M);
            if (!pivot_cols.empty() && pivot_cols.back() == ambient_)
                throw InvariantViolation("feasible system reduced to 0 = 1");
            eq_.clear();
            for (size_t k = 0; k < pivot_cols.size(); ++k) {
                ConstraintRow r;
                r.a.assign(ambient_, Rat(0));
                for (size_t j = 0; j < ambient_; ++j) r.a[j] = M.at(k, j);
                r.b = M.at(k, ambient_);
                scale_primitive(r);
                eq_.push_back(std::move(r));
            }
        }

        // Reduce inequalities modulo the affine hull and drop trivial rows.
        std::map<QVec, Rat> by_normal;
        for (auto& r : ineqs) {
            for (size_t k = 0; k < eq_.size(); ++k) {
                size_t p = pivot_cols[k];
                if (r.a[p] == 0) continue;
                Rat f = r.a[p] / eq_[k].a[p];
                for (size_t j = 0; j < ambient_; ++j) r.a[j] -= f * eq_[k].a[j];
                r.b -= f * eq_[k].b;
            }
            bool zero = true;
            for (const auto& c : r.a) zero = zero && c == 0;
            if (zero) {
                if (r.b < 0) throw InvariantViolation("feasible system reduced to 0 <= -1");
                continue;
            }
            scale_primitive(r);
            auto it = by_normal.find(r.a);
            if (it == by_normal.end())
                by_normal.emplace(r.a, r.b);
            else if (r.b < it->second)
                it->second = r.b;
        }
        in_.clear();
        for (auto& [a, b] : by_normal) in_.push_back({a, b});

        // Remove redundant inequalities: a row is redundant when its maximum
        // over the others does not exceed its offset.
        {
            std::vector<bool> alive(in_.size(), true);
            for (size_t i = 0; i < in_.size(); ++i) {
                LinearProgram lp(ambient_);
                for (size_t j = 0; j < in_.size(); ++j)
                    if (alive[j] && j != i) lp.add_le(in_[j].a, in_[j].b);
                for (const auto& r : eq_) lp.add_eq(r.a, r.b);
                lp.objective = in_[i].a;
                LPResult r = solve_lp(lp);
                if (r.status == LPStatus::Optimal && r.objective <= in_[i].b) alive[i] = false;
            }
            std::vector<ConstraintRow> kept;
            for (size_t i = 0; i < in_.size(); ++i)
                if (alive[i]) kept.push_back(in_[i]);
            in_ = std::move(kept);
        }
        std::sort(in_.begin(), in_.end());
        std::sort(eq_.begin(), eq_.end());

        dim_ = static_cast<int>(ambient_) - static_cast<int>(eq_.size());

        // Lineality space: directions annihilated by every row.
        {
            DenseMatrix<Rat> M(eq_.size() + in_.size(), ambient_, Rat(0));
            for (size_t i = 0; i < eq_.size(); ++i)
                for (size_t j = 0; j < ambient_; ++j) M.at(i, j) = eq_[i].a[j];
            for (size_t i = 0; i < in_.size(); ++i)
                for (size_t j = 0; j < ambient_; ++j) M.at(eq_.size() + i, j) = in_[i].a[j];
            lineality_dim_ = static_cast<int>(ambient_) - static_cast<int>(rank_of(std::move(M)));
        }

        // Relative-interior point via the largest-margin program.
        if (have_interior) {
            relint_ = std::move(interior);
        } else if (in_.empty()) {
            LPResult r = solve_lp(base_lp(in_, eq_));
            relint_ = r.point;
        } else {
            LinearProgram lp(ambient_ + 1);
            for (const auto& r : in_) {
                QVec a = r.a;
                a.push_back(Rat(1));
                lp.add_le(std::move(a), r.b);
            }
            for (const auto& r : eq_) {
                QVec a = r.a;
                a.push_back(Rat(0));
                lp.add_eq(std::move(a), r.b);
            }
            QVec cap(ambient_ + 1, Rat(0));
            cap[ambient_] = 1;
            lp.add_le(cap, Rat(1));
            lp.objective = cap;
            LPResult r = solve_lp(lp);
            if (r.status != LPStatus::Optimal || r.objective <= 0)
                throw InvariantViolation("no relative-interior point in a nonempty polyhedron");
            relint_.assign(r.point.begin(), r.point.begin() + ambient_);
        }
    }

    // Scale (a, b) by a positive rational so that a becomes a primitive
    // integer vector.
    static void scale_primitive(ConstraintRow& r) {
        ZVec z = primitive_integer(r.a);
        Rat factor;
        bool found = false;
        for (size_t j = 0; j < r.a.size() && !found; ++j)
            if (r.a[j] != 0) {
                factor = Rat(z[j]) / r.a[j];
                found = true;
            }
        if (!found) return;
        for (size_t j = 0; j < r.a.size(); ++j) r.a[j] = Rat(z[j]);
        r.b *= factor;
    }

    size_t ambient_ = 0;
    bool empty_ = false;
    int dim_ = 0;
    int lineality_dim_ = 0;
    std::vector<ConstraintRow> in_;
    std::vector<ConstraintRow> eq_;
    QVec relint_;
};

// X subset of Y, decided by checking each canonical constraint of Y over X.
inline bool poly_subset(const QPolyhedron& x, const QPolyhedron& y) {
    if (x.ambient_dim() != y.ambient_dim()) throw ArityError("subset test arity mismatch");
    if (x.is_empty()) return true;
    if (y.is_empty()) return false;
    auto max_over_x = [&](const QVec& a) -> std::optional<Rat> {
        LinearProgram lp(x.ambient_dim());
        for (const auto& r : x.ineq_rows()) lp.add_le(r.a, r.b);
        for (const auto& r : x.eq_rows()) lp.add_eq(r.a, r.b);
        lp.objective = a;
        LPResult r = solve_lp(lp);
        if (r.status != LPStatus::Optimal) return std::nullopt;
        return r.objective;
    };
    for (const auto& row : y.ineq_rows()) {
        auto m = max_over_x(row.a);
        if (!m || *m > row.b) return false;
    }
    for (const auto& row : y.eq_rows()) {
        auto hi = max_over_x(row.a);
        if (!hi || *hi != row.b) return false;
        QVec neg(row.a.size());
        for (size_t j = 0; j < neg.size(); ++j) neg[j] = -row.a[j];
        auto lo = max_over_x(neg);
        if (!lo || *lo != -row.b) return false;
    }
    return true;
}

// A finite polyhedral complex: cells closed under taking faces, pairwise
// intersections being faces of both.  face_pairs lists covering relations
// (i, j) with cell i a facet of cell j.
class PolyhedralComplex {
public:
    size_t ambient = 0;
    std::vector<QPolyhedron> cells;
    std::vector<std::string> labels;  // parallel to cells; empty when unused
    std::vector<std::pair<size_t, size_t>> face_pairs;
    std::vector<bool> maximal;

    // Build the face closure of the given candidate maximal cells.  Cells that
    // are empty, duplicated, or contained in another candidate are dropped.
    static PolyhedralComplex from_maximal(size_t ambient, std::vector<QPolyhedron> input) {
        PolyhedralComplex K;
        K.ambient = ambient;
        std::vector<QPolyhedron> max_cells;
        {
            std::set<std::string> seen;
            for (auto& c : input) {
                if (c.is_empty()) continue;
                if (c.ambient_dim() != ambient) throw ArityError("complex cell arity mismatch");
                if (seen.insert(c.canonical_key()).second) max_cells.push_back(std::move(c));
            }
            std::vector<bool> keep(max_cells.size(), true);
            for (size_t i = 0; i < max_cells.size(); ++i)
                for (size_t j = 0; j < max_cells.size() && keep[i]; ++j) {
                    if (i == j || !keep[j]) continue;
                    if (max_cells[i].dim() > max_cells[j].dim()) continue;
                    if (!max_cells[j].contains(max_cells[i].relint_point())) continue;
                    if (poly_subset(max_cells[i], max_cells[j])) keep[i] = false;
                }
            std::vector<QPolyhedron> kept;
            for (size_t i = 0; i < max_cells.size(); ++i)
                if (keep[i]) kept.push_back(std::move(max_cells[i]));
            max_cells = std::move(kept);
        }

        // Face closure with covering relations.
        std::map<std::string, size_t> index;
        std::vector<QPolyhedron> cells;
        std::set<std::pair<size_t, size_t>> pairs;
        std::vector<bool> is_max;
        std::deque<size_t> queue;
        for (auto& c : max_cells) {
            index[c.canonical_key()] = cells.size();
            queue.push_back(cells.size());
            cells.push_back(std::move(c));
            is_max.push_back(true);
        }
        while (!queue.empty()) {
            size_t cur = queue.front();
            queue.pop_front();
            for (auto& f : cells[cur].facets()) {
                std::string key = f.canonical_key();
                auto it = index.find(key);
                size_t idx;
                if (it == index.end()) {
                    idx = cells.size();
                    index[key] = idx;
                    cells.push_back(std::move(f));
                    is_max.push_back(false);
                    queue.push_back(idx);
                } else {
                    idx = it->second;
                }
                pairs.insert({idx, cur});
            }
        }

        // Deterministic cell order: dimension descending, then canonical key.
        std::vector<size_t> order(cells.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            if (cells[a].dim() != cells[b].dim()) return cells[a].dim() > cells[b].dim();
            return cells[a].canonical_key() < cells[b].canonical_key();
        });
        std::vector<size_t> rank(cells.size());
        for (size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
        K.cells.resize(cells.size());
        K.maximal.assign(cells.size(), false);
        for (size_t i = 0; i < cells.size(); ++i) {
            K.cells[rank[i]] = std::move(cells[i]);
            K.maximal[rank[i]] = is_max[i];
        }
        for (auto& [f, c] : pairs) K.face_pairs.push_back({rank[f], rank[c]});
        std::sort(K.face_pairs.begin(), K.face_pairs.end());
        K.labels.assign(K.cells.size(), std::string());
        return K;
    }

    int dim() const {
        int d = -1;
        for (const auto& c : cells) d = std::max(d, c.dim());
        return d;
    }

    size_t count_of_dim(int d) const {
        size_t n = 0;
        for (const auto& c : cells)
            if (c.dim() == d) ++n;
        return n;
    }

    std::vector<size_t> maximal_indices() const {
        std::vector<size_t> out;
        for (size_t i = 0; i < cells.size(); ++i)
            if (maximal[i]) out.push_back(i);
        return out;
    }

    bool support_contains(const QVec& z) const {
        for (size_t i : maximal_indices())
            if (cells[i].contains(z)) return true;
        return false;
    }

    // Every maximal cell shares the same lineality space containing v?
    bool lineality_everywhere(const QVec& v) const {
        for (size_t i : maximal_indices())
            if (!cells[i].lineality_contains(v)) return false;
        return true;
    }

    // Pin coordinate idx to a value and drop it; labels are not carried over.
    PolyhedralComplex substitute_coord(size_t idx, const Rat& value) const {
        std::vector<QPolyhedron> sliced;
        for (size_t i : maximal_indices()) sliced.push_back(cells[i].substitute_coord(idx, value));
        return from_maximal(ambient - 1, std::move(sliced));
    }

    // Structural sanity: face closure and pairwise intersections being faces.
    // Returns an explanation for the first violation, or nullopt when clean.
    std::optional<std::string> check_axioms() const {
        std::set<std::string> keys;
        for (const auto& c : cells) {
            if (c.is_empty()) return "empty cell stored";
            keys.insert(c.canonical_key());
        }
        if (keys.size() != cells.size()) return "duplicate cells";
        for (const auto& c : cells)
            for (const auto& f : c.facets())
                if (!keys.count(f.canonical_key())) return "missing face of a cell";
        for (size_t i = 0; i < cells.size(); ++i)
            for (size_t j = i + 1; j < cells.size(); ++j) {
                QPolyhedron m = cells[i].intersect(cells[j]);
                if (m.is_empty()) continue;
                if (!m.is_face_of(cells[i]) || !m.is_face_of(cells[j]))
                    return "intersection of two cells is not a common face";
            }
        return std::nullopt;
    }
};

// Affine-linear function c + u.w used to build min-based subdivisions.
struct AffineFunc {
    Rat c;
    QVec u;

    bool operator==(const AffineFunc& o) const { return c == o.c && u == o.u; }
    bool operator<(const AffineFunc& o) const { return c != o.c ? c < o.c : u < o.u; }

    Rat eval(const QVec& w) const { return c + dot(u, w); }
};

// Regions of linearity of w -> min_j f_j(w): the closed region where f_j is
// minimal, one candidate per function, face-closed.
inline PolyhedralComplex linearity_complex(size_t ambient, std::vector<AffineFunc> funcs) {
    if (funcs.empty()) throw InvariantViolation("linearity complex of an empty family");
    for (const auto& f : funcs)
        if (f.u.size() != ambient) throw ArityError("affine function arity mismatch");
    std::sort(funcs.begin(), funcs.end());
    funcs.erase(std::unique(funcs.begin(), funcs.end()), funcs.end());
    std::vector<QPolyhedron> regions;
    for (size_t j = 0; j < funcs.size(); ++j) {
        std::vector<ConstraintRow> ineqs;
        for (size_t k = 0; k < funcs.size(); ++k) {
            if (k == j) continue;
            ConstraintRow r;
            r.a.assign(ambient, Rat(0));
            for (size_t t = 0; t < ambient; ++t) r.a[t] = funcs[j].u[t] - funcs[k].u[t];
            r.b = funcs[k].c - funcs[j].c;
            ineqs.push_back(std::move(r));
        }
        QPolyhedron c = QPolyhedron::from_constraints(ambient, std::move(ineqs), {});
        if (!c.is_empty() && c.dim() == static_cast<int>(ambient)) regions.push_back(std::move(c));
    }
    return PolyhedralComplex::from_maximal(ambient, std::move(regions));
}

// Locus where the minimum of the family is attained at least twice: the
// tropical vanishing set of the family.
inline PolyhedralComplex nonlinearity_locus(size_t ambient, std::vector<AffineFunc> funcs) {
    for (const auto& f : funcs)
        if (f.u.size() != ambient) throw ArityError("affine function arity mismatch");
    std::sort(funcs.begin(), funcs.end());
    funcs.erase(std::unique(funcs.begin(), funcs.end()), funcs.end());
    std::vector<QPolyhedron> pieces;
    for (size_t j = 0; j < funcs.size(); ++j)
        for (size_t k = j + 1; k < funcs.size(); ++k) {
            std::vector<ConstraintRow> ineqs;
            std::vector<ConstraintRow> eqs;
            ConstraintRow tie;
            tie.a.assign(ambient, Rat(0));
            for (size_t t = 0; t < ambient; ++t) tie.a[t] = funcs[j].u[t] - funcs[k].u[t];
            tie.b = funcs[k].c - funcs[j].c;
            eqs.push_back(std::move(tie));
            for (size_t m = 0; m < funcs.size(); ++m) {
                if (m == j || m == k) continue;
                ConstraintRow r;
                r.a.assign(ambient, Rat(0));
                for (size_t t = 0; t < ambient; ++t) r.a[t] = funcs[j].u[t] - funcs[m].u[t];
                r.b = funcs[m].c - funcs[j].c;
                ineqs.push_back(std::move(r));
            }
            QPolyhedron c = QPolyhedron::from_constraints(ambient, std::move(ineqs), std::move(eqs));
            if (!c.is_empty()) pieces.push_back(std::move(c));
        }
    return PolyhedralComplex::from_maximal(ambient, std::move(pieces));
}

// Common refinement: intersections of maximal cells of the two complexes.
inline PolyhedralComplex common_refinement(const PolyhedralComplex& k1,
                                           const PolyhedralComplex& k2) {
    if (k1.ambient != k2.ambient) throw ArityError("refining complexes of different ambients");
    std::vector<QPolyhedron> pieces;
    for (size_t i : k1.maximal_indices())
        for (size_t j : k2.maximal_indices()) {
            QPolyhedron m = k1.cells[i].intersect(k2.cells[j]);
            if (!m.is_empty()) pieces.push_back(std::move(m));
        }
    return PolyhedralComplex::from_maximal(k1.ambient, std::move(pieces));
}

namespace detail {

// Split a polyhedron by a set of hyperplanes; the relative interior of every
// resulting piece meets each hyperplane either not at all or is contained in
// it, so point membership in any region carved from these hyperplanes is
// constant on each piece.
inline std::vector<QPolyhedron> refine_by_hyperplanes(const QPolyhedron& cell,
                                                      const std::vector<ConstraintRow>& planes) {
    std::vector<QPolyhedron> pieces = {cell};
    for (const auto& h : planes) {
        std::vector<QPolyhedron> next;
        for (auto& p : pieces) {
            ConstraintRow le{h.a, h.b};
            QVec neg(h.a.size());
            for (size_t j = 0; j < neg.size(); ++j) neg[j] = -h.a[j];
            ConstraintRow ge{neg, -h.b};
            std::vector<ConstraintRow> i1 = p.ineq_rows();
            i1.push_back(le);
            QPolyhedron lo = QPolyhedron::from_constraints(p.ambient_dim(), i1, p.eq_rows());
            std::vector<ConstraintRow> i2 = p.ineq_rows();
            i2.push_back(ge);
            QPolyhedron hi = QPolyhedron::from_constraints(p.ambient_dim(), i2, p.eq_rows());
            bool lo_full = !lo.is_empty() && lo.dim() == p.dim();
            bool hi_full = !hi.is_empty() && hi.dim() == p.dim();
            if (lo_full && hi_full && lo.canonical_key() == hi.canonical_key()) {
                // The piece lies inside the hyperplane; nothing to split.
                next.push_back(std::move(p));
            } else if (lo_full && hi_full) {
                next.push_back(std::move(lo));
                next.push_back(std::move(hi));
            } else {
                next.push_back(std::move(p));
            }
        }
        pieces = std::move(next);
    }
    return pieces;
}

inline std::vector<ConstraintRow> hyperplanes_of(const PolyhedralComplex& k) {
    std::set<ConstraintRow> set;
    auto norm = [&](ConstraintRow r) {
        // Orient so the lexicographically first nonzero coefficient is
        // positive; a hyperplane has no preferred side.
        for (const auto& c : r.a) {
            if (c == 0) continue;
            if (c < 0) {
                for (auto& x : r.a) x = -x;
                r.b = -r.b;
            }
            break;
        }
        return r;
    };
    for (size_t i : k.maximal_indices()) {
        for (const auto& r : k.cells[i].ineq_rows()) set.insert(norm(r));
        for (const auto& r : k.cells[i].eq_rows()) set.insert(norm(r));
    }
    return {set.begin(), set.end()};
}

}  // namespace detail

struct SupportComparison {
    bool equal = false;
    QVec witness;  // a point in exactly one of the two supports when !equal
};

// A point of |a| outside |b|, or nullopt when |a| is contained in |b|.  Cells
// of a are refined by b's defining hyperplanes first, so membership in |b| is
// constant on each probed relative interior and one probe point decides it.
inline std::optional<QVec> support_difference_witness(const PolyhedralComplex& a,
                                                      const PolyhedralComplex& b) {
    if (a.ambient != b.ambient) throw ArityError("support comparison arity mismatch");
    std::vector<ConstraintRow> planes = detail::hyperplanes_of(b);
    for (size_t i : a.maximal_indices())
        for (const auto& piece : detail::refine_by_hyperplanes(a.cells[i], planes)) {
            QVec z = piece.relint_point();
            if (!b.support_contains(z)) return z;
        }
    return std::nullopt;
}

// Do two complexes cover the same set of points?
inline SupportComparison support_equal(const PolyhedralComplex& k1, const PolyhedralComplex& k2) {
    if (auto w = support_difference_witness(k1, k2)) return {false, *w};
    if (auto w = support_difference_witness(k2, k1)) return {false, *w};
    return {true, QVec()};
}

}  // namespace tropgrob
