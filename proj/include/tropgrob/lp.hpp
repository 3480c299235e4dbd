#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "tropgrob/errors.hpp"
#include "tropgrob/rational.hpp"

namespace tropgrob {

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPResult {
    LPStatus status = LPStatus::Infeasible;
    Rat objective;
    QVec point;  // a maximizer when status == Optimal
};

// maximize objective.x  subject to  ineq_A x <= ineq_b  and  eq_A x = eq_b,
// with x ranging over all of Q^n.  An all-zero objective asks for a feasible
// point only.
struct LinearProgram {
    size_t n = 0;
    std::vector<QVec> ineq_A;
    std::vector<Rat> ineq_b;
    std::vector<QVec> eq_A;
    std::vector<Rat> eq_b;
    QVec objective;

    explicit LinearProgram(size_t nvars) : n(nvars), objective(nvars, Rat(0)) {}

    void add_le(QVec a, Rat b) {
        ineq_A.push_back(std::move(a));
        ineq_b.push_back(std::move(b));
    }
    void add_eq(QVec a, Rat b) {
        eq_A.push_back(std::move(a));
        eq_b.push_back(std::move(b));
    }
};

namespace detail {

// Primal simplex over Q with Bland's rule (anti-cycling).  Variables are all
// nonnegative; rows are equalities with nonnegative right-hand side.
struct SimplexTableau {
    size_t m = 0;
    size_t n = 0;
    std::vector<std::vector<Rat>> T;  // m rows of length n+1, rhs last
    std::vector<size_t> basis;

    void pivot(size_t r, size_t c) {
        Rat p = T[r][c];
        for (auto& x : T[r]) x /= p;
        for (size_t i = 0; i < m; ++i) {
            if (i == r) continue;
            Rat f = T[i][c];
            if (f == 0) continue;
            for (size_t k = 0; k <= n; ++k) T[i][k] -= f * T[r][k];
        }
        basis[r] = c;
    }

    // Minimize cost.y over the current basic feasible region.  Returns
    // {finite, minimum}; the tableau is left at an optimal basis when finite.
    std::pair<bool, Rat> minimize(const std::vector<Rat>& cost) {
        std::vector<Rat> red(n + 1, Rat(0));
        for (size_t j = 0; j < n; ++j) red[j] = cost[j];
        for (size_t i = 0; i < m; ++i) {
            const Rat& cb = cost[basis[i]];
            if (cb == 0) continue;
            for (size_t k = 0; k <= n; ++k) red[k] -= cb * T[i][k];
        }
        for (;;) {
            size_t enter = SIZE_MAX;
            for (size_t j = 0; j < n; ++j)
                if (red[j] < 0) {
                    enter = j;
                    break;
                }
            if (enter == SIZE_MAX) break;
            size_t leave = SIZE_MAX;
            Rat best;
            for (size_t i = 0; i < m; ++i) {
                if (T[i][enter] <= 0) continue;
                Rat ratio = T[i][n] / T[i][enter];
                if (leave == SIZE_MAX || ratio < best ||
                    (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == SIZE_MAX) return {false, Rat(0)};
            pivot(leave, enter);
            Rat f = red[enter];
            if (f != 0)
                for (size_t k = 0; k <= n; ++k) red[k] -= f * T[leave][k];
        }
        return {true, -red[n]};
    }
};

}  // namespace detail

inline LPResult solve_lp(const LinearProgram& lp) {
    const size_t n = lp.n;
    const size_t mi = lp.ineq_A.size();
    const size_t me = lp.eq_A.size();
    const size_t m = mi + me;
    // Columns: u_0..u_{n-1}, v_0..v_{n-1} (x = u - v), slack per inequality,
    // then one artificial per row that lacks an identity column.
    const size_t base_cols = 2 * n + mi;

    std::vector<std::vector<Rat>> rows(m, std::vector<Rat>(base_cols, Rat(0)));
    std::vector<Rat> rhs(m, Rat(0));
    std::vector<bool> flipped(m, false);
    for (size_t i = 0; i < m; ++i) {
        const QVec& a = i < mi ? lp.ineq_A[i] : lp.eq_A[i - mi];
        if (a.size() != n) throw InvariantViolation("linear program row arity mismatch");
        for (size_t j = 0; j < n; ++j) {
            rows[i][j] = a[j];
            rows[i][n + j] = -a[j];
        }
        if (i < mi) rows[i][2 * n + i] = 1;
        rhs[i] = i < mi ? lp.ineq_b[i] : lp.eq_b[i - mi];
        if (rhs[i] < 0) {
            for (auto& x : rows[i]) x = -x;
            rhs[i] = -rhs[i];
            flipped[i] = true;
        }
    }

    std::vector<size_t> art_of_row(m, SIZE_MAX);
    size_t n_art = 0;
    for (size_t i = 0; i < m; ++i)
        if (i >= mi || flipped[i]) art_of_row[i] = base_cols + n_art++;

    detail::SimplexTableau tab;
    tab.m = m;
    tab.n = base_cols + n_art;
    tab.T.assign(m, std::vector<Rat>(tab.n + 1, Rat(0)));
    tab.basis.assign(m, SIZE_MAX);
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < base_cols; ++j) tab.T[i][j] = rows[i][j];
        tab.T[i][tab.n] = rhs[i];
        if (art_of_row[i] != SIZE_MAX) {
            tab.T[i][art_of_row[i]] = 1;
            tab.basis[i] = art_of_row[i];
        } else {
            tab.basis[i] = 2 * n + i;
        }
    }

    if (n_art > 0) {
        std::vector<Rat> cost1(tab.n, Rat(0));
        for (size_t j = base_cols; j < tab.n; ++j) cost1[j] = 1;
        auto [finite, val] = tab.minimize(cost1);
        (void)finite;  // bounded below by zero
        if (val != 0) return {LPStatus::Infeasible, Rat(0), QVec()};
        // Drive surviving artificials out of the basis, then drop their
        // columns so they can never re-enter.
        for (size_t i = 0; i < m; ++i) {
            if (tab.basis[i] < base_cols) continue;
            size_t j = SIZE_MAX;
            for (size_t k = 0; k < base_cols; ++k)
                if (tab.T[i][k] != 0) {
                    j = k;
                    break;
                }
            if (j != SIZE_MAX) tab.pivot(i, j);
        }
        for (size_t i = 0; i < m; ++i)
            for (size_t j = base_cols; j < tab.n; ++j) tab.T[i][j] = 0;
    }

    std::vector<Rat> cost2(tab.n, Rat(0));
    for (size_t j = 0; j < n; ++j) {
        cost2[j] = -lp.objective[j];
        cost2[n + j] = lp.objective[j];
    }
    auto [finite, val] = tab.minimize(cost2);
    if (!finite) return {LPStatus::Unbounded, Rat(0), QVec()};

    std::vector<Rat> y(tab.n, Rat(0));
    for (size_t i = 0; i < m; ++i)
        if (tab.basis[i] < tab.n) y[tab.basis[i]] = tab.T[i][tab.n];
    QVec x(n, Rat(0));
    for (size_t j = 0; j < n; ++j) x[j] = y[j] - y[n + j];
    return {LPStatus::Optimal, -val, std::move(x)};
}

}  // namespace tropgrob
