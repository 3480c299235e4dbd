#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "tropgrob/errors.hpp"
#include "tropgrob/rational.hpp"

namespace tropgrob {

template <class C>
inline bool is_zero_elem(const C& c) {
    return c.is_zero();
}
inline bool is_zero_elem(const Rat& c) { return c == 0; }

// Dense row-major matrix over an exact field type.
template <class C>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(size_t rows, size_t cols, const C& fill)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    C& at(size_t i, size_t j) { return a_[i * cols_ + j]; }
    const C& at(size_t i, size_t j) const { return a_[i * cols_ + j]; }

    void swap_rows(size_t i, size_t j) {
        if (i == j) return;
        for (size_t k = 0; k < cols_; ++k) std::swap(at(i, k), at(j, k));
    }

private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<C> a_;
};

// In-place reduced row echelon form; returns the pivot columns in order.
// Pivot choice is the first nonzero entry per column, so the result is
// deterministic for a given row/column arrangement.
template <class C>
std::vector<size_t> rref(DenseMatrix<C>& M) {
    std::vector<size_t> pivots;
    size_t r = 0;
    for (size_t col = 0; col < M.cols() && r < M.rows(); ++col) {
        size_t sel = M.rows();
        for (size_t i = r; i < M.rows(); ++i)
            if (!is_zero_elem(M.at(i, col))) {
                sel = i;
                break;
            }
        if (sel == M.rows()) continue;
        M.swap_rows(r, sel);
        C piv = M.at(r, col);
        for (size_t k = col; k < M.cols(); ++k) M.at(r, k) = M.at(r, k) / piv;
        for (size_t i = 0; i < M.rows(); ++i) {
            if (i == r || is_zero_elem(M.at(i, col))) continue;
            C f = M.at(i, col);
            for (size_t k = col; k < M.cols(); ++k) M.at(i, k) = M.at(i, k) - f * M.at(r, k);
        }
        pivots.push_back(col);
        ++r;
    }
    return pivots;
}

template <class C>
size_t rank_of(DenseMatrix<C> M) {
    return rref(M).size();
}

// Solve A x = b; returns the solution with free coordinates set to zero, or
// nullopt when the system is inconsistent.
template <class C>
std::optional<std::vector<C>> solve_linear(const DenseMatrix<C>& A, const std::vector<C>& b,
                                           const C& zero) {
    if (b.size() != A.rows()) throw InvariantViolation("solve_linear shape mismatch");
    DenseMatrix<C> M(A.rows(), A.cols() + 1, zero);
    for (size_t i = 0; i < A.rows(); ++i) {
        for (size_t j = 0; j < A.cols(); ++j) M.at(i, j) = A.at(i, j);
        M.at(i, A.cols()) = b[i];
    }
    std::vector<size_t> piv = rref(M);
    if (!piv.empty() && piv.back() == A.cols()) return std::nullopt;
    std::vector<C> x(A.cols(), zero);
    for (size_t k = 0; k < piv.size(); ++k) x[piv[k]] = M.at(k, A.cols());
    return x;
}

// Basis of the kernel of A, one vector per free column.
template <class C>
std::vector<std::vector<C>> kernel_basis(DenseMatrix<C> M, const C& zero, const C& one) {
    std::vector<size_t> piv = rref(M);
    std::vector<bool> is_pivot(M.cols(), false);
    for (size_t p : piv) is_pivot[p] = true;
    std::vector<std::vector<C>> basis;
    for (size_t j = 0; j < M.cols(); ++j) {
        if (is_pivot[j]) continue;
        std::vector<C> v(M.cols(), zero);
        v[j] = one;
        for (size_t k = 0; k < piv.size(); ++k) v[piv[k]] = zero - M.at(k, j);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Determinant via Gaussian elimination with exact division.
template <class C>
C det_of(DenseMatrix<C> M, const C& zero) {
    if (M.rows() != M.cols() || M.rows() == 0)
        throw InvariantViolation("det_of requires a nonempty square matrix");
    bool negate = false;
    for (size_t col = 0; col < M.cols(); ++col) {
        size_t sel = M.rows();
        for (size_t i = col; i < M.rows(); ++i)
            if (!is_zero_elem(M.at(i, col))) {
                sel = i;
                break;
            }
        if (sel == M.rows()) return zero;
        if (sel != col) {
            M.swap_rows(col, sel);
            negate = !negate;
        }
        for (size_t i = col + 1; i < M.rows(); ++i) {
            if (is_zero_elem(M.at(i, col))) continue;
            C f = M.at(i, col) / M.at(col, col);
            for (size_t k = col; k < M.cols(); ++k) M.at(i, k) = M.at(i, k) - f * M.at(col, k);
        }
    }
    C d = M.at(0, 0);
    for (size_t i = 1; i < M.rows(); ++i) d = d * M.at(i, i);
    return negate ? zero - d : d;
}

// Sparse row echelon form over a field.  Rows are column->coefficient maps;
// the result has pairwise distinct leading columns, each leading coefficient
// one, and is keyed by leading column.  Only forward elimination is performed:
// a row whose leading column is c is zero on every column before c, which is
// all later callers need.
template <typename C>
std::map<size_t, std::map<size_t, C>> sparse_echelon(std::vector<std::map<size_t, C>> rows,
                                                     const C& zero) {
    std::map<size_t, std::map<size_t, C>> lead;
    for (auto& input : rows) {
        std::map<size_t, C> r = std::move(input);
        for (;;) {
            while (!r.empty() && is_zero_elem(r.begin()->second)) r.erase(r.begin());
            if (r.empty()) break;
            auto it = lead.find(r.begin()->first);
            if (it == lead.end()) {
                C inv = r.begin()->second;
                for (auto& [c, x] : r) x = x / inv;
                lead.emplace(r.begin()->first, std::move(r));
                break;
            }
            C factor = r.begin()->second;
            for (const auto& [c, pc] : it->second) {
                auto jt = r.find(c);
                if (jt == r.end()) r.emplace(c, zero - factor * pc);
                else jt->second = jt->second - factor * pc;
            }
            for (auto jt = r.begin(); jt != r.end();)
                jt = is_zero_elem(jt->second) ? r.erase(jt) : std::next(jt);
        }
    }
    return lead;
}

}  // namespace tropgrob
