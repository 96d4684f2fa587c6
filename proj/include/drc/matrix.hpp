// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "drc/errors.hpp"
#include "drc/gf256.hpp"

namespace drc {

using gf::Element;

// Dense row-major matrix over GF(256).
class FieldMatrix {
public:
    FieldMatrix() = default;
    FieldMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    FieldMatrix(std::initializer_list<std::initializer_list<unsigned>> init) {
        rows_ = init.size();
        cols_ = rows_ == 0 ? 0 : init.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw DomainError("ragged matrix initializer");
            for (unsigned v : row) {
                if (v > 255) throw DomainError("matrix entry exceeds one byte");
                data_.emplace_back(static_cast<std::uint8_t>(v));
            }
        }
    }

    static FieldMatrix identity(std::size_t n) {
        FieldMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = gf::kOne;
        return m;
    }

    static FieldMatrix from_bytes(std::size_t rows, std::size_t cols, std::span<const std::uint8_t> bytes) {
        if (bytes.size() != rows * cols) throw DomainError("byte count does not match matrix shape");
        FieldMatrix m(rows, cols);
        for (std::size_t i = 0; i < bytes.size(); ++i) m.data_[i] = Element(bytes[i]);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Element& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Element operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Element& at(std::size_t r, std::size_t c) {
        check_index(r, c);
        return (*this)(r, c);
    }
    Element at(std::size_t r, std::size_t c) const {
        check_index(r, c);
        return (*this)(r, c);
    }

    std::span<const Element> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<Element> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

    std::vector<Element> row_vector(std::size_t r) const {
        auto s = row(r);
        return {s.begin(), s.end()};
    }

    bool row_is_zero(std::size_t r) const {
        return std::all_of(row(r).begin(), row(r).end(), [](Element e) { return e.is_zero(); });
    }

    bool col_is_zero(std::size_t c) const {
        for (std::size_t r = 0; r < rows_; ++r)
            if (!(*this)(r, c).is_zero()) return false;
        return true;
    }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](Element e) { return e.is_zero(); });
    }

    std::size_t nonzero_count() const {
        return static_cast<std::size_t>(
            std::count_if(data_.begin(), data_.end(), [](Element e) { return !e.is_zero(); }));
    }

    FieldMatrix select_rows(std::span<const std::size_t> idx) const {
        FieldMatrix m(idx.size(), cols_);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (idx[i] >= rows_) throw DomainError("row index out of range");
            std::copy_n(row(idx[i]).begin(), cols_, m.row(i).begin());
        }
        return m;
    }

    FieldMatrix select_cols(std::span<const std::size_t> idx) const {
        FieldMatrix m(rows_, idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j) {
            if (idx[j] >= cols_) throw DomainError("column index out of range");
            for (std::size_t i = 0; i < rows_; ++i) m(i, j) = (*this)(i, idx[j]);
        }
        return m;
    }

    FieldMatrix transpose() const {
        FieldMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    void append_row(std::span<const Element> r) {
        if (rows_ == 0 && cols_ == 0) cols_ = r.size();
        if (r.size() != cols_) throw DomainError("appended row has wrong width");
        data_.insert(data_.end(), r.begin(), r.end());
        ++rows_;
    }

    friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

private:
    void check_index(std::size_t r, std::size_t c) const {
        if (r >= rows_ || c >= cols_) throw DomainError("matrix index out of range");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Element> data_;
};

inline FieldMatrix operator*(const FieldMatrix& a, const FieldMatrix& b) {
    if (a.cols() != b.rows()) throw DomainError("matrix dimensions do not agree for multiplication");
    FieldMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t l = 0; l < a.cols(); ++l) {
            const Element x = a(i, l);
            if (x.is_zero()) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += x * b(l, j);
        }
    return c;
}

inline FieldMatrix operator+(const FieldMatrix& a, const FieldMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DomainError("matrix dimensions do not agree for addition");
    FieldMatrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
    return c;
}

inline std::vector<Element> operator*(const FieldMatrix& a, std::span<const Element> x) {
    if (a.cols() != x.size()) throw DomainError("vector length does not match matrix width");
    std::vector<Element> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
    return y;
}

// Row vector times matrix.
inline std::vector<Element> left_multiply(std::span<const Element> x, const FieldMatrix& a) {
    if (a.rows() != x.size()) throw DomainError("vector length does not match matrix height");
    std::vector<Element> y(a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        if (x[i].is_zero()) continue;
        for (std::size_t j = 0; j < a.cols(); ++j) y[j] += x[i] * a(i, j);
    }
    return y;
}

inline FieldMatrix hstack(std::span<const FieldMatrix> parts) {
    if (parts.empty()) return {};
    const std::size_t rows = parts.front().rows();
    std::size_t cols = 0;
    for (const auto& p : parts) {
        if (p.rows() != rows) throw DomainError("hstack operands differ in height");
        cols += p.cols();
    }
    FieldMatrix m(rows, cols);
    std::size_t off = 0;
    for (const auto& p : parts) {
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < p.cols(); ++j) m(i, off + j) = p(i, j);
        off += p.cols();
    }
    return m;
}

namespace detail {

// In-place reduction to reduced row echelon form. The pivot in each column is
// the first nonzero entry at or below the current row, so ties resolve to the
// lowest row index. Returns the pivot column of each pivot row.
inline std::vector<std::size_t> rref(FieldMatrix& m, std::size_t col_limit) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < col_limit && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c).is_zero()) ++p;
        if (p == m.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
        const Element s = gf::inv(m(r, c));
        for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) *= s;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r) continue;
            const Element f = m(i, c);
            if (f.is_zero()) continue;
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) += f * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace detail

inline std::size_t rank(const FieldMatrix& a) {
    FieldMatrix m = a;
    return detail::rref(m, m.cols()).size();
}

inline FieldMatrix invert(const FieldMatrix& a) {
    if (a.rows() != a.cols()) throw DomainError("only square matrices can be inverted");
    const std::size_t n = a.rows();
    FieldMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n + i) = gf::kOne;
    }
    const auto piv = detail::rref(aug, n);
    if (piv.size() < n) throw RankDeficiencyError(piv.size(), n, "matrix is singular");
    FieldMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

// Solves a x = b for square nonsingular a.
inline std::vector<Element> solve(const FieldMatrix& a, std::span<const Element> b) {
    if (a.rows() != a.cols()) throw DomainError("solve requires a square matrix");
    if (b.size() != a.rows()) throw DomainError("right-hand side has wrong length");
    const std::size_t n = a.rows();
    FieldMatrix aug(n, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n) = b[i];
    }
    const auto piv = detail::rref(aug, n);
    if (piv.size() < n) throw RankDeficiencyError(piv.size(), n, "system matrix is singular");
    std::vector<Element> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = aug(i, n);
    return x;
}

// Any solution of a x = b for a possibly rectangular a, or nullopt when the
// system is inconsistent. Free variables are set to zero.
inline std::optional<std::vector<Element>> solve_any(const FieldMatrix& a, std::span<const Element> b) {
    if (b.size() != a.rows()) throw DomainError("right-hand side has wrong length");
    FieldMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    const auto piv = detail::rref(aug, a.cols());
    for (std::size_t i = piv.size(); i < a.rows(); ++i)
        if (!aug(i, a.cols()).is_zero()) return std::nullopt;
    std::vector<Element> x(a.cols());
    for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug(i, a.cols());
    return x;
}

// Basis of the right nullspace {x : a x = 0}, one basis vector per row.
inline FieldMatrix nullspace(const FieldMatrix& a) {
    FieldMatrix m = a;
    const auto piv = detail::rref(m, m.cols());
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto c : piv) is_pivot[c] = true;
    FieldMatrix basis(0, a.cols());
    for (std::size_t f = 0; f < a.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<Element> v(a.cols());
        v[f] = gf::kOne;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = m(i, f);
        basis.append_row(v);
    }
    return basis;
}

// Greedy selection of linearly independent rows, scanning from row 0.
inline std::vector<std::size_t> independent_rows(const FieldMatrix& a) {
    std::vector<std::size_t> chosen;
    FieldMatrix acc(0, a.cols());
    std::size_t current = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        FieldMatrix trial = acc;
        trial.append_row(a.row(i));
        const std::size_t rk = rank(trial);
        if (rk > current) {
            acc = std::move(trial);
            current = rk;
            chosen.push_back(i);
        }
    }
    return chosen;
}

// Coefficients c with c * basis = v, where the rows of basis are independent.
inline std::vector<Element> express_in_rows(const FieldMatrix& basis, std::span<const Element> v) {
    auto sol = solve_any(basis.transpose(), v);
    if (!sol) throw RankDeficiencyError(rank(basis), basis.rows() + 1, "vector lies outside the row space");
    return *sol;
}

}  // namespace drc
