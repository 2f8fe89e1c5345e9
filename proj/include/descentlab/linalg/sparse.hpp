#pragma once

#include <algorithm>
#include <cassert>
#include <string>
#include <utility>
#include <vector>

#include "descentlab/errors.hpp"
#include "descentlab/scalars/scalar_traits.hpp"

namespace descentlab {

/// Sparse vector: (index, value) pairs sorted by index, no stored zeros.
template <class S>
using SparseVec = std::vector<std::pair<int, S>>;

template <class S>
struct Triplet
{
    int row;
    int col;
    S value;
};

/// Scatter/gather accumulator for sparse linear combinations.
template <class S>
class Accumulator
{
public:
    Accumulator(int size, const S& zero) : vals_(size, zero), used_(size, 0), zero_(zero) {}

    void resize(int size)
    {
        if (size > static_cast<int>(vals_.size())) {
            vals_.resize(size, zero_);
            used_.resize(size, 0);
        }
    }

    void add(int i, const S& v)
    {
        if (!used_[i]) {
            used_[i] = 1;
            touched_.push_back(i);
            vals_[i] = v;
        } else {
            vals_[i] += v;
        }
    }

    void axpy(const S& a, const SparseVec<S>& x)
    {
        for (const auto& [i, v] : x)
            add(i, a * v);
    }

    SparseVec<S> take()
    {
        std::sort(touched_.begin(), touched_.end());
        SparseVec<S> out;
        out.reserve(touched_.size());
        for (int i : touched_) {
            if (!vals_[i].is_zero())
                out.emplace_back(i, std::move(vals_[i]));
            vals_[i] = zero_;
            used_[i] = 0;
        }
        touched_.clear();
        return out;
    }

private:
    std::vector<S> vals_;
    std::vector<char> used_;
    std::vector<int> touched_;
    S zero_;
};

template <class S>
SparseVec<S> vec_add(const SparseVec<S>& a, const SparseVec<S>& b, const S& scale_b)
{
    SparseVec<S> out;
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            S v = scale_b * b[j].second;
            if (!v.is_zero())
                out.emplace_back(b[j].first, std::move(v));
            ++j;
        } else {
            S v = a[i].second + scale_b * b[j].second;
            if (!v.is_zero())
                out.emplace_back(a[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    return out;
}

template <class S>
SparseVec<S> vec_scale(const SparseVec<S>& a, const S& s)
{
    SparseVec<S> out;
    out.reserve(a.size());
    for (const auto& [i, v] : a) {
        S w = s * v;
        if (!w.is_zero())
            out.emplace_back(i, std::move(w));
    }
    return out;
}

template <class S>
S vec_get(const SparseVec<S>& a, int i, const S& zero)
{
    auto it = std::lower_bound(a.begin(), a.end(), i, [](const auto& e, int k) { return e.first < k; });
    if (it != a.end() && it->first == i)
        return it->second;
    return zero;
}

/// Row-major sparse matrix over a coefficient ring.
template <class S>
class SparseMatrix
{
public:
    using ring_type = ring_of<S>;
    using traits = scalar_traits<S>;

    SparseMatrix() = default;
    SparseMatrix(ring_type ring, int rows, int cols)
        : ring_(std::move(ring)), rows_(rows), cols_(cols), data_(rows)
    {
        if (rows < 0 || cols < 0)
            throw ShapeMismatch("negative matrix dimension");
    }

    static SparseMatrix from_triplets(const ring_type& ring, int rows, int cols, std::vector<Triplet<S>> trips)
    {
        SparseMatrix m(ring, rows, cols);
        std::sort(trips.begin(), trips.end(), [](const auto& a, const auto& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        for (size_t k = 0; k < trips.size();) {
            const int r = trips[k].row, c = trips[k].col;
            if (r < 0 || r >= rows || c < 0 || c >= cols)
                throw ShapeMismatch("triplet (" + std::to_string(r) + "," + std::to_string(c) + ") outside " +
                                    std::to_string(rows) + "x" + std::to_string(cols));
            S v = trips[k].value;
            ++k;
            while (k < trips.size() && trips[k].row == r && trips[k].col == c)
                v += trips[k++].value;
            if (!v.is_zero())
                m.data_[r].emplace_back(c, std::move(v));
        }
        return m;
    }

    static SparseMatrix identity(const ring_type& ring, int n)
    {
        SparseMatrix m(ring, n, n);
        for (int i = 0; i < n; ++i)
            m.data_[i].emplace_back(i, traits::one(ring));
        return m;
    }

    static SparseMatrix from_rows(const ring_type& ring, int cols, std::vector<SparseVec<S>> rows)
    {
        SparseMatrix m(ring, static_cast<int>(rows.size()), cols);
        m.data_ = std::move(rows);
        return m;
    }

    /// Matrix whose columns are the given vectors (each indexed by row).
    static SparseMatrix from_columns(const ring_type& ring, int rows, const std::vector<SparseVec<S>>& columns)
    {
        std::vector<Triplet<S>> t;
        for (int c = 0; c < static_cast<int>(columns.size()); ++c)
            for (const auto& [r, v] : columns[c])
                t.push_back({r, c, v});
        return from_triplets(ring, rows, static_cast<int>(columns.size()), std::move(t));
    }

    const ring_type& ring() const noexcept { return ring_; }
    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    const SparseVec<S>& row(int i) const { return data_[i]; }
    const std::vector<SparseVec<S>>& row_data() const noexcept { return data_; }

    size_t nnz() const
    {
        size_t n = 0;
        for (const auto& r : data_)
            n += r.size();
        return n;
    }

    bool is_zero() const
    {
        for (const auto& r : data_)
            if (!r.empty())
                return false;
        return true;
    }

    S at(int i, int j) const { return vec_get(data_[i], j, traits::zero(ring_)); }

    std::vector<Triplet<S>> triplets() const
    {
        std::vector<Triplet<S>> t;
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, v] : data_[i])
                t.push_back({i, j, v});
        return t;
    }

    SparseMatrix transpose() const
    {
        std::vector<SparseVec<S>> cols(cols_);
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, v] : data_[i])
                cols[j].emplace_back(i, v);
        return from_rows(ring_, rows_, std::move(cols));
    }

    /// Column j as a sparse vector.
    SparseVec<S> column(int j) const
    {
        SparseVec<S> out;
        S z = traits::zero(ring_);
        for (int i = 0; i < rows_; ++i) {
            S v = vec_get(data_[i], j, z);
            if (!v.is_zero())
                out.emplace_back(i, std::move(v));
        }
        return out;
    }

    std::vector<SparseVec<S>> columns() const { return transpose().data_; }

    /// M * x
    SparseVec<S> apply(const SparseVec<S>& x) const
    {
        if (!x.empty() && x.back().first >= cols_)
            throw ShapeMismatch("vector index outside matrix columns");
        SparseVec<S> out;
        S z = traits::zero(ring_);
        for (int i = 0; i < rows_; ++i) {
            S acc = z;
            bool any = false;
            const auto& r = data_[i];
            size_t a = 0, b = 0;
            while (a < r.size() && b < x.size()) {
                if (r[a].first < x[b].first)
                    ++a;
                else if (x[b].first < r[a].first)
                    ++b;
                else {
                    acc += r[a].second * x[b].second;
                    any = true;
                    ++a;
                    ++b;
                }
            }
            if (any && !acc.is_zero())
                out.emplace_back(i, std::move(acc));
        }
        return out;
    }

    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b)
    {
        if (a.cols_ != b.rows_)
            throw ShapeMismatch("product of " + a.shape() + " and " + b.shape());
        SparseMatrix out(a.ring_, a.rows_, b.cols_);
        Accumulator<S> acc(b.cols_, traits::zero(a.ring_));
        for (int i = 0; i < a.rows_; ++i) {
            for (const auto& [k, v] : a.data_[i])
                acc.axpy(v, b.data_[k]);
            out.data_[i] = acc.take();
        }
        return out;
    }

    friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b)
    {
        a.check_same_shape(b);
        SparseMatrix out(a.ring_, a.rows_, a.cols_);
        S one = traits::one(a.ring_);
        for (int i = 0; i < a.rows_; ++i)
            out.data_[i] = vec_add(a.data_[i], b.data_[i], one);
        return out;
    }

    friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b)
    {
        a.check_same_shape(b);
        SparseMatrix out(a.ring_, a.rows_, a.cols_);
        S mone = -traits::one(a.ring_);
        for (int i = 0; i < a.rows_; ++i)
            out.data_[i] = vec_add(a.data_[i], b.data_[i], mone);
        return out;
    }

    SparseMatrix scaled(const S& s) const
    {
        SparseMatrix out(ring_, rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            out.data_[i] = vec_scale(data_[i], s);
        return out;
    }

    SparseMatrix operator-() const { return scaled(-traits::one(ring_)); }

    friend bool operator==(const SparseMatrix& a, const SparseMatrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

private:
    void check_same_shape(const SparseMatrix& b) const
    {
        if (rows_ != b.rows_ || cols_ != b.cols_)
            throw ShapeMismatch("shapes " + shape() + " and " + b.shape());
    }

    ring_type ring_{};
    int rows_ = 0;
    int cols_ = 0;
    std::vector<SparseVec<S>> data_;
};

/// Collects triplets for block-structured assembly.
template <class S>
class TripletBuilder
{
public:
    void add(int r, int c, const S& v)
    {
        if (!v.is_zero())
            trips_.push_back({r, c, v});
    }

    /// Places every entry of m at offset (r0, c0), scaled by s.
    void add_block(int r0, int c0, const SparseMatrix<S>& m, const S& s)
    {
        for (int i = 0; i < m.rows(); ++i)
            for (const auto& [j, v] : m.row(i))
                add(r0 + i, c0 + j, s * v);
    }
    void add_block(int r0, int c0, const SparseMatrix<S>& m)
    {
        for (int i = 0; i < m.rows(); ++i)
            for (const auto& [j, v] : m.row(i))
                add(r0 + i, c0 + j, v);
    }

    SparseMatrix<S> build(const ring_of<S>& ring, int rows, int cols) &&
    {
        return SparseMatrix<S>::from_triplets(ring, rows, cols, std::move(trips_));
    }

private:
    std::vector<Triplet<S>> trips_;
};

} // namespace descentlab
