#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "descentlab/linalg/sparse.hpp"
#include "descentlab/scalars/rational.hpp"

namespace descentlab {

using QVec = SparseVec<Rational>;
using QMatrix = SparseMatrix<Rational>;

/// Incremental row echelon form over Q. Every stored row has its pivot
/// (coefficient 1) at its smallest column index.
class Echelon
{
public:
    explicit Echelon(int cols) : cols_(cols), pivot_row_(cols, -1) {}

    int cols() const noexcept { return cols_; }
    int rank() const noexcept { return static_cast<int>(rows_.size()); }

    /// Reduces leading entries against existing pivots. The result is zero
    /// iff v lies in the row span.
    QVec reduce(QVec v) const
    {
        while (!v.empty()) {
            const int lead = v.front().first;
            const int r = pivot_row_[lead];
            if (r < 0)
                break;
            v = vec_add(v, rows_[r], -v.front().second);
        }
        return v;
    }

    bool contains(const QVec& v) const { return reduce(v).empty(); }

    /// Adds v to the span; returns false if it was dependent.
    bool insert(QVec v)
    {
        v = reduce(std::move(v));
        if (v.empty())
            return false;
        Rational inv = v.front().second.inverse();
        if (!inv.is_one())
            v = vec_scale(v, inv);
        pivot_row_[v.front().first] = static_cast<int>(rows_.size());
        rows_.push_back(std::move(v));
        return true;
    }

    /// Back-substitution: afterwards each row is zero at every other pivot column.
    void make_reduced()
    {
        std::vector<int> order(rows_.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return rows_[a].front().first > rows_[b].front().first; });
        for (int r : order) {
            QVec& row = rows_[r];
            // entries after the pivot that sit on pivot columns; reducers are already reduced
            for (;;) {
                int target = -1;
                Rational coef;
                for (size_t k = 1; k < row.size(); ++k) {
                    int pr = pivot_row_[row[k].first];
                    if (pr >= 0) {
                        target = pr;
                        coef = row[k].second;
                        break;
                    }
                }
                if (target < 0)
                    break;
                row = vec_add(row, rows_[target], -coef);
            }
        }
    }

    const std::vector<QVec>& rows() const noexcept { return rows_; }
    int pivot_row(int col) const { return pivot_row_[col]; }

    std::vector<int> pivot_columns() const
    {
        std::vector<int> p;
        for (const auto& r : rows_)
            p.push_back(r.front().first);
        std::sort(p.begin(), p.end());
        return p;
    }

private:
    int cols_;
    std::vector<int> pivot_row_;
    std::vector<QVec> rows_;
};

/// Static Markowitz-style ordering: sparse columns first, short rows first.
/// Affects only fill-in, never results.
struct ColumnOrdering
{
    std::vector<int> to_new; // original column -> permuted index
    std::vector<int> to_old;

    static ColumnOrdering markowitz(const QMatrix& m)
    {
        std::vector<int> count(m.cols(), 0);
        for (const auto& r : m.row_data())
            for (const auto& e : r)
                ++count[e.first];
        ColumnOrdering o;
        o.to_old.resize(m.cols());
        std::iota(o.to_old.begin(), o.to_old.end(), 0);
        std::stable_sort(o.to_old.begin(), o.to_old.end(), [&](int a, int b) { return count[a] < count[b]; });
        o.to_new.resize(m.cols());
        for (int i = 0; i < m.cols(); ++i)
            o.to_new[o.to_old[i]] = i;
        return o;
    }

    QVec permute(const QVec& v) const
    {
        QVec out;
        out.reserve(v.size());
        for (const auto& [i, x] : v)
            out.emplace_back(to_new[i], x);
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        return out;
    }

    QVec unpermute(const QVec& v) const
    {
        QVec out;
        out.reserve(v.size());
        for (const auto& [i, x] : v)
            out.emplace_back(to_old[i], x);
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        return out;
    }
};

inline Echelon echelon_of_rows(const QMatrix& m, const ColumnOrdering& ord)
{
    std::vector<int> order(m.rows());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return m.row(a).size() < m.row(b).size(); });
    Echelon e(m.cols());
    for (int i : order)
        if (!m.row(i).empty())
            e.insert(ord.permute(m.row(i)));
    return e;
}

inline int rank(const QMatrix& m)
{
    if (m.rows() == 0 || m.cols() == 0)
        return 0;
    // eliminate along the shorter side
    if (m.rows() > m.cols()) {
        QMatrix t = m.transpose();
        return echelon_of_rows(t, ColumnOrdering::markowitz(t)).rank();
    }
    return echelon_of_rows(m, ColumnOrdering::markowitz(m)).rank();
}

/// Null space basis of m, normalised so that basis vector i is 1 at
/// free_cols[i] and 0 at every other free column. A vector v in the kernel
/// therefore has coordinates (v[free_cols[i]])_i.
struct Kernel
{
    int ambient = 0;
    std::vector<int> free_cols;
    std::vector<QVec> basis;
    std::vector<int> coord_of; // ambient column -> basis index, -1 for pivot columns

    int dim() const noexcept { return static_cast<int>(basis.size()); }

    QVec coordinates(const QVec& v) const
    {
        QVec out;
        for (const auto& [i, x] : v)
            if (coord_of[i] >= 0)
                out.emplace_back(coord_of[i], x);
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        return out;
    }

    QVec embed(const QVec& coords) const
    {
        Accumulator<Rational> acc(ambient, Rational(0));
        for (const auto& [k, c] : coords)
            acc.axpy(c, basis[k]);
        return acc.take();
    }
};

inline Kernel kernel(const QMatrix& m)
{
    Kernel k;
    k.ambient = m.cols();
    ColumnOrdering ord = ColumnOrdering::markowitz(m);
    Echelon e = echelon_of_rows(m, ord);
    e.make_reduced();
    std::vector<char> is_pivot(m.cols(), 0);
    for (int p : e.pivot_columns())
        is_pivot[ord.to_old[p]] = 1;
    k.coord_of.assign(m.cols(), -1);
    for (int c = 0; c < m.cols(); ++c)
        if (!is_pivot[c]) {
            k.coord_of[c] = static_cast<int>(k.free_cols.size());
            k.free_cols.push_back(c);
        }
    std::vector<QVec> raw(k.free_cols.size());
    for (size_t f = 0; f < k.free_cols.size(); ++f)
        raw[f].emplace_back(k.free_cols[f], Rational(1));
    for (const auto& row : e.rows()) {
        const int pcol = ord.to_old[row.front().first];
        for (size_t t = 1; t < row.size(); ++t) {
            const int col = ord.to_old[row[t].first];
            const int f = k.coord_of[col];
            if (f >= 0)
                raw[f].emplace_back(pcol, -row[t].second);
        }
    }
    for (auto& v : raw)
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    k.basis = std::move(raw);
    return k;
}

/// Span of a set of vectors with membership queries.
class Span
{
public:
    explicit Span(int ambient) : e_(ambient) {}
    Span(int ambient, const std::vector<QVec>& gens) : e_(ambient)
    {
        for (const auto& g : gens)
            e_.insert(g);
    }
    bool insert(const QVec& v) { return e_.insert(v); }
    bool contains(const QVec& v) const { return e_.contains(v); }
    int dim() const { return e_.rank(); }

private:
    Echelon e_;
};

} // namespace descentlab
