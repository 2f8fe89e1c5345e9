#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "descentlab/linalg/sparse.hpp"
#include "descentlab/scalars/novikov.hpp"

namespace descentlab {

using NMatrix = SparseMatrix<NovikovElem>;
using NVec = SparseVec<NovikovElem>;

/// Dense matrix over the truncated Novikov ring, used by Smith reduction.
struct DenseN
{
    NovikovRing ring;
    int rows = 0;
    int cols = 0;
    std::vector<NovikovElem> a;

    DenseN() = default;
    DenseN(const NovikovRing& r, int m, int n) : ring(r), rows(m), cols(n), a(static_cast<size_t>(m) * n, NovikovElem(r)) {}

    static DenseN identity(const NovikovRing& r, int n)
    {
        DenseN d(r, n, n);
        for (int i = 0; i < n; ++i)
            d(i, i) = NovikovElem(r, Rational(1));
        return d;
    }

    static DenseN from_sparse(const NMatrix& m)
    {
        DenseN d(m.ring(), m.rows(), m.cols());
        for (int i = 0; i < m.rows(); ++i)
            for (const auto& [j, v] : m.row(i))
                d(i, j) = v;
        return d;
    }

    NovikovElem& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const NovikovElem& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    NMatrix to_sparse() const
    {
        std::vector<Triplet<NovikovElem>> t;
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                if (!(*this)(i, j).is_zero())
                    t.push_back({i, j, (*this)(i, j)});
        return NMatrix::from_triplets(ring, rows, cols, std::move(t));
    }

    void swap_rows(int i, int k)
    {
        if (i == k)
            return;
        for (int j = 0; j < cols; ++j)
            std::swap((*this)(i, j), (*this)(k, j));
    }
    void swap_cols(int j, int k)
    {
        if (j == k)
            return;
        for (int i = 0; i < rows; ++i)
            std::swap((*this)(i, j), (*this)(i, k));
    }
    /// row_i += f * row_k
    void add_row(int i, int k, const NovikovElem& f)
    {
        for (int j = 0; j < cols; ++j)
            if (!(*this)(k, j).is_zero())
                (*this)(i, j) += f * (*this)(k, j);
    }
    /// col_j += f * col_k
    void add_col(int j, int k, const NovikovElem& f)
    {
        for (int i = 0; i < rows; ++i)
            if (!(*this)(i, k).is_zero())
                (*this)(i, j) += f * (*this)(i, k);
    }
    void scale_row(int i, const NovikovElem& f)
    {
        for (int j = 0; j < cols; ++j)
            (*this)(i, j) = (*this)(i, j) * f;
    }
};

/// Smith form P*A*Q = diag(u^{v_0}, ..., u^{v_{r-1}}, 0, ...) over Q[u]/(u^K).
/// Q and Q^{-1} are tracked on request; P is not needed by callers.
struct LocalSmith
{
    int rows = 0;
    int cols = 0;
    std::vector<int> valuations; // nondecreasing, each < K
    DenseN Q;
    DenseN Qinv;

    int rank() const { return static_cast<int>(valuations.size()); }
};

inline LocalSmith local_smith(const NMatrix& m, bool track = true)
{
    const NovikovRing& ring = m.ring();
    const int K = ring.steps();
    DenseN A = DenseN::from_sparse(m);
    LocalSmith s;
    s.rows = m.rows();
    s.cols = m.cols();
    if (track) {
        s.Q = DenseN::identity(ring, m.cols());
        s.Qinv = DenseN::identity(ring, m.cols());
    }
    const int lim = std::min(m.rows(), m.cols());
    for (int t = 0; t < lim; ++t) {
        int bi = -1, bj = -1, bv = K;
        for (int i = t; i < A.rows && bv > 0; ++i)
            for (int j = t; j < A.cols; ++j) {
                int v = A(i, j).valuation_steps();
                if (v < bv) {
                    bv = v;
                    bi = i;
                    bj = j;
                    if (v == 0)
                        break;
                }
            }
        if (bi < 0)
            break;
        A.swap_rows(t, bi);
        A.swap_cols(t, bj);
        if (track) {
            s.Q.swap_cols(t, bj);
            s.Qinv.swap_rows(t, bj);
        }
        // normalise the pivot to exactly u^bv
        NovikovElem unit_inv = A(t, t).shifted_down(bv).unitize();
        A.scale_row(t, unit_inv);
        for (int i = t + 1; i < A.rows; ++i) {
            if (A(i, t).is_zero())
                continue;
            A.add_row(i, t, -A(i, t).shifted_down(bv));
        }
        for (int j = t + 1; j < A.cols; ++j) {
            if (A(t, j).is_zero())
                continue;
            NovikovElem f = -A(t, j).shifted_down(bv);
            A.add_col(j, t, f);
            if (track) {
                s.Q.add_col(j, t, f);
                s.Qinv.add_row(t, j, -f);
            }
        }
        s.valuations.push_back(bv);
    }
    return s;
}

/// Lengths of the cyclic summands Q[u]/(u^l) of coker(A: R^cols -> R^rows), l in 1..K.
inline std::vector<int> cokernel_lengths(const NMatrix& m)
{
    LocalSmith s = local_smith(m, false);
    std::vector<int> out;
    for (int v : s.valuations)
        if (v > 0)
            out.push_back(v);
    for (int i = s.rank(); i < m.rows(); ++i)
        out.push_back(m.ring().steps());
    std::sort(out.begin(), out.end());
    return out;
}

inline int total_length(const std::vector<int>& lengths)
{
    int s = 0;
    for (int l : lengths)
        s += l;
    return s;
}

/// Recovers cyclic lengths from the dimensions dim(u^j M), j = 0..K.
inline std::vector<int> lengths_from_power_dims(const std::vector<int>& dims)
{
    std::vector<int> out;
    for (size_t j = 0; j + 1 < dims.size(); ++j) {
        int at_least = dims[j] - dims[j + 1];
        int longer = (j + 2 < dims.size()) ? dims[j + 1] - dims[j + 2] : 0;
        for (int c = 0; c < at_least - longer; ++c)
            out.push_back(static_cast<int>(j) + 1);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace descentlab
