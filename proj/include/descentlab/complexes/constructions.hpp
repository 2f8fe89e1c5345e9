#pragma once

#include <algorithm>
#include <type_traits>
#include <vector>

#include "descentlab/complexes/complex.hpp"

namespace descentlab {

namespace detail {

template <class S>
S sign_of(const ring_of<S>& r, int e)
{
    return (e % 2 == 0) ? scalar_traits<S>::one(r) : -scalar_traits<S>::one(r);
}

template <class S>
Complex<S> with_support(const ring_of<S>& ring, int lo, int hi, auto&& dim_of)
{
    std::vector<int> dims;
    for (int n = lo; n <= hi; ++n)
        dims.push_back(dim_of(n));
    return Complex<S>(ring, lo, std::move(dims));
}

} // namespace detail

/// C[k]^n = C^{n-k}; the differential picks up (-1)^k.
template <class S>
Complex<S> shift(const Complex<S>& c, int k)
{
    std::vector<int> dims;
    for (int n = c.lo(); n <= c.hi(); ++n)
        dims.push_back(c.dim(n));
    Complex<S> out(c.ring(), c.lo() + k, std::move(dims));
    const S s = detail::sign_of<S>(c.ring(), k);
    for (int n = c.lo(); n <= c.hi(); ++n)
        out.set_d(n + k, c.d(n).scaled(s));
    out.completed_at = c.completed_at;
    return out;
}

/// C (+) D with the C block first in every degree.
template <class S>
Complex<S> direct_sum(const Complex<S>& a, const Complex<S>& b)
{
    if (!(a.ring() == b.ring()))
        throw RingMismatch("direct sum over different rings");
    int lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
    if (a.empty_support())
        lo = b.lo(), hi = b.hi();
    if (b.empty_support())
        lo = a.lo(), hi = a.hi();
    auto out = detail::with_support<S>(a.ring(), lo, hi, [&](int n) { return a.dim(n) + b.dim(n); });
    for (int n = lo; n <= hi; ++n) {
        TripletBuilder<S> t;
        t.add_block(0, 0, a.d(n));
        t.add_block(a.dim(n + 1), a.dim(n), b.d(n));
        out.set_d(n, std::move(t).build(a.ring(), out.dim(n + 1), out.dim(n)));
    }
    return out;
}

/// Direct sum of a list; block i precedes block i+1 in every degree.
template <class S>
Complex<S> direct_sum(const ring_of<S>& ring, const std::vector<Complex<S>>& parts)
{
    Complex<S> acc(ring, 0, {});
    for (const auto& p : parts)
        acc = direct_sum(acc, p);
    return acc;
}

template <class S>
struct ConeData
{
    Complex<S> cone;
    ChainMap<S> from_target; // D -> cone(f)
    ChainMap<S> to_source;   // cone(f) -> C[-1]
};

/// cone(f)^n = C^{n+1} (+) D^n, d(c, x) = (-d_C c, d_D x - f c).
template <class S>
ConeData<S> cone_data(const ChainMap<S>& f)
{
    if (f.shift() != 0)
        throw ShapeMismatch("cone needs a degree-0 chain map");
    const auto& C = f.source();
    const auto& D = f.target();
    const auto& ring = C.ring();
    int lo = std::min(C.lo() - 1, D.lo()), hi = std::max(C.hi() - 1, D.hi());
    if (C.empty_support())
        lo = D.lo(), hi = D.hi();
    if (D.empty_support())
        lo = C.lo() - 1, hi = C.hi() - 1;
    auto K = detail::with_support<S>(ring, lo, hi, [&](int n) { return C.dim(n + 1) + D.dim(n); });
    const S mone = -scalar_traits<S>::one(ring);
    for (int n = lo; n <= hi; ++n) {
        TripletBuilder<S> t;
        t.add_block(0, 0, C.d(n + 1), mone);
        t.add_block(C.dim(n + 2), 0, f.at(n + 1), mone);
        t.add_block(C.dim(n + 2), C.dim(n + 1), D.d(n));
        K.set_d(n, std::move(t).build(ring, K.dim(n + 1), K.dim(n)));
    }
    ConeData<S> out{K, ChainMap<S>(D, K), ChainMap<S>()};
    for (int n = D.lo(); n <= D.hi(); ++n) {
        TripletBuilder<S> t;
        t.add_block(C.dim(n + 1), 0, SparseMatrix<S>::identity(ring, D.dim(n)));
        out.from_target.set(n, std::move(t).build(ring, K.dim(n), D.dim(n)));
    }
    auto Cm1 = shift(C, -1);
    out.to_source = ChainMap<S>(K, Cm1);
    for (int n = lo; n <= hi; ++n) {
        TripletBuilder<S> t;
        t.add_block(0, 0, SparseMatrix<S>::identity(ring, C.dim(n + 1)));
        out.to_source.set(n, std::move(t).build(ring, Cm1.dim(n), K.dim(n)));
    }
    return out;
}

template <class S>
Complex<S> cone(const ChainMap<S>& f)
{
    return cone_data(f).cone;
}

template <class S>
struct CoconeData
{
    Complex<S> cocone;
    ChainMap<S> to_source; // cocone(f) -> C
};

/// cocone(f) = cone(f)[1]: cocone^n = C^n (+) D^{n-1}, d(c, x) = (d c, -d x + f c).
template <class S>
CoconeData<S> cocone_data(const ChainMap<S>& f)
{
    auto K = shift(cone(f), 1);
    const auto& C = f.source();
    CoconeData<S> out{K, ChainMap<S>(K, C)};
    for (int n = K.lo(); n <= K.hi(); ++n) {
        TripletBuilder<S> t;
        t.add_block(0, 0, SparseMatrix<S>::identity(C.ring(), C.dim(n)));
        out.to_source.set(n, std::move(t).build(C.ring(), C.dim(n), K.dim(n)));
    }
    return out;
}

template <class S>
Complex<S> cocone(const ChainMap<S>& f)
{
    return cocone_data(f).cocone;
}

/// Offsets of the C^i (x) D^{n-i} blocks inside (C (x) D)^n.
template <class S>
struct TensorLayout
{
    const Complex<S>* a;
    const Complex<S>* b;

    int offset(int n, int i) const
    {
        int off = 0;
        for (int k = a->lo(); k < i; ++k)
            off += a->dim(k) * b->dim(n - k);
        return off;
    }
    int index(int n, int i, int x, int y) const { return offset(n, i) + x * b->dim(n - i) + y; }
};

/// (C (x) D)^n = (+)_{i+j=n} C^i (x) D^j, d(x (x) y) = dx (x) y + (-1)^{|x|} x (x) dy.
template <class S>
Complex<S> tensor(const Complex<S>& a, const Complex<S>& b)
{
    if (!(a.ring() == b.ring()))
        throw RingMismatch("tensor over different rings");
    const auto& ring = a.ring();
    if (a.empty_support() || b.empty_support())
        return Complex<S>(ring, 0, {});
    int lo = a.lo() + b.lo(), hi = a.hi() + b.hi();
    auto out = detail::with_support<S>(ring, lo, hi, [&](int n) {
        int s = 0;
        for (int i = a.lo(); i <= a.hi(); ++i)
            s += a.dim(i) * b.dim(n - i);
        return s;
    });
    TensorLayout<S> L{&a, &b};
    for (int n = lo; n <= hi; ++n) {
        TripletBuilder<S> t;
        for (int i = a.lo(); i <= a.hi(); ++i) {
            const int j = n - i;
            const int db = b.dim(j);
            if (a.dim(i) == 0 || db == 0)
                continue;
            auto da = a.d(i);
            for (int r = 0; r < da.rows(); ++r)
                for (const auto& [c, v] : da.row(r))
                    for (int y = 0; y < db; ++y)
                        t.add(L.index(n + 1, i + 1, r, y), L.index(n, i, c, y), v);
            auto dbm = b.d(j);
            const S s = detail::sign_of<S>(ring, i);
            for (int r = 0; r < dbm.rows(); ++r)
                for (const auto& [c, v] : dbm.row(r))
                    for (int x = 0; x < a.dim(i); ++x)
                        t.add(L.index(n + 1, i, x, r), L.index(n, i, x, c), s * v);
        }
        out.set_d(n, std::move(t).build(ring, out.dim(n + 1), out.dim(n)));
    }
    return out;
}

/// x (x) y |-> (-1)^{|x||y|} y (x) x, a chain isomorphism C (x) D -> D (x) C.
template <class S>
ChainMap<S> tensor_swap(const Complex<S>& a, const Complex<S>& b)
{
    auto ab = tensor(a, b);
    auto ba = tensor(b, a);
    ChainMap<S> f(ab, ba);
    TensorLayout<S> Lab{&a, &b}, Lba{&b, &a};
    for (int n = ab.lo(); n <= ab.hi(); ++n) {
        TripletBuilder<S> t;
        for (int i = a.lo(); i <= a.hi(); ++i) {
            const int j = n - i;
            const S s = detail::sign_of<S>(a.ring(), i * j);
            for (int x = 0; x < a.dim(i); ++x)
                for (int y = 0; y < b.dim(j); ++y)
                    t.add(Lba.index(n, j, y, x), Lab.index(n, i, x, y), s);
        }
        f.set(n, std::move(t).build(a.ring(), ba.dim(n), ab.dim(n)));
    }
    return f;
}

template <class S>
struct TelescopeData
{
    Complex<S> tel;
    ChainMap<S> shift_minus_id;              // (+)_{i<L} C_i -> (+)_{i<=L} C_i
    std::vector<ChainMap<S>> stage_inclusion; // C_i -> tel
};

/// Finite telescope of C_0 -> C_1 -> ... -> C_L: cone of x_i |-> kappa_i x_i - x_i.
template <class S>
TelescopeData<S> telescope_data(const std::vector<Complex<S>>& stages, const std::vector<ChainMap<S>>& maps)
{
    if (stages.empty())
        throw ShapeMismatch("telescope needs at least one stage");
    if (maps.size() + 1 != stages.size())
        throw ShapeMismatch("telescope needs one map per consecutive pair");
    const auto& ring = stages.front().ring();
    for (size_t i = 0; i < maps.size(); ++i) {
        if (maps[i].shift() != 0)
            throw ShapeMismatch("telescope maps must have degree 0");
        for (int n = std::min(stages[i].lo(), stages[i + 1].lo()); n <= std::max(stages[i].hi(), stages[i + 1].hi()); ++n)
            if (maps[i].at(n).rows() != stages[i + 1].dim(n) || maps[i].at(n).cols() != stages[i].dim(n))
                throw ShapeMismatch("telescope map " + std::to_string(i) + " does not match its stages");
    }
    std::vector<Complex<S>> head(stages.begin(), stages.end() - 1);
    auto A = direct_sum(ring, head);
    auto B = direct_sum(ring, stages);
    ChainMap<S> phi(A, B);
    const S one = scalar_traits<S>::one(ring);
    const S mone = -one;
    for (int n = A.lo(); n <= A.hi(); ++n) {
        TripletBuilder<S> t;
        int ra = 0, rb = 0;
        for (size_t i = 0; i < head.size(); ++i) {
            const int di = stages[i].dim(n);
            t.add_block(rb, ra, SparseMatrix<S>::identity(ring, di), mone);
            t.add_block(rb + di, ra, maps[i].at(n));
            ra += di;
            rb += di;
        }
        phi.set(n, std::move(t).build(ring, B.dim(n), A.dim(n)));
    }
    auto cd = cone_data(phi);
    TelescopeData<S> out{cd.cone, phi, {}};
    int nstage = static_cast<int>(stages.size());
    for (int k = 0; k < nstage; ++k) {
        ChainMap<S> inc(stages[k], B);
        for (int n = stages[k].lo(); n <= stages[k].hi(); ++n) {
            int off = 0;
            for (int i = 0; i < k; ++i)
                off += stages[i].dim(n);
            TripletBuilder<S> t;
            t.add_block(off, 0, SparseMatrix<S>::identity(ring, stages[k].dim(n)));
            inc.set(n, std::move(t).build(ring, B.dim(n), stages[k].dim(n)));
        }
        out.stage_inclusion.push_back(compose(cd.from_target, inc));
    }
    return out;
}

template <class S>
Complex<S> telescope(const std::vector<Complex<S>>& stages, const std::vector<ChainMap<S>>& maps)
{
    return telescope_data(stages, maps).tel;
}

/// Degreewise T-adic completion at truncation level E: the identity, with E recorded.
template <class S>
Complex<S> complete(const Complex<S>& c)
{
    if constexpr (scalar_traits<S>::is_field) {
        throw UnsupportedRing("completion needs truncated Novikov coefficients");
    } else {
        Complex<S> out = c;
        out.completed_at = c.ring().cutoff;
        return out;
    }
}

} // namespace descentlab
