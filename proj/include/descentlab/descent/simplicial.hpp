#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "descentlab/complexes/complex.hpp"
#include "descentlab/descent/presheaf.hpp"

namespace descentlab {

using Simplex = std::vector<int>;

/// Finite simplicial complex as a face-closed set of sorted vertex lists.
using Subcomplex = std::set<Simplex>;

inline Subcomplex closure(const std::vector<Simplex>& maximal)
{
    Subcomplex out;
    for (Simplex s : maximal) {
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw InputError("simplex with repeated vertex");
        const int n = static_cast<int>(s.size());
        if (n == 0 || n > 20)
            throw InputError("simplex size must be in 1..20");
        for (std::uint32_t m = 1; m < (1u << n); ++m) {
            Simplex f;
            for (int i = 0; i < n; ++i)
                if (m & (1u << i))
                    f.push_back(s[i]);
            out.insert(f);
        }
    }
    return out;
}

inline Subcomplex intersect(const Subcomplex& a, const Subcomplex& b)
{
    Subcomplex out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

inline Subcomplex unite(const Subcomplex& a, const Subcomplex& b)
{
    Subcomplex out = a;
    out.insert(b.begin(), b.end());
    return out;
}

inline int complex_dimension(const Subcomplex& X)
{
    int d = -1;
    for (const auto& s : X)
        d = std::max(d, static_cast<int>(s.size()) - 1);
    return d;
}

/// Simplices of dimension k in lexicographic order.
inline std::vector<Simplex> simplices_of_dim(const Subcomplex& X, int k)
{
    std::vector<Simplex> out;
    for (const auto& s : X)
        if (static_cast<int>(s.size()) == k + 1)
            out.push_back(s);
    return out;
}

/// Simplicial cochains C^k(X), (dx)(s) = sum_i (-1)^i x(s minus its i-th vertex).
inline Complex<Rational> cochain_complex(const Subcomplex& X, int top_dim)
{
    std::vector<int> dims;
    std::vector<std::vector<Simplex>> cells;
    std::vector<std::map<Simplex, int>> index;
    for (int k = 0; k <= top_dim; ++k) {
        cells.push_back(simplices_of_dim(X, k));
        dims.push_back(static_cast<int>(cells.back().size()));
        std::map<Simplex, int> m;
        for (size_t i = 0; i < cells.back().size(); ++i)
            m.emplace(cells.back()[i], static_cast<int>(i));
        index.push_back(std::move(m));
    }
    Complex<Rational> c(RationalField{}, 0, dims);
    for (int k = 0; k < top_dim; ++k) {
        std::vector<Triplet<Rational>> t;
        for (size_t r = 0; r < cells[k + 1].size(); ++r) {
            const auto& s = cells[k + 1][r];
            for (size_t i = 0; i < s.size(); ++i) {
                Simplex f = s;
                f.erase(f.begin() + static_cast<long>(i));
                t.push_back({static_cast<int>(r), index[k].at(f), Rational(i % 2 == 0 ? 1 : -1)});
            }
        }
        c.set_d(k, SparseMatrix<Rational>::from_triplets(RationalField{}, dims[k + 1], dims[k], std::move(t)));
    }
    return c;
}

/// Restriction of cochains from X to a subcomplex Y.
inline ChainMap<Rational> cochain_restriction(const Subcomplex& X, const Subcomplex& Y, int top_dim)
{
    auto cx = cochain_complex(X, top_dim), cy = cochain_complex(Y, top_dim);
    ChainMap<Rational> f(cx, cy);
    for (int k = 0; k <= top_dim; ++k) {
        auto sx = simplices_of_dim(X, k), sy = simplices_of_dim(Y, k);
        std::vector<Triplet<Rational>> t;
        size_t j = 0;
        for (size_t i = 0; i < sy.size(); ++i) {
            while (j < sx.size() && sx[j] < sy[i])
                ++j;
            if (j == sx.size() || sx[j] != sy[i])
                throw InputError("subcomplex is not contained in the ambient complex");
            t.push_back({static_cast<int>(i), static_cast<int>(j), Rational(1)});
        }
        f.set(k, SparseMatrix<Rational>::from_triplets(RationalField{}, static_cast<int>(sy.size()),
                                                       static_cast<int>(sx.size()), std::move(t)));
    }
    return f;
}

/// Intersections indexed by node mask; mask 0 is X itself.
inline std::vector<Subcomplex> cover_spaces(const Subcomplex& X, const std::vector<Subcomplex>& cover)
{
    const int N = static_cast<int>(cover.size());
    if (N < 1 || N > 16)
        throw InputError("cover needs 1..16 pieces");
    std::vector<Subcomplex> space(NodeMask(1) << N);
    space[0] = X;
    for (NodeMask J = 1; J < space.size(); ++J) {
        const int m = std::countr_zero(J);
        NodeMask rest = J & (J - 1);
        space[J] = rest == 0 ? intersect(X, cover[m]) : intersect(space[rest], cover[m]);
    }
    return space;
}

/// Cochain presheaf of a cover of X by subcomplexes: J maps to the cochains on the intersection.
inline CoverPresheaf<Rational> cochain_presheaf(const Subcomplex& X, const std::vector<Subcomplex>& cover)
{
    const int N = static_cast<int>(cover.size());
    const int top_dim = std::max(complex_dimension(X), 0);
    CoverPresheaf<Rational> F(RationalField{}, N);
    const auto space = cover_spaces(X, cover);
    for (NodeMask J = 0; J <= F.full(); ++J)
        F.set_value(J, cochain_complex(space[J], top_dim));
    for (NodeMask J = 0; J <= F.full(); ++J)
        for (int m = 0; m < N; ++m)
            if (!(J & (NodeMask(1) << m))) {
                NodeMask K = J | (NodeMask(1) << m);
                F.set_restriction(J, K, cochain_restriction(space[J], space[K], top_dim));
            }
    return F;
}

/// A simplicial complex together with a cover by subcomplexes.
struct CoveredComplex
{
    std::string name;
    Subcomplex space;
    std::vector<Subcomplex> cover;
};

inline bool covers(const CoveredComplex& c)
{
    Subcomplex u;
    for (const auto& s : c.cover)
        u = unite(u, s);
    return u == c.space;
}

/// Boundary of the triangle 012 covered by the arcs 0-1-2 and 2-0.
inline CoveredComplex triangle_boundary_arcs()
{
    return {"triangle-boundary-arcs", closure({{0, 1}, {1, 2}, {0, 2}}),
            {closure({{0, 1}, {1, 2}}), closure({{0, 2}})}};
}

/// Boundary of the triangle 012 covered by its three edges.
inline CoveredComplex triangle_boundary_edges()
{
    return {"triangle-boundary-edges", closure({{0, 1}, {1, 2}, {0, 2}}),
            {closure({{0, 1}}), closure({{1, 2}}), closure({{0, 2}})}};
}

/// Square 0-1-2-3 with the diagonal 02 and the triangle 012 filled, covered by 012, 23, 30.
inline CoveredComplex square_complex()
{
    return {"square", closure({{0, 1, 2}, {2, 3}, {0, 3}}),
            {closure({{0, 1, 2}}), closure({{2, 3}}), closure({{0, 3}})}};
}

} // namespace descentlab
