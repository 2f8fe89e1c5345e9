#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "descentlab/descent/generators.hpp"
#include "descentlab/descent/presheaf.hpp"
#include "descentlab/descent/simplicial.hpp"
#include "descentlab/linalg/echelon.hpp"

namespace descentlab {

/// Product e_i * e_j of basis vectors of F(J) in degrees a and b, as coordinates in degree a+b.
using BasisProduct = std::function<QVec(NodeMask J, int a, int i, int b, int j)>;

namespace detail {

inline QVec collect(const std::map<int, Rational>& acc)
{
    QVec out;
    for (const auto& [i, v] : acc)
        if (!v.is_zero())
            out.emplace_back(i, v);
    return out;
}

inline void accumulate(std::map<int, Rational>& acc, const Rational& s, const QVec& v)
{
    for (const auto& [i, x] : v)
        acc[i] += s * x;
}

} // namespace detail

/// Presheaf of differential graded algebras: values with products and units, restrictions
/// assumed multiplicative.
struct CDGAPresheaf
{
    std::string name;
    CoverPresheaf<Rational> F;
    BasisProduct mul;
    std::vector<QVec> units; // by node, in degree 0
    bool graded_commutative = true;

    int N() const { return F.N(); }

    QVec multiply(NodeMask J, int a, const QVec& x, int b, const QVec& y) const
    {
        std::map<int, Rational> acc;
        for (const auto& [i, u] : x)
            for (const auto& [j, v] : y)
                detail::accumulate(acc, u * v, mul(J, a, i, b, j));
        return detail::collect(acc);
    }
};

namespace detail {

inline QVec basis_vec(int i) { return QVec{{i, Rational(1)}}; }

inline int sign_pow(int e) { return (e % 2 == 0) ? 1 : -1; }

} // namespace detail

/// First violated algebra law on basis elements, or nullopt. Checks the unit, Leibniz,
/// associativity, graded commutativity (when claimed) and multiplicativity of generating
/// restrictions. Instances whose products leave a truncation window are skipped.
inline std::optional<std::string> cdga_defect(const CDGAPresheaf& A)
{
    using detail::basis_vec;
    const auto& F = A.F;
    auto where = [](NodeMask J, const std::string& what) { return "node " + node_string(J) + ": " + what; };
    for (NodeMask J = 0; J <= F.full(); ++J) {
        const auto& C = F.value(J);
        const QVec& one = A.units.at(J);
        if (!C.d(0).apply(one).empty())
            return where(J, "unit is not closed");
        for (int a = C.lo(); a <= C.hi(); ++a)
            for (int i = 0; i < C.dim(a); ++i) {
                if (A.multiply(J, 0, one, a, basis_vec(i)) != basis_vec(i) ||
                    A.multiply(J, a, basis_vec(i), 0, one) != basis_vec(i))
                    return where(J, "unit fails on e" + std::to_string(i) + " in degree " + std::to_string(a));
                for (int b = C.lo(); b <= C.hi(); ++b)
                    for (int j = 0; j < C.dim(b); ++j) {
                        const std::string pair = "e" + std::to_string(i) + "(deg " + std::to_string(a) + "), e" +
                                                 std::to_string(j) + "(deg " + std::to_string(b) + ")";
                        try {
                            const QVec xy = A.mul(J, a, i, b, j);
                            // d(xy) = dx y + (-1)^a x dy
                            auto lhs = C.d(a + b).apply(xy);
                            std::map<int, Rational> acc;
                            detail::accumulate(acc, Rational(1), A.multiply(J, a + 1, C.d(a).column(i), b, basis_vec(j)));
                            detail::accumulate(acc, Rational(detail::sign_pow(a)),
                                               A.multiply(J, a, basis_vec(i), b + 1, C.d(b).column(j)));
                            if (lhs != detail::collect(acc))
                                return where(J, "Leibniz fails on " + pair);
                            if (A.graded_commutative) {
                                auto yx = vec_scale(A.mul(J, b, j, a, i), Rational(detail::sign_pow(a * b)));
                                if (xy != yx)
                                    return where(J, "graded commutativity fails on " + pair);
                            }
                            for (int c = C.lo(); c <= C.hi(); ++c)
                                for (int k = 0; k < C.dim(c); ++k) {
                                    auto l = A.multiply(J, a + b, xy, c, basis_vec(k));
                                    auto r = A.multiply(J, a, basis_vec(i), b + c, A.mul(J, b, j, c, k));
                                    if (l != r)
                                        return where(J, "associativity fails on " + pair + ", e" + std::to_string(k));
                                }
                        } catch (const CutoffTooSmall&) {
                        }
                    }
            }
        for (int m = 0; m < F.N(); ++m) {
            const NodeMask K = J | (NodeMask(1) << m);
            if (K == J)
                continue;
            const auto& f = F.restriction(J, K);
            if (f.at(0).apply(one) != A.units.at(K))
                return "restriction " + node_string(J) + "->" + node_string(K) + " does not preserve the unit";
            for (int a = C.lo(); a <= C.hi(); ++a)
                for (int i = 0; i < C.dim(a); ++i)
                    for (int b = C.lo(); b <= C.hi(); ++b)
                        for (int j = 0; j < C.dim(b); ++j) {
                            QVec l, r;
                            try {
                                l = f.at(a + b).apply(A.mul(J, a, i, b, j));
                                r = A.multiply(K, a, f.at(a).column(i), b, f.at(b).column(j));
                            } catch (const CutoffTooSmall&) {
                                continue;
                            }
                            if (l != r)
                                return "restriction " + node_string(J) + "->" + node_string(K) +
                                       " is not multiplicative on e" + std::to_string(i) + ", e" + std::to_string(j);
                        }
        }
    }
    return std::nullopt;
}

/// Constant presheaf of the ground field Q in degree 0.
inline CDGAPresheaf constant_field_cdga(int N)
{
    CDGAPresheaf A;
    A.name = "constant-field";
    A.F = constant_presheaf(N, Complex<Rational>(RationalField{}, 0, {1}));
    A.mul = [](NodeMask, int a, int, int b, int) { return (a == 0 && b == 0) ? detail::basis_vec(0) : QVec{}; };
    A.units.assign(A.F.full() + 1, detail::basis_vec(0));
    return A;
}

namespace detail {

/// Basis e_S u^t of Lambda(e_1..e_r) (x) Q[u]/(u^2) restricted to the generators in `alive`,
/// with |e_i| = 1, |u| = 2, d e_1 = u.
struct ExteriorBasis
{
    std::uint32_t alive = 0;
    std::map<int, std::vector<std::pair<std::uint32_t, int>>> by_degree; // degree -> (S, t)
    std::map<std::pair<std::uint32_t, int>, int> index;                  // (S, t) -> position in its degree

    explicit ExteriorBasis(std::uint32_t alive_) : alive(alive_)
    {
        for (int t = 0; t <= 1; ++t)
            for (std::uint32_t S = 0; S <= alive; ++S)
                if ((S & ~alive) == 0) {
                    auto& v = by_degree[std::popcount(S) + 2 * t];
                    index[{S, t}] = static_cast<int>(v.size());
                    v.push_back({S, t});
                }
    }

    int dim(int n) const
    {
        auto it = by_degree.find(n);
        return it == by_degree.end() ? 0 : static_cast<int>(it->second.size());
    }
};

} // namespace detail

/// Random presheaf of quotients of Lambda(e_1..e_r) (x) Q[u]/(u^2) with d e_1 = u: each cover
/// member kills a random subset of e_2..e_r, F(J) keeps the generators no member of J kills.
inline CDGAPresheaf random_cdga_presheaf(std::uint64_t seed, int N, int r = 3)
{
    if (r < 1 || r > 8)
        throw InputError("generator count must be in 1..8");
    std::mt19937_64 gen(seed);
    const std::uint32_t all = (std::uint32_t(1) << r) - 1;
    std::vector<std::uint32_t> kill(N, 0);
    for (int m = 0; m < N; ++m)
        for (int g = 1; g < r; ++g)
            if (std::bernoulli_distribution(0.4)(gen))
                kill[m] |= std::uint32_t(1) << g;

    CDGAPresheaf A;
    A.name = "random-exterior-" + std::to_string(seed);
    A.F = CoverPresheaf<Rational>(RationalField{}, N);
    const int nodes = static_cast<int>(A.F.full()) + 1;
    std::vector<detail::ExteriorBasis> basis;
    for (NodeMask J = 0; J < static_cast<NodeMask>(nodes); ++J) {
        std::uint32_t alive = all;
        for (int m = 0; m < N; ++m)
            if (J & (NodeMask(1) << m))
                alive &= ~kill[m];
        basis.emplace_back(alive);
    }
    const int top = r + 2;
    for (NodeMask J = 0; J < static_cast<NodeMask>(nodes); ++J) {
        const auto& B = basis[J];
        std::vector<int> dims;
        for (int n = 0; n <= top; ++n)
            dims.push_back(B.dim(n));
        Complex<Rational> c(RationalField{}, 0, dims);
        for (int n = 0; n < top; ++n) {
            TripletBuilder<Rational> tb;
            if (B.dim(n) > 0)
                for (size_t col = 0; col < B.by_degree.at(n).size(); ++col) {
                    auto [S, t] = B.by_degree.at(n)[col];
                    if ((S & 1u) && t == 0)
                        tb.add(B.index.at({S & ~1u, 1}), static_cast<int>(col), Rational(1));
                }
            c.set_d(n, std::move(tb).build(RationalField{}, B.dim(n + 1), B.dim(n)));
        }
        A.F.set_value(J, std::move(c));
        A.units.push_back(detail::basis_vec(B.index.at({0u, 0})));
    }
    for (NodeMask J = 0; J < static_cast<NodeMask>(nodes); ++J)
        for (int m = 0; m < N; ++m) {
            const NodeMask K = J | (NodeMask(1) << m);
            if (K == J)
                continue;
            ChainMap<Rational> f(A.F.value(J), A.F.value(K));
            for (int n = 0; n <= top; ++n) {
                TripletBuilder<Rational> tb;
                if (basis[J].dim(n) > 0)
                    for (size_t col = 0; col < basis[J].by_degree.at(n).size(); ++col) {
                        auto key = basis[J].by_degree.at(n)[col];
                        auto it = basis[K].index.find(key);
                        if (it != basis[K].index.end())
                            tb.add(it->second, static_cast<int>(col), Rational(1));
                    }
                f.set(n, std::move(tb).build(RationalField{}, basis[K].dim(n), basis[J].dim(n)));
            }
            A.F.set_restriction(J, K, std::move(f));
        }
    A.mul = [basis](NodeMask J, int a, int i, int b, int j) -> QVec {
        const auto& B = basis[J];
        auto [S, t] = B.by_degree.at(a)[i];
        auto [T, s] = B.by_degree.at(b)[j];
        if (t + s > 1)
            return {};
        const int sg = wedge_sign(S, T);
        if (sg == 0)
            return {};
        return QVec{{B.index.at({S | T, t + s}), Rational(sg)}};
    };
    return A;
}

/// Simplicial cochains on the pieces of a cover with the cup product
/// (x y)[v_0..v_{p+q}] = x[v_0..v_p] y[v_p..v_{p+q}]; associative, not graded-commutative.
inline CDGAPresheaf cochain_cdga(const CoveredComplex& X)
{
    CDGAPresheaf A;
    A.name = X.name + "-cochains";
    A.F = cochain_presheaf(X.space, X.cover);
    A.graded_commutative = false;
    const auto space = cover_spaces(X.space, X.cover);
    const int top_dim = std::max(complex_dimension(X.space), 0);
    struct Cells
    {
        std::vector<std::vector<Simplex>> cells;
        std::vector<std::map<Simplex, int>> index;
    };
    std::vector<Cells> cells;
    for (const auto& Y : space) {
        Cells c;
        for (int k = 0; k <= top_dim; ++k) {
            c.cells.push_back(simplices_of_dim(Y, k));
            std::map<Simplex, int> m;
            for (size_t i = 0; i < c.cells.back().size(); ++i)
                m.emplace(c.cells.back()[i], static_cast<int>(i));
            c.index.push_back(std::move(m));
        }
        QVec one;
        for (int v = 0; v < static_cast<int>(c.cells[0].size()); ++v)
            one.emplace_back(v, Rational(1));
        A.units.push_back(std::move(one));
        cells.push_back(std::move(c));
    }
    A.mul = [cells, top_dim](NodeMask J, int a, int i, int b, int j) -> QVec {
        if (a + b > top_dim)
            return {};
        const auto& c = cells[J];
        const Simplex& s = c.cells[a][i];
        const Simplex& t = c.cells[b][j];
        if (s.back() != t.front())
            return {};
        Simplex u = s;
        u.insert(u.end(), t.begin() + 1, t.end());
        auto it = c.index[a + b].find(u);
        if (it == c.index[a + b].end())
            return {};
        return QVec{{it->second, Rational(1)}};
    };
    return A;
}

} // namespace descentlab
