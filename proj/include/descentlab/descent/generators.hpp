#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "descentlab/descent/presheaf.hpp"

namespace descentlab {

/// Two points covered by two disjoint pieces: F(1) = F(2) = Q, F(12) = 0, F(top) = Q.
inline CoverPresheaf<Rational> disjoint_presheaf()
{
    const RationalField Q;
    Complex<Rational> one(Q, 0, {1}), zero(Q, 0, {0});
    CoverPresheaf<Rational> F(Q, 2);
    F.set_value(0, one);
    F.set_value(1, one);
    F.set_value(2, one);
    F.set_value(3, zero);
    F.set_restriction(0, 1, identity_map(one));
    F.set_restriction(0, 2, identity_map(one));
    F.set_restriction(1, 3, zero_map(one, zero));
    F.set_restriction(2, 3, zero_map(one, zero));
    return F;
}

struct RandomPresheafOptions
{
    int N = 3;
    int max_dim = 4;   // per degree
    int width = 3;     // support width
    int lo = 0;
};

/// Random presheaf: a complex C built from single generators and acyclic pairs, quotients
/// C / W_J by subcomplexes W_J = union of W_m (m in J), and a random unitriangular change of
/// basis on every value, with restrictions conjugated accordingly.
inline CoverPresheaf<Rational> random_presheaf(std::uint64_t seed, const RandomPresheafOptions& opt)
{
    std::mt19937_64 gen(seed);
    auto uniform = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(gen); };
    auto coin = [&](double p) { return std::bernoulli_distribution(p)(gen); };
    auto small_rational = [&] {
        int n = uniform(-3, 3);
        return Rational(n, uniform(1, 2));
    };
    const RationalField Q;
    const int W = std::max(opt.width, 1);

    // generators (degree, partner index or -1); partner is the target of d for pair sources
    struct Gen
    {
        int degree;
        int target = -1;
    };
    std::vector<Gen> gens;
    std::vector<int> load(W + 1, 0);
    for (int n = 0; n < W; ++n) {
        const int want = uniform(0, opt.max_dim);
        while (load[n] < want) {
            if (n + 1 < W && load[n + 1] < opt.max_dim && coin(0.5)) {
                gens.push_back({opt.lo + n + 1});
                const int tgt = static_cast<int>(gens.size()) - 1;
                gens.push_back({opt.lo + n, tgt});
                ++load[n + 1];
            } else {
                gens.push_back({opt.lo + n});
            }
            ++load[n];
        }
    }
    const int G = static_cast<int>(gens.size());

    CoverPresheaf<Rational> F(Q, opt.N);
    std::vector<std::vector<char>> killed(opt.N, std::vector<char>(G, 0));
    for (int m = 0; m < opt.N; ++m) {
        for (int g = 0; g < G; ++g)
            if (coin(0.3))
                killed[m][g] = 1;
        for (int g = 0; g < G; ++g)
            if (killed[m][g] && gens[g].target >= 0)
                killed[m][gens[g].target] = 1;
    }

    // surviving generators per node, grouped by degree, and their positions
    const int nodes = static_cast<int>(F.full()) + 1;
    std::vector<std::vector<int>> pos(nodes, std::vector<int>(G, -1));
    std::vector<std::vector<int>> dims(nodes, std::vector<int>(W, 0));
    for (NodeMask J = 0; J <= F.full(); ++J)
        for (int g = 0; g < G; ++g) {
            bool dead = false;
            for (int m = 0; m < opt.N; ++m)
                if ((J & (NodeMask(1) << m)) && killed[m][g])
                    dead = true;
            if (!dead)
                pos[J][g] = dims[J][gens[g].degree - opt.lo]++;
        }

    // unitriangular basis changes and their inverses per node and degree
    auto unitriangular = [&](int n) {
        std::vector<std::vector<Rational>> U(n, std::vector<Rational>(n));
        for (int i = 0; i < n; ++i) {
            U[i][i] = Rational(1);
            for (int j = i + 1; j < n; ++j)
                if (coin(0.6))
                    U[i][j] = small_rational();
        }
        return U;
    };
    auto inverse_upper = [](const std::vector<std::vector<Rational>>& U) {
        const int n = static_cast<int>(U.size());
        std::vector<std::vector<Rational>> V(n, std::vector<Rational>(n));
        for (int j = 0; j < n; ++j) {
            V[j][j] = Rational(1);
            for (int i = j - 1; i >= 0; --i) {
                Rational s;
                for (int k = i + 1; k <= j; ++k)
                    s += U[i][k] * V[k][j];
                V[i][j] = -s;
            }
        }
        return V;
    };
    auto to_sparse = [&](const std::vector<std::vector<Rational>>& A, int rows, int cols) {
        std::vector<Triplet<Rational>> t;
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                if (!A[i][j].is_zero())
                    t.push_back({i, j, A[i][j]});
        return SparseMatrix<Rational>::from_triplets(Q, rows, cols, std::move(t));
    };
    std::vector<std::vector<SparseMatrix<Rational>>> g(nodes), ginv(nodes);
    for (NodeMask J = 0; J <= F.full(); ++J)
        for (int n = 0; n < W; ++n) {
            auto U = unitriangular(dims[J][n]);
            g[J].push_back(to_sparse(U, dims[J][n], dims[J][n]));
            ginv[J].push_back(to_sparse(inverse_upper(U), dims[J][n], dims[J][n]));
        }

    for (NodeMask J = 0; J <= F.full(); ++J) {
        Complex<Rational> c(Q, opt.lo, dims[J]);
        for (int n = 0; n + 1 < W; ++n) {
            std::vector<Triplet<Rational>> t;
            for (int s = 0; s < G; ++s)
                if (gens[s].degree == opt.lo + n && gens[s].target >= 0 && pos[J][s] >= 0 &&
                    pos[J][gens[s].target] >= 0)
                    t.push_back({pos[J][gens[s].target], pos[J][s], Rational(1)});
            auto d = SparseMatrix<Rational>::from_triplets(Q, dims[J][n + 1], dims[J][n], std::move(t));
            c.set_d(opt.lo + n, g[J][n + 1] * d * ginv[J][n]);
        }
        F.set_value(J, std::move(c));
    }
    for (NodeMask J = 0; J <= F.full(); ++J)
        for (int m = 0; m < opt.N; ++m) {
            NodeMask K = J | (NodeMask(1) << m);
            if (K == J)
                continue;
            ChainMap<Rational> f(F.value(J), F.value(K));
            for (int n = 0; n < W; ++n) {
                std::vector<Triplet<Rational>> t;
                for (int s = 0; s < G; ++s)
                    if (gens[s].degree == opt.lo + n && pos[J][s] >= 0 && pos[K][s] >= 0)
                        t.push_back({pos[K][s], pos[J][s], Rational(1)});
                auto proj = SparseMatrix<Rational>::from_triplets(Q, dims[K][n], dims[J][n], std::move(t));
                f.set(opt.lo + n, g[K][n] * proj * ginv[J][n]);
            }
            F.set_restriction(J, K, std::move(f));
        }
    return F;
}

} // namespace descentlab
