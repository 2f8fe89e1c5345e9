#pragma once

#include <optional>
#include <string>
#include <vector>

#include "descentlab/complexes/constructions.hpp"
#include "descentlab/descent/presheaf.hpp"

namespace descentlab {

/// Semi-cosimplicial complex D^0..D^L with cofaces d_i : D^p -> D^{p+1}, i = 0..p+1,
/// and an optional augmentation D^{-1} -> D^0.
template <class S>
struct Cosimplicial
{
    ring_of<S> ring{};
    std::vector<Complex<S>> levels;
    std::vector<std::vector<ChainMap<S>>> cofaces; // cofaces[p][i]
    std::optional<ChainMap<S>> augmentation;
    std::vector<std::vector<NodeMask>> nodes;      // summands of each level, when built from a presheaf

    int top_level() const { return static_cast<int>(levels.size()) - 1; }

    /// D^{-1} -> D^p, the augmentation followed by any chain of cofaces.
    ChainMap<S> augmentation_to(int p) const
    {
        if (!augmentation)
            throw InputError("cosimplicial complex has no augmentation");
        ChainMap<S> f = *augmentation;
        for (int q = 0; q < p; ++q)
            f = compose(cofaces[q][0], f);
        return f;
    }
};

/// Checks d_j d_i = d_i d_{j-1} for i < j and that the augmentation equalizes d_0, d_1.
/// Returns a description of the first failing identity.
template <class S>
std::optional<std::string> cosimplicial_defect(const Cosimplicial<S>& D)
{
    for (int p = 0; p + 2 <= D.top_level(); ++p)
        for (int j = 0; j <= p + 2; ++j)
            for (int i = 0; i < j; ++i) {
                auto lhs = compose(D.cofaces[p + 1][j], D.cofaces[p][i]);
                auto rhs = compose(D.cofaces[p + 1][i], D.cofaces[p][j - 1]);
                if (!maps_equal(lhs, rhs))
                    return "d_" + std::to_string(j) + " d_" + std::to_string(i) + " != d_" + std::to_string(i) +
                           " d_" + std::to_string(j - 1) + " on level " + std::to_string(p);
            }
    if (D.augmentation && D.top_level() >= 1)
        if (!maps_equal(compose(D.cofaces[0][0], *D.augmentation), compose(D.cofaces[0][1], *D.augmentation)))
            return std::string("augmentation does not equalize d_0 and d_1");
    return std::nullopt;
}

/// D^p = sum over |J| = p+1 of F(J); (d_i x)_{J'} = res(x_{J' minus its i-th member}).
template <class S>
Cosimplicial<S> nerve_cosimplicial(const CoverPresheaf<S>& F)
{
    const int N = F.N();
    Cosimplicial<S> D;
    D.ring = F.ring();
    for (int p = 0; p < N; ++p) {
        D.nodes.push_back(nodes_of_size(N, p));
        std::vector<Complex<S>> parts;
        for (NodeMask J : D.nodes.back())
            parts.push_back(F.value(J));
        D.levels.push_back(direct_sum(F.ring(), parts));
    }
    auto block_offset = [&](int p, NodeMask J, int n) {
        int off = 0;
        for (NodeMask K : D.nodes[p]) {
            if (K == J)
                return off;
            off += F.value(K).dim(n);
        }
        throw ShapeMismatch("node not in level");
    };
    for (int p = 0; p + 1 < N; ++p) {
        std::vector<ChainMap<S>> row;
        for (int i = 0; i <= p + 1; ++i) {
            ChainMap<S> f(D.levels[p], D.levels[p + 1]);
            for (int n = D.levels[p].lo(); n <= D.levels[p].hi(); ++n) {
                TripletBuilder<S> tb;
                for (NodeMask Jp : D.nodes[p + 1]) {
                    auto members = face_vertices(Jp);
                    NodeMask J = Jp & ~(NodeMask(1) << members[i]);
                    tb.add_block(block_offset(p + 1, Jp, n), block_offset(p, J, n), F.restriction(J, Jp).at(n));
                }
                f.set(n, std::move(tb).build(F.ring(), D.levels[p + 1].dim(n), D.levels[p].dim(n)));
            }
            row.push_back(std::move(f));
        }
        D.cofaces.push_back(std::move(row));
    }
    ChainMap<S> aug(F.top(), D.levels[0]);
    for (int n = F.top().lo(); n <= F.top().hi(); ++n) {
        TripletBuilder<S> tb;
        for (NodeMask J : D.nodes[0])
            tb.add_block(block_offset(0, J, n), 0, F.restriction(0, J).at(n));
        aug.set(n, std::move(tb).build(F.ring(), D.levels[0].dim(n), F.top().dim(n)));
    }
    D.augmentation = std::move(aug);
    return D;
}

/// Offsets of the blocks D^p_{n-p} inside the total degree-n space.
template <class S>
struct TotalLayout
{
    const std::vector<Complex<S>>* levels = nullptr;
    int lo = 0, hi = -1;

    int offset(int n, int p) const
    {
        int off = 0;
        for (int q = 0; q < p; ++q)
            off += (*levels)[q].dim(n - q);
        return off;
    }
    int dim(int n) const { return offset(n, static_cast<int>(levels->size())); }
};

template <class S>
struct CechData
{
    Complex<S> cech;
    TotalLayout<S> layout;
    std::optional<ChainMap<S>> augmentation; // D^{-1} -> cech
};

/// Total complex of sum_p D^p[-p] with D = sum_i (-1)^i d_i + (-1)^p d_internal.
template <class S>
CechData<S> cech_data(const Cosimplicial<S>& D)
{
    CechData<S> out;
    out.layout.levels = &D.levels;
    int lo = 0, hi = -1;
    bool any = false;
    for (int p = 0; p <= D.top_level(); ++p) {
        const auto& L = D.levels[p];
        if (L.empty_support())
            continue;
        lo = any ? std::min(lo, L.lo() + p) : L.lo() + p;
        hi = any ? std::max(hi, L.hi() + p) : L.hi() + p;
        any = true;
    }
    out.layout.lo = lo;
    out.layout.hi = hi;
    const auto& lay = out.layout;
    auto C = detail::with_support<S>(D.ring, lo, hi, [&](int n) { return lay.dim(n); });
    for (int n = lo; n <= hi; ++n) {
        TripletBuilder<S> tb;
        for (int p = 0; p <= D.top_level(); ++p) {
            const int a = n - p;
            tb.add_block(lay.offset(n + 1, p), lay.offset(n, p), D.levels[p].d(a), detail::sign_of<S>(D.ring, p));
            if (p < D.top_level())
                for (int i = 0; i <= p + 1; ++i)
                    tb.add_block(lay.offset(n + 1, p + 1), lay.offset(n, p), D.cofaces[p][i].at(a),
                                 detail::sign_of<S>(D.ring, i));
        }
        C.set_d(n, std::move(tb).build(D.ring, lay.dim(n + 1), lay.dim(n)));
    }
    out.cech = std::move(C);
    if (D.augmentation) {
        const auto& src = D.augmentation->source();
        ChainMap<S> aug(src, out.cech);
        for (int n = src.lo(); n <= src.hi(); ++n) {
            TripletBuilder<S> tb;
            tb.add_block(lay.offset(n, 0), 0, D.augmentation->at(n));
            aug.set(n, std::move(tb).build(D.ring, lay.dim(n), src.dim(n)));
        }
        out.augmentation = std::move(aug);
    }
    return out;
}

/// Cech complex of a presheaf with its augmentation from the total set.
template <class S>
struct CechResult
{
    Cosimplicial<S> nerve;
    Complex<S> cech;
    ChainMap<S> augmentation;
};

template <class S>
CechResult<S> cech(const CoverPresheaf<S>& F)
{
    CechResult<S> r;
    r.nerve = nerve_cosimplicial(F);
    auto data = cech_data(r.nerve);
    r.cech = std::move(data.cech);
    r.augmentation = std::move(*data.augmentation);
    return r;
}

} // namespace descentlab
