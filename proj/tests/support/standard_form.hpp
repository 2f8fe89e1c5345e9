#pragma once

// Random complexes and chain maps with known homology, built from a
// standard form (isolated generators plus acyclic pairs) and then
// disguised by random basis changes.

#include <vector>

#include "descentlab/complexes/complex.hpp"
#include "support/random.hpp"

namespace testing_support {

struct StandardComplex
{
    int lo = 0;
    std::vector<int> singles; // per degree
    std::vector<int> pairs;   // pairs starting in degree lo + k
    Complex<Rational> std_form;
    Complex<Rational> disguised;
    std::vector<SparseMatrix<Rational>> g, ginv;

    int dim(int k) const { return singles[k] + pairs[k] + (k > 0 ? pairs[k - 1] : 0); }
    int width() const { return static_cast<int>(singles.size()); }
};

/// Standard-form complex; `fixed_singles` (if non-empty) pins the isolated generator counts.
inline StandardComplex random_standard(Rng& rng, int lo, int width, int max_dim, const std::vector<int>& fixed_singles = {})
{
    StandardComplex s;
    s.lo = lo;
    s.singles.assign(width, 0);
    s.pairs.assign(width, 0);
    for (int k = 0; k < width; ++k) {
        int room = max_dim - (k > 0 ? s.pairs[k - 1] : 0);
        s.singles[k] = fixed_singles.empty() ? rng.uniform(0, std::max(0, room)) : fixed_singles[k];
        room -= s.singles[k];
        if (k + 1 < width)
            s.pairs[k] = rng.uniform(0, std::max(0, std::min(room, max_dim / 2)));
    }
    std::vector<int> dims;
    for (int k = 0; k < width; ++k)
        dims.push_back(s.dim(k));
    s.std_form = Complex<Rational>(RationalField{}, lo, dims);
    for (int k = 0; k + 1 < width; ++k) {
        std::vector<Triplet<Rational>> t;
        for (int j = 0; j < s.pairs[k]; ++j)
            t.push_back({s.singles[k + 1] + s.pairs[k + 1] + j, s.singles[k] + j, rng.nonzero_rational()});
        s.std_form.set_d(lo + k, SparseMatrix<Rational>::from_triplets(RationalField{}, dims[k + 1], dims[k], t));
    }
    for (int k = 0; k < width; ++k) {
        s.g.push_back(rng.invertible(dims[k]));
        s.ginv.push_back(Rng::inverse(s.g.back()));
    }
    s.disguised = Complex<Rational>(RationalField{}, lo, dims);
    for (int k = 0; k + 1 < width; ++k)
        s.disguised.set_d(lo + k, s.g[k + 1] * s.std_form.d(lo + k) * s.ginv[k]);
    return s;
}

struct RandomMap
{
    StandardComplex C, D;
    std::vector<SparseMatrix<Rational>> singles_block; // per degree, D.singles x C.singles
    ChainMap<Rational> f;                             // between disguised complexes
};

/// Chain map = block on isolated generators + null-homotopic part d h + h d.
inline RandomMap random_map(Rng& rng, int lo, int width, int max_dim, bool force_iso)
{
    RandomMap r;
    r.C = random_standard(rng, lo, width, max_dim);
    r.D = force_iso ? random_standard(rng, lo, width, max_dim, r.C.singles) : random_standard(rng, lo, width, max_dim);
    const auto& C = r.C.std_form;
    const auto& D = r.D.std_form;
    std::vector<SparseMatrix<Rational>> h; // h^k : C^{lo+k} -> D^{lo+k-1}
    for (int k = 0; k < width; ++k)
        h.push_back(rng.matrix(k > 0 ? D.dim(lo + k - 1) : 0, C.dim(lo + k), 0.3));
    ChainMap<Rational> f(r.C.disguised, r.D.disguised);
    for (int k = 0; k < width; ++k) {
        const int n = lo + k;
        SparseMatrix<Rational> block = force_iso ? rng.invertible(r.C.singles[k]) : rng.matrix(r.D.singles[k], r.C.singles[k], 0.6);
        r.singles_block.push_back(block);
        TripletBuilder<Rational> t;
        t.add_block(0, 0, block);
        auto m = std::move(t).build(RationalField{}, D.dim(n), C.dim(n));
        if (k > 0)
            m = m + D.d(n - 1) * h[k];
        if (k + 1 < width)
            m = m + h[k + 1] * C.d(n);
        f.set(n, r.D.g[k] * m * r.C.ginv[k]);
    }
    r.f = f;
    return r;
}

} // namespace testing_support
