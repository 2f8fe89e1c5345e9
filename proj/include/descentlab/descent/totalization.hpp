#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "descentlab/complexes/homology.hpp"
#include "descentlab/descent/cosimplicial.hpp"
#include "descentlab/linalg/echelon.hpp"
#include "descentlab/parallel.hpp"
#include "descentlab/simplex/models.hpp"

namespace descentlab {

/// Equalizer of prod_p D^p (x) M(Delta^p) over the generating cofaces, realized as the kernel
/// of (id (x) delta_i^*) x_{p+1} - (d_i (x) id) x_p in every total degree.
/// Ambient degree-n blocks are (p, a) with a the internal degree and k = n - a the model degree,
/// ordered by p then a; inside a block the index is r * dim M_p^k + s.
class Totalization
{
public:
    Totalization() = default;

    Totalization(const Cosimplicial<Rational>& D, std::shared_ptr<const SimplexModel> M)
        : model_(std::move(M)), levels_(D.levels)
    {
        L_ = D.top_level();
        if (L_ > model_->pmax)
            throw ShapeMismatch("simplex model too small for the cosimplicial complex");
        bool any = false;
        for (int p = 0; p <= L_; ++p) {
            const auto& C = levels_[p];
            if (C.empty_support())
                continue;
            lo_ = any ? std::min(lo_, C.lo()) : C.lo();
            hi_ = any ? std::max(hi_, C.hi() + p) : C.hi() + p;
            any = true;
        }
        if (!any) {
            lo_ = 0;
            hi_ = -1;
        }
        const int width = hi_ - lo_ + 1;
        kernels_.resize(std::max(width + 1, 0));
        parallel_for(width + 1, [&](int idx) { kernels_[idx] = kernel(constraints(D, lo_ + idx)); });

        std::vector<int> dims;
        for (int n = lo_; n <= hi_; ++n)
            dims.push_back(kernels_[n - lo_].dim());
        complex_ = Complex<Rational>(RationalField{}, lo_, dims);
        std::vector<SparseMatrix<Rational>> diffs(std::max(width, 0));
        parallel_for(width, [&](int idx) {
            const int n = lo_ + idx;
            auto A = ambient_differential(n);
            std::vector<QVec> cols;
            for (const auto& v : kernels_[idx].basis)
                cols.push_back(coords(n + 1, A.apply(v)));
            diffs[idx] = SparseMatrix<Rational>::from_columns(RationalField{}, dim(n + 1), cols);
        });
        for (int n = lo_; n <= hi_; ++n)
            complex_.set_d(n, std::move(diffs[n - lo_]));

        if (D.augmentation) {
            const auto& src = D.augmentation->source();
            ChainMap<Rational> aug(src, complex_);
            std::vector<ChainMap<Rational>> to_level;
            for (int p = 0; p <= L_; ++p)
                to_level.push_back(D.augmentation_to(p));
            for (int a = src.lo(); a <= src.hi(); ++a) {
                std::vector<QVec> cols;
                for (int r = 0; r < src.dim(a); ++r) {
                    TripletBuilder<Rational> tb;
                    for (int p = 0; p <= L_; ++p) {
                        const int md = model_->dim(p, 0);
                        for (const auto& [row, x] : to_level[p].at(a).column(r))
                            for (const auto& [s, u] : model_->unit[p])
                                tb.add(offset(a, p, a) + row * md + s, 0, x * u);
                    }
                    auto col = std::move(tb).build(RationalField{}, ambient_dim(a), 1).column(0);
                    cols.push_back(coords(a, col));
                }
                aug.set(a, SparseMatrix<Rational>::from_columns(RationalField{}, dim(a), cols));
            }
            augmentation_ = std::move(aug);
        }
    }

    const Complex<Rational>& complex() const noexcept { return complex_; }
    const std::optional<ChainMap<Rational>>& augmentation() const noexcept { return augmentation_; }
    const SimplexModel& model() const noexcept { return *model_; }
    int top_level() const noexcept { return L_; }
    int lo() const noexcept { return lo_; }
    int hi() const noexcept { return hi_; }
    const std::vector<Complex<Rational>>& levels() const noexcept { return levels_; }

    int dim(int n) const { return (n < lo_ || n > hi_) ? 0 : kernels_[n - lo_].dim(); }

    int model_dim(int p, int k) const { return (k < 0 || k > p) ? 0 : model_->dim(p, k); }

    int offset(int n, int p, int a) const
    {
        int off = 0;
        for (int q = 0; q <= L_; ++q) {
            const auto& C = levels_[q];
            for (int b = C.lo(); b <= C.hi(); ++b) {
                if (q == p && b == a)
                    return off;
                off += C.dim(b) * model_dim(q, n - b);
            }
        }
        return off;
    }

    int ambient_dim(int n) const { return offset(n, L_ + 1, 0); }

    /// Basis vector j of degree n as an ambient vector.
    const QVec& ambient(int n, int j) const { return kernels_[n - lo_].basis[j]; }

    /// Coordinates of an ambient vector known to lie in the equalizer.
    QVec coords(int n, const QVec& v) const
    {
        if (n < lo_ || n > hi_)
            return {};
        return kernels_[n - lo_].coordinates(v);
    }

    /// Whether an ambient vector satisfies every equalizer constraint (test hook).
    bool contains(const Cosimplicial<Rational>& D, int n, const QVec& v) const
    {
        return constraints(D, n).apply(v).empty();
    }

    /// Levelwise map r (x) s |-> r (x) T[p][k] s into another totalization of the same levels.
    ChainMap<Rational> levelwise_map(const Totalization& target,
                                     const std::vector<std::vector<SparseMatrix<Rational>>>& T) const
    {
        ChainMap<Rational> f(complex_, target.complex_);
        for (int n = lo_; n <= hi_; ++n) {
            std::vector<QVec> cols;
            for (int j = 0; j < dim(n); ++j) {
                TripletBuilder<Rational> tb;
                for (const auto& [i, x] : ambient(n, j)) {
                    auto [p, a, r, s] = locate(n, i);
                    const int k = n - a;
                    const int md = target.model_dim(p, k);
                    for (const auto& [s2, y] : T[p][k].column(s))
                        tb.add(target.offset(n, p, a) + r * md + s2, 0, x * y);
                }
                auto col = std::move(tb).build(RationalField{}, target.ambient_dim(n), 1).column(0);
                cols.push_back(target.coords(n, col));
            }
            f.set(n, SparseMatrix<Rational>::from_columns(RationalField{}, target.dim(n), cols));
        }
        return f;
    }

    struct Position
    {
        int p, a, r, s;
    };

    Position locate(int n, int index) const
    {
        int off = 0;
        for (int q = 0; q <= L_; ++q) {
            const auto& C = levels_[q];
            for (int b = C.lo(); b <= C.hi(); ++b) {
                const int md = model_dim(q, n - b);
                const int size = C.dim(b) * md;
                if (index < off + size)
                    return {q, b, (index - off) / md, (index - off) % md};
                off += size;
            }
        }
        throw ShapeMismatch("ambient index out of range");
    }

private:
    SparseMatrix<Rational> ambient_differential(int n) const
    {
        TripletBuilder<Rational> tb;
        for (int p = 0; p <= L_; ++p) {
            const auto& C = levels_[p];
            for (int a = C.lo(); a <= C.hi(); ++a) {
                const int k = n - a;
                const int md = model_dim(p, k);
                if (md == 0 || C.dim(a) == 0)
                    continue;
                const int src = offset(n, p, a);
                if (C.dim(a + 1) > 0) {
                    const int dst = offset(n + 1, p, a + 1);
                    for (const auto& [i, j, v] : C.d(a).triplets())
                        for (int s = 0; s < md; ++s)
                            tb.add(dst + i * md + s, src + j * md + s, v);
                }
                const int md1 = model_dim(p, k + 1);
                if (md1 > 0) {
                    const int dst = offset(n + 1, p, a);
                    const Rational sign(a % 2 == 0 ? 1 : -1);
                    for (const auto& [s1, s, v] : model_->cx[p].d(k).triplets())
                        for (int r = 0; r < C.dim(a); ++r)
                            tb.add(dst + r * md1 + s1, src + r * md + s, sign * v);
                }
            }
        }
        return std::move(tb).build(RationalField{}, ambient_dim(n + 1), ambient_dim(n));
    }

    SparseMatrix<Rational> constraints(const Cosimplicial<Rational>& D, int n) const
    {
        TripletBuilder<Rational> tb;
        int row = 0;
        for (int p = 0; p < L_; ++p) {
            const auto& C = levels_[p];
            const auto& C1 = levels_[p + 1];
            for (int i = 0; i <= p + 1; ++i) {
                for (int a = std::min(C.lo(), C1.lo()); a <= std::max(C.hi(), C1.hi()); ++a) {
                    const int k = n - a;
                    const int md = model_dim(p, k);
                    if (md == 0 || C1.dim(a) == 0)
                        continue;
                    if (C1.dim(a) > 0) {
                        const int md1 = model_dim(p + 1, k);
                        const int src = offset(n, p + 1, a);
                        for (const auto& [s, s1, v] : model_->pull[p][i][k].triplets())
                            for (int r = 0; r < C1.dim(a); ++r)
                                tb.add(row + r * md + s, src + r * md1 + s1, v);
                    }
                    if (C.dim(a) > 0) {
                        const int src = offset(n, p, a);
                        for (const auto& [r1, r, v] : D.cofaces[p][i].at(a).triplets())
                            for (int s = 0; s < md; ++s)
                                tb.add(row + r1 * md + s, src + r * md + s, -v);
                    }
                    row += C1.dim(a) * md;
                }
            }
        }
        return std::move(tb).build(RationalField{}, row, ambient_dim(n));
    }

    std::shared_ptr<const SimplexModel> model_;
    std::vector<Complex<Rational>> levels_;
    int L_ = 0;
    int lo_ = 0, hi_ = -1;
    std::vector<Kernel> kernels_;
    Complex<Rational> complex_;
    std::optional<ChainMap<Rational>> augmentation_;
};

/// Tot with normalized cochains on the simplices.
inline Totalization tot(const Cosimplicial<Rational>& D)
{
    return Totalization(D, std::make_shared<const SimplexModel>(nc_model(std::max(D.top_level(), 0))));
}

/// Thom-Whitney totalization with forms of weight at most P.
inline Totalization tw(const Cosimplicial<Rational>& D, int P)
{
    const int levels = D.top_level() + 1;
    if (P < levels)
        throw CutoffTooSmall("weight cutoff " + std::to_string(P) + " below the number of levels " +
                             std::to_string(levels) + " misses Whitney forms");
    return Totalization(D, std::make_shared<const SimplexModel>(form_model(std::max(D.top_level(), 0), P)));
}

/// Levelwise integration TW -> Tot.
inline ChainMap<Rational> tw_to_tot(const Totalization& TW, const Totalization& Tot)
{
    return TW.levelwise_map(Tot, integration_matrices(TW.top_level(), TW.model().P));
}

/// Levelwise Whitney forms Tot -> TW, a right inverse of tw_to_tot.
inline ChainMap<Rational> whitney_section(const Totalization& Tot, const Totalization& TW)
{
    return Tot.levelwise_map(TW, whitney_matrices(Tot.top_level(), TW.model().P));
}

/// Tot -> Cech evaluating each x_p on the top face of Delta^p, with sign (-1)^{p a}
/// for internal degree a.
inline ChainMap<Rational> tot_cech_iso(const Totalization& Tot, const CechData<Rational>& C)
{
    ChainMap<Rational> f(Tot.complex(), C.cech);
    for (int n = Tot.lo(); n <= Tot.hi(); ++n) {
        std::vector<QVec> cols;
        for (int j = 0; j < Tot.dim(n); ++j) {
            QVec col;
            for (const auto& [i, x] : Tot.ambient(n, j)) {
                auto [p, a, r, s] = Tot.locate(n, i);
                if (n - a != p)
                    continue;
                col.emplace_back(C.layout.offset(n, p) + r, (p * a) % 2 == 0 ? x : -x);
            }
            std::sort(col.begin(), col.end(), [](const auto& u, const auto& v) { return u.first < v.first; });
            cols.push_back(std::move(col));
        }
        f.set(n, SparseMatrix<Rational>::from_columns(RationalField{}, C.cech.dim(n), cols));
    }
    return f;
}

} // namespace descentlab
