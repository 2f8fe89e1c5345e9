#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "descentlab/complexes/complex.hpp"
#include "descentlab/linalg/sparse.hpp"
#include "descentlab/simplex/ncochain.hpp"
#include "descentlab/simplex/polyform.hpp"

namespace descentlab {

/// Monomial bases of the weight-truncated forms on the p-simplex, all form degrees.
struct FormBasis
{
    int p = 0;
    int P = 0;
    std::vector<std::vector<FormMonomial>> mono; // by form degree
    std::vector<std::map<FormMonomial, int>> index;

    FormBasis(int p_, int P_) : p(p_), P(P_)
    {
        for (int k = 0; k <= p; ++k) {
            mono.push_back(form_basis(p, k, P));
            std::map<FormMonomial, int> m;
            for (size_t i = 0; i < mono.back().size(); ++i)
                m.emplace(mono.back()[i], static_cast<int>(i));
            index.push_back(std::move(m));
        }
    }

    int dim(int k) const { return (k < 0 || k > p) ? 0 : static_cast<int>(mono[k].size()); }

    /// Coordinates of a homogeneous form of degree k; throws CutoffTooSmall past the cutoff.
    SparseVec<Rational> coords(const PolyForm& w, int k) const
    {
        SparseVec<Rational> out;
        for (const auto& [m, c] : w.terms()) {
            if (m.form_degree() != k)
                throw ShapeMismatch("form is not homogeneous of degree " + std::to_string(k));
            auto it = index[k].find(m);
            if (it == index[k].end())
                throw CutoffTooSmall("form of weight " + std::to_string(m.weight()) + " exceeds cutoff " + std::to_string(P));
            out.emplace_back(it->second, c);
        }
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        return out;
    }
};

/// NC^*(Delta^p) as a complex over Q, faces ordered lexicographically.
inline Complex<Rational> nc_complex(int p)
{
    NCBasis B(p);
    std::vector<int> dims;
    for (int k = 0; k <= p; ++k)
        dims.push_back(B.dim(k));
    Complex<Rational> c(RationalField{}, 0, dims);
    for (int k = 0; k < p; ++k) {
        std::vector<Triplet<Rational>> t;
        for (int j = 0; j < B.dim(k); ++j) {
            auto dx = nc_differential(NCochain::delta(p, B.faces[k][j]));
            for (const auto& [f, v] : dx.values())
                t.push_back({B.index[k + 1].at(f), j, v});
        }
        c.set_d(k, SparseMatrix<Rational>::from_triplets(RationalField{}, B.dim(k + 1), B.dim(k), t));
    }
    return c;
}

/// Omega^{<=P}(Delta^p) as a complex over Q.
inline Complex<Rational> form_complex(int p, int P)
{
    FormBasis B(p, P);
    std::vector<int> dims;
    for (int k = 0; k <= p; ++k)
        dims.push_back(B.dim(k));
    Complex<Rational> c(RationalField{}, 0, dims);
    for (int k = 0; k < p; ++k) {
        std::vector<SparseVec<Rational>> cols;
        for (const auto& m : B.mono[k])
            cols.push_back(B.coords(form_differential(PolyForm::monomial(p, m)), k + 1));
        c.set_d(k, SparseMatrix<Rational>::from_columns(RationalField{}, B.dim(k + 1), cols));
    }
    return c;
}

/// A semi-cosimplicial model M(Delta^0..Delta^pmax): per-simplex complexes, coface pullbacks
/// and the degree-0 unit.
struct SimplexModel
{
    enum class Kind { cochains, forms };
    Kind kind = Kind::cochains;
    int pmax = 0;
    int P = 0;                                            // weight cutoff for forms
    std::vector<Complex<Rational>> cx;                    // cx[p]
    std::vector<std::vector<std::vector<SparseMatrix<Rational>>>> pull; // pull[p][i][k] : M_{p+1}^k -> M_p^k
    std::vector<SparseVec<Rational>> unit;                // unit[p] in M_p^0

    int dim(int p, int k) const { return cx[p].dim(k); }
};

namespace detail {

inline SparseVec<Rational> nc_coords(const NCBasis& B, const NCochain& x, int k)
{
    SparseVec<Rational> out;
    for (const auto& [f, v] : x.values()) {
        if (face_dim(f) != k)
            throw ShapeMismatch("cochain is not homogeneous of degree " + std::to_string(k));
        out.emplace_back(B.index[k].at(f), v);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

} // namespace detail

inline SimplexModel nc_model(int pmax)
{
    SimplexModel M;
    M.kind = SimplexModel::Kind::cochains;
    M.pmax = pmax;
    std::vector<NCBasis> B;
    for (int p = 0; p <= pmax + 1; ++p)
        B.emplace_back(p);
    for (int p = 0; p <= pmax; ++p) {
        M.cx.push_back(nc_complex(p));
        M.unit.push_back(detail::nc_coords(B[p], NCochain::unit(p), 0));
    }
    for (int p = 0; p < pmax; ++p) {
        std::vector<std::vector<SparseMatrix<Rational>>> per_i;
        for (int i = 0; i <= p + 1; ++i) {
            auto d = InjMap::coface(p, i);
            std::vector<SparseMatrix<Rational>> per_k;
            for (int k = 0; k <= p + 1; ++k) {
                std::vector<SparseVec<Rational>> cols;
                for (FaceMask f : B[p + 1].faces[k])
                    cols.push_back(k <= p ? detail::nc_coords(B[p], nc_coface(d, NCochain::delta(p + 1, f)), k)
                                          : SparseVec<Rational>{});
                per_k.push_back(SparseMatrix<Rational>::from_columns(RationalField{}, B[p].dim(k), cols));
            }
            per_i.push_back(std::move(per_k));
        }
        M.pull.push_back(std::move(per_i));
    }
    return M;
}

inline SimplexModel form_model(int pmax, int P)
{
    if (P < 0)
        throw InputError("weight cutoff must be nonnegative");
    SimplexModel M;
    M.kind = SimplexModel::Kind::forms;
    M.pmax = pmax;
    M.P = P;
    std::vector<FormBasis> B;
    for (int p = 0; p <= pmax; ++p) {
        B.emplace_back(p, P);
        M.cx.push_back(form_complex(p, P));
        M.unit.push_back(B[p].coords(PolyForm::constant(p, Rational(1)), 0));
    }
    for (int p = 0; p < pmax; ++p) {
        std::vector<std::vector<SparseMatrix<Rational>>> per_i;
        for (int i = 0; i <= p + 1; ++i) {
            auto d = InjMap::coface(p, i);
            std::vector<SparseMatrix<Rational>> per_k;
            for (int k = 0; k <= p + 1; ++k) {
                std::vector<SparseVec<Rational>> cols;
                for (const auto& m : B[p + 1].mono[k])
                    cols.push_back(k <= p ? B[p].coords(form_pullback(d, PolyForm::monomial(p + 1, m)), k)
                                          : SparseVec<Rational>{});
                per_k.push_back(SparseMatrix<Rational>::from_columns(RationalField{}, B[p].dim(k), cols));
            }
            per_i.push_back(std::move(per_k));
        }
        M.pull.push_back(std::move(per_i));
    }
    return M;
}

/// Integration Omega^k(Delta^p) -> NC^k(Delta^p) in the bases of the two models, [p][k].
inline std::vector<std::vector<SparseMatrix<Rational>>> integration_matrices(int pmax, int P)
{
    std::vector<std::vector<SparseMatrix<Rational>>> out;
    for (int p = 0; p <= pmax; ++p) {
        FormBasis F(p, P);
        NCBasis N(p);
        std::vector<SparseMatrix<Rational>> per_k;
        for (int k = 0; k <= p; ++k) {
            std::vector<SparseVec<Rational>> cols;
            for (const auto& m : F.mono[k])
                cols.push_back(detail::nc_coords(N, integration_cochain(PolyForm::monomial(p, m)), k));
            per_k.push_back(SparseMatrix<Rational>::from_columns(RationalField{}, N.dim(k), cols));
        }
        out.push_back(std::move(per_k));
    }
    return out;
}

/// Whitney forms NC^k(Delta^p) -> Omega^k(Delta^p), [p][k]; CutoffTooSmall when P < p+1 is needed.
inline std::vector<std::vector<SparseMatrix<Rational>>> whitney_matrices(int pmax, int P)
{
    std::vector<std::vector<SparseMatrix<Rational>>> out;
    for (int p = 0; p <= pmax; ++p) {
        FormBasis F(p, P);
        NCBasis N(p);
        std::vector<SparseMatrix<Rational>> per_k;
        for (int k = 0; k <= p; ++k) {
            std::vector<SparseVec<Rational>> cols;
            for (FaceMask f : N.faces[k])
                cols.push_back(F.coords(whitney_form(p, f), k));
            per_k.push_back(SparseMatrix<Rational>::from_columns(RationalField{}, F.dim(k), cols));
        }
        out.push_back(std::move(per_k));
    }
    return out;
}

} // namespace descentlab
