#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "descentlab/operad/cdga.hpp"
#include "descentlab/operad/polyvector.hpp"

namespace descentlab {

/// Cross-chart comparison of the divergence operators along a restriction.
struct DeltaCompatibility
{
    std::string restriction;
    int checked = 0;
    int mismatches = 0;
    std::optional<std::string> witness;

    nlohmann::ordered_json to_json() const
    {
        nlohmann::ordered_json j;
        j["restriction"] = restriction;
        j["checked"] = checked;
        j["mismatches"] = mismatches;
        j["witness"] = witness ? nlohmann::ordered_json(*witness) : nlohmann::ordered_json(nullptr);
        return j;
    }
};

/// Polyvector fields on the projective line glued from U1 = Spec Q[x] and U2 = Spec Q[y] along
/// Q[x, 1/x] with y = 1/x, kept to weights exponent - degree in [-D, D]. The complex degree of a
/// k-vector is k and every differential is zero. The top node holds the global fields
/// 1, d_x, x d_x, x^2 d_x in chart-1 coordinates.
struct P1PolyvectorModel
{
    int D = 0;
    CDGAPresheaf cdga;
    std::vector<PolyvectorRing> rings;                       // by node
    std::vector<std::vector<std::vector<PvMonomial>>> basis; // [node][degree][i]
    std::vector<BVStructure> bv;                             // divergence operator per node

    Polyvector element(NodeMask J, int k, int i) const
    {
        return Polyvector::monomial(rings.at(J), basis.at(J).at(k).at(i));
    }

    /// Coordinates of a k-vector in the window of node J; throws CutoffTooSmall outside.
    QVec coords(NodeMask J, int k, const Polyvector& v) const
    {
        QVec out;
        const auto& B = basis.at(J).at(k);
        for (const auto& [m, c] : v.terms()) {
            if (m.degree() != k)
                throw ShapeMismatch("polyvector is not of degree " + std::to_string(k));
            auto it = std::lower_bound(B.begin(), B.end(), m);
            if (it == B.end() || !(*it == m))
                throw CutoffTooSmall("monomial outside the window at node " + node_string(J));
            out.emplace_back(static_cast<int>(it - B.begin()), c);
        }
        return out;
    }

    /// Restriction along J -> K in terms of polyvectors.
    Polyvector restrict(NodeMask J, NodeMask K, const Polyvector& v) const
    {
        return change_chart(v, rings.at(K), uses_y(J) != uses_y(K));
    }

    /// Presheaf of the k-vectors alone, placed in complex degree 0.
    CoverPresheaf<Rational> degree_part(int k) const
    {
        const auto& F = cdga.F;
        CoverPresheaf<Rational> out(RationalField{}, F.N());
        for (NodeMask J = 0; J <= F.full(); ++J)
            out.set_value(J, Complex<Rational>(RationalField{}, 0, {F.value(J).dim(k)}));
        for (NodeMask J = 0; J <= F.full(); ++J)
            for (int m = 0; m < F.N(); ++m) {
                const NodeMask K = J | (NodeMask(1) << m);
                if (K == J)
                    continue;
                ChainMap<Rational> f(out.value(J), out.value(K));
                f.set(0, F.restriction(J, K).at(k));
                out.set_restriction(J, K, std::move(f));
            }
        return out;
    }

    /// Compares res(Delta_J a) with Delta_K res(a) on the window basis of J.
    DeltaCompatibility delta_compatibility(NodeMask J, NodeMask K) const
    {
        DeltaCompatibility r;
        r.restriction = node_string(J) + "->" + node_string(K);
        for (int k = 0; k < static_cast<int>(basis.at(J).size()); ++k)
            for (size_t i = 0; i < basis[J][k].size(); ++i) {
                const Polyvector a = element(J, k, static_cast<int>(i));
                const Polyvector lhs = restrict(J, K, bv.at(J).delta(a));
                const Polyvector rhs = bv.at(K).delta(restrict(J, K, a));
                ++r.checked;
                if (!(lhs == rhs)) {
                    ++r.mismatches;
                    if (!r.witness)
                        r.witness = "a = " + a.to_string() + ": res(D a) = " + lhs.to_string() +
                                    ", D res(a) = " + rhs.to_string();
                }
            }
        return r;
    }

    static bool uses_y(NodeMask J) { return J == 2; }

    /// x^a xi^e maps to (-1)^e x^{2e-a} xi^e when switching between the x and y charts.
    static Polyvector change_chart(const Polyvector& v, PolyvectorRing target, bool invert)
    {
        Polyvector out(target);
        for (const auto& [m, c] : v.terms()) {
            PvMonomial t = m;
            if (invert) {
                t.exps[0] = 2 * m.degree() - m.exps[0];
                out.add(t, m.degree() % 2 ? -c : c);
            } else {
                out.add(t, c);
            }
        }
        return out;
    }
};

inline P1PolyvectorModel p1_polyvector_presheaf(int D)
{
    if (D < 3)
        throw InputError("the weight window needs D >= 3");
    P1PolyvectorModel M;
    M.D = D;
    // nodes: 0 top, 1 chart x, 2 chart y, 3 overlap
    M.rings = {{1, false}, {1, false}, {1, false}, {1, true}};
    M.basis.resize(4, std::vector<std::vector<PvMonomial>>(2));
    for (int e = 0; e <= 1; ++e) {
        for (int a = 0; a <= D + e; ++a) {
            M.basis[1][e].push_back({{a}, std::uint32_t(e)});
            M.basis[2][e].push_back({{a}, std::uint32_t(e)});
        }
        for (int a = -D + e; a <= D + e; ++a)
            M.basis[3][e].push_back({{a}, std::uint32_t(e)});
    }
    M.basis[0][0] = {{{0}, 0}};
    M.basis[0][1] = {{{0}, 1}, {{1}, 1}, {{2}, 1}};
    for (NodeMask J = 0; J < 4; ++J)
        M.bv.push_back(BVStructure{M.rings[J]});

    auto& A = M.cdga;
    A.name = "p1-polyvector-" + std::to_string(D);
    A.F = CoverPresheaf<Rational>(RationalField{}, 2);
    for (NodeMask J = 0; J < 4; ++J) {
        A.F.set_value(J, Complex<Rational>(RationalField{}, 0,
                                           {static_cast<int>(M.basis[J][0].size()),
                                            static_cast<int>(M.basis[J][1].size())}));
        A.units.push_back(M.coords(J, 0, Polyvector::constant(M.rings[J], Rational(1))));
    }
    for (NodeMask J = 0; J < 4; ++J)
        for (int m = 0; m < 2; ++m) {
            const NodeMask K = J | (NodeMask(1) << m);
            if (K == J)
                continue;
            ChainMap<Rational> f(A.F.value(J), A.F.value(K));
            for (int k = 0; k <= 1; ++k) {
                std::vector<QVec> cols;
                for (size_t i = 0; i < M.basis[J][k].size(); ++i)
                    cols.push_back(M.coords(K, k, M.restrict(J, K, M.element(J, k, static_cast<int>(i)))));
                f.set(k, SparseMatrix<Rational>::from_columns(RationalField{}, A.F.value(K).dim(k), cols));
            }
            A.F.set_restriction(J, K, std::move(f));
        }
    A.mul = [M_basis = M.basis](NodeMask J, int a, int i, int b, int j) -> QVec {
        if (a + b > 1)
            return {};
        const auto& B = M_basis.at(J);
        PvMonomial m{{B[a][i].exps[0] + B[b][j].exps[0]}, B[a][i].xi | B[b][j].xi};
        auto it = std::lower_bound(B[a + b].begin(), B[a + b].end(), m);
        if (it == B[a + b].end() || !(*it == m))
            throw CutoffTooSmall("product leaves the window at node " + node_string(J));
        return QVec{{static_cast<int>(it - B[a + b].begin()), Rational(1)}};
    };
    return M;
}

} // namespace descentlab
