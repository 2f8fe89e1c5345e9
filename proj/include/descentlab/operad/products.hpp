#pragma once

#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "descentlab/complexes/homology.hpp"
#include "descentlab/descent/cosimplicial.hpp"
#include "descentlab/descent/totalization.hpp"
#include "descentlab/operad/cdga.hpp"

namespace descentlab {

/// Block structure of the nerve levels D^p_a = sum over |J| = p+1 of F(J)^a.
class LevelIndex
{
public:
    LevelIndex() = default;
    explicit LevelIndex(const CoverPresheaf<Rational>& F) : F_(&F)
    {
        for (int p = 0; p < F.N(); ++p)
            nodes_.push_back(nodes_of_size(F.N(), p));
    }

    const std::vector<NodeMask>& nodes(int p) const { return nodes_.at(p); }

    int offset(int p, NodeMask J, int a) const
    {
        int off = 0;
        for (NodeMask K : nodes_.at(p)) {
            if (K == J)
                return off;
            off += F_->value(K).dim(a);
        }
        throw ShapeMismatch("node " + node_string(J) + " is not in level " + std::to_string(p));
    }

    /// Node and index inside F(J)^a of the level index r.
    std::pair<NodeMask, int> split(int p, int a, int r) const
    {
        for (NodeMask K : nodes_.at(p)) {
            const int d = F_->value(K).dim(a);
            if (r < d)
                return {K, r};
            r -= d;
        }
        throw ShapeMismatch("level index out of range");
    }

private:
    const CoverPresheaf<Rational>* F_ = nullptr;
    std::vector<std::vector<NodeMask>> nodes_;
};

/// Cech complex of a CDGA presheaf with the cup product
/// (x y)_{[i_0..i_{p+q}]} = (-1)^{a q} x_{[i_0..i_p]} y_{[i_p..i_{p+q}]}, a the internal degree of x.
class CechAlgebra
{
public:
    explicit CechAlgebra(const CDGAPresheaf& A)
        : A_(&A), nerve_(std::make_shared<Cosimplicial<Rational>>(nerve_cosimplicial(A.F))),
          data_(cech_data(*nerve_)), index_(A.F)
    {
    }

    const CDGAPresheaf& algebra() const { return *A_; }
    const Cosimplicial<Rational>& nerve() const { return *nerve_; }
    const CechData<Rational>& data() const { return data_; }
    const Complex<Rational>& complex() const { return data_.cech; }

    struct Component
    {
        int p;
        NodeMask J;
        int a;
        int r;
    };

    Component locate(int n, int idx) const
    {
        for (int p = 0; p <= nerve_->top_level(); ++p) {
            const int a = n - p;
            const int size = nerve_->levels[p].dim(a);
            const int off = data_.layout.offset(n, p);
            if (idx < off + size) {
                auto [J, r] = index_.split(p, a, idx - off);
                return {p, J, a, r};
            }
        }
        throw ShapeMismatch("Cech index out of range");
    }

    int position(int n, int p, NodeMask J, int r) const
    {
        return data_.layout.offset(n, p) + index_.offset(p, J, n - p) + r;
    }

    /// Sum of the units of the single pieces, in degree 0.
    QVec unit() const
    {
        std::map<int, Rational> acc;
        for (NodeMask J : index_.nodes(0))
            for (const auto& [r, v] : A_->units.at(J))
                acc[position(0, 0, J, r)] += v;
        return detail::collect(acc);
    }

    QVec cup(int n, const QVec& x, int m, const QVec& y) const
    {
        const auto& F = A_->F;
        std::map<int, Rational> acc;
        for (const auto& [ix, vx] : x) {
            const auto cx = locate(n, ix);
            const int hi_x = 31 - std::countl_zero(static_cast<std::uint32_t>(cx.J));
            for (const auto& [iy, vy] : y) {
                const auto cy = locate(m, iy);
                if (std::countr_zero(static_cast<std::uint32_t>(cy.J)) != hi_x)
                    continue;
                const NodeMask K = cx.J | cy.J;
                const int pq = cx.p + cy.p;
                const QVec rx = F.restriction(cx.J, K).at(cx.a).column(cx.r);
                const QVec ry = F.restriction(cy.J, K).at(cy.a).column(cy.r);
                const Rational s = vx * vy * Rational(detail::sign_pow(cx.a * cy.p));
                for (const auto& [k, c] : A_->multiply(K, cx.a, rx, cy.a, ry))
                    acc[position(n + m, pq, K, k)] += s * c;
            }
        }
        return detail::collect(acc);
    }

private:
    const CDGAPresheaf* A_;
    std::shared_ptr<Cosimplicial<Rational>> nerve_;
    CechData<Rational> data_;
    LevelIndex index_;
};

/// Element of prod_p D^p (x) Omega(Delta^p) as forms keyed by (p, internal degree a, level index r).
struct TWFamily
{
    std::map<std::tuple<int, int, int>, PolyForm> parts;

    void add(int p, int a, int r, const PolyForm& w)
    {
        if (w.is_zero())
            return;
        auto [it, inserted] = parts.try_emplace({p, a, r}, w);
        if (!inserted) {
            it->second += w;
            if (it->second.is_zero())
                parts.erase(it);
        }
    }

    TWFamily scaled(const Rational& s) const
    {
        TWFamily out;
        for (const auto& [k, w] : parts)
            out.add(std::get<0>(k), std::get<1>(k), std::get<2>(k), w.scaled(s));
        return out;
    }

    friend bool operator==(const TWFamily&, const TWFamily&) = default;
};

/// Levelwise product (a (x) w)(b (x) h) = (-1)^{|w||b|} ab (x) (w ^ h) on the polynomial-form
/// totalization of the nerve of a CDGA presheaf. Products of cutoff-P elements land at cutoff 2P.
class TWAlgebra
{
public:
    TWAlgebra(const CDGAPresheaf& A, int P)
        : A_(&A), nerve_(nerve_cosimplicial(A.F)), index_(A.F), source_(tw(nerve_, P)), target_(tw(nerve_, 2 * P))
    {
    }

    const CDGAPresheaf& algebra() const { return *A_; }
    const Cosimplicial<Rational>& nerve() const { return nerve_; }
    const Totalization& source() const { return source_; }
    const Totalization& target() const { return target_; }

    TWFamily family(const Totalization& T, int n, const QVec& coords) const
    {
        std::map<int, Rational> amb;
        for (const auto& [j, c] : coords)
            detail::accumulate(amb, c, T.ambient(n, j));
        TWFamily out;
        const auto& B = bases(T.model().P);
        for (const auto& [i, v] : amb) {
            if (v.is_zero())
                continue;
            auto pos = T.locate(n, i);
            out.add(pos.p, pos.a, pos.r, PolyForm::monomial(pos.p, B[pos.p].mono[n - pos.a][pos.s], v));
        }
        return out;
    }

    /// Ambient vector of a family in total degree n; throws CutoffTooSmall past the weight cutoff.
    QVec ambient(const Totalization& T, int n, const TWFamily& f) const
    {
        const auto& B = bases(T.model().P);
        std::map<int, Rational> acc;
        for (const auto& [key, w] : f.parts) {
            auto [p, a, r] = key;
            const int k = n - a;
            const int base = T.offset(n, p, a) + r * T.model_dim(p, k);
            for (const auto& [s, c] : B[p].coords(w, k))
                acc[base + s] += c;
        }
        return detail::collect(acc);
    }

    QVec coordinates(const Totalization& T, int n, const TWFamily& f) const { return T.coords(n, ambient(T, n, f)); }

    bool in_equalizer(const Totalization& T, int n, const TWFamily& f) const
    {
        return T.contains(nerve_, n, ambient(T, n, f));
    }

    TWFamily multiply(int n, const TWFamily& x, int m, const TWFamily& y) const
    {
        TWFamily out;
        for (const auto& [kx, w] : x.parts) {
            auto [p, a, r] = kx;
            auto [J, i] = index_.split(p, a, r);
            for (auto it = y.parts.lower_bound({p, std::numeric_limits<int>::min(), 0});
                 it != y.parts.end() && std::get<0>(it->first) == p; ++it) {
                auto [q, b, s] = it->first;
                auto [K, j] = index_.split(p, b, s);
                if (K != J)
                    continue;
                const QVec ab = A_->mul(J, a, i, b, j);
                if (ab.empty())
                    continue;
                PolyForm wh = form_wedge(w, it->second);
                if (((n - a) * b) % 2)
                    wh = wh.scaled(Rational(-1));
                const int off = index_.offset(p, J, a + b);
                for (const auto& [k, c] : ab)
                    out.add(p, a + b, off + k, wh.scaled(c));
            }
        }
        (void)m;
        return out;
    }

    /// Product of source elements, in target coordinates.
    QVec product(int n, const QVec& x, int m, const QVec& y) const
    {
        return coordinates(target_, n + m, multiply(n, family(source_, n, x), m, family(source_, m, y)));
    }

    /// Units of every node tensored with the constant form 1.
    TWFamily unit() const
    {
        TWFamily out;
        for (int p = 0; p <= nerve_.top_level(); ++p)
            for (NodeMask J : index_.nodes(p))
                for (const auto& [r, v] : A_->units.at(J))
                    out.add(p, 0, index_.offset(p, J, 0) + r, PolyForm::constant(p, v));
        return out;
    }

private:
    const std::vector<FormBasis>& bases(int P) const
    {
        auto it = bases_.find(P);
        if (it == bases_.end()) {
            std::vector<FormBasis> v;
            for (int p = 0; p <= nerve_.top_level(); ++p)
                v.emplace_back(p, P);
            it = bases_.emplace(P, std::move(v)).first;
        }
        return it->second;
    }

    const CDGAPresheaf* A_;
    Cosimplicial<Rational> nerve_;
    LevelIndex index_;
    Totalization source_, target_;
    mutable std::map<int, std::vector<FormBasis>> bases_;
};

struct ProductAgreementReport
{
    std::string presheaf;
    int P = 0;
    int pairs = 0;
    std::vector<int> betti;
    int lo = 0;
    std::optional<std::string> witness;

    bool holds() const { return !witness.has_value(); }

    nlohmann::ordered_json to_json() const
    {
        nlohmann::ordered_json j;
        j["presheaf"] = presheaf;
        j["weight_cutoff"] = P;
        j["holds"] = holds();
        j["pairs_checked"] = pairs;
        nlohmann::ordered_json b = nlohmann::ordered_json::object();
        for (size_t i = 0; i < betti.size(); ++i)
            b[std::to_string(lo + static_cast<int>(i))] = betti[i];
        j["tw_betti"] = b;
        j["witness"] = witness ? nlohmann::ordered_json(*witness) : nlohmann::ordered_json(nullptr);
        return j;
    }
};

/// Pushes every pair of homology classes of TW through integration and the top-face
/// evaluation and compares the TW product with the Cech cup product in Cech homology.
inline ProductAgreementReport product_agreement(const CDGAPresheaf& A, int P)
{
    TWAlgebra T(A, P);
    CechAlgebra C(A);
    const Totalization Tot = tot(T.nerve());
    const auto to_cech = tot_cech_iso(Tot, C.data());
    const auto phi = compose(to_cech, tw_to_tot(T.source(), Tot));
    const auto phi2 = compose(to_cech, tw_to_tot(T.target(), Tot));

    ProductAgreementReport rep;
    rep.presheaf = A.name;
    rep.P = P;
    const auto& S = T.source().complex();
    rep.lo = S.lo();
    std::map<int, RationalHomologyDegree> hs, hc;
    for (int n = S.lo(); n <= S.hi(); ++n) {
        hs.emplace(n, rational_homology_degree(S, n));
        rep.betti.push_back(hs.at(n).betti());
    }
    const auto& CC = C.complex();
    for (int n = CC.lo(); n <= CC.hi(); ++n)
        hc.emplace(n, rational_homology_degree(CC, n));
    for (const auto& [n, Hn] : hs)
        for (const auto& [m, Hm] : hs)
            for (int i = 0; i < Hn.betti(); ++i)
                for (int j = 0; j < Hm.betti(); ++j) {
                    ++rep.pairs;
                    const QVec z = Hn.representative(i), w = Hm.representative(j);
                    const QVec lhs = phi2.at(n + m).apply(T.product(n, z, m, w));
                    const QVec rhs = C.cup(n, phi.at(n).apply(z), m, phi.at(m).apply(w));
                    const QVec diff = vec_add(lhs, rhs, Rational(-1));
                    auto it = hc.find(n + m);
                    const bool same = diff.empty() || (it != hc.end() && it->second.is_boundary(diff));
                    if (!same && !rep.witness)
                        rep.witness = "classes " + std::to_string(i) + " (degree " + std::to_string(n) + ") and " +
                                      std::to_string(j) + " (degree " + std::to_string(m) +
                                      "): TW product and Cech cup differ in Cech homology";
                }
    return rep;
}

} // namespace descentlab
