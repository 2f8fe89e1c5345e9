#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "descentlab/complexes/constructions.hpp"
#include "descentlab/complexes/homology.hpp"
#include "descentlab/descent/cosimplicial.hpp"
#include "descentlab/descent/simplicial.hpp"

namespace descentlab {

/// Lifts a node of the sub-presheaf on `members` back to F, optionally adding member 1.
inline NodeMask lift_node(NodeMask J, const std::vector<int>& members, NodeMask base)
{
    NodeMask out = base;
    for (size_t k = 0; k < members.size(); ++k)
        if (J & (NodeMask(1) << k))
            out |= NodeMask(1) << members[k];
    return out;
}

/// Offset of the block F(J)^{n-p} inside degree n of the Cech complex, |J| = p+1.
template <class S>
int cech_block_offset(const CoverPresheaf<S>& F, const Cosimplicial<S>& nerve, int n, NodeMask J)
{
    const int p = std::popcount(J) - 1;
    int off = 0;
    for (int q = 0; q < p; ++q)
        off += nerve.levels[q].dim(n - q);
    for (NodeMask K : nerve.nodes[p]) {
        if (K == J)
            return off;
        off += F.value(K).dim(n - p);
    }
    throw ShapeMismatch("node " + node_string(J) + " not in the nerve");
}

struct DescentReport
{
    bool holds = false;
    std::optional<int> witness;
    HomologyReport top;
    HomologyReport cech;
    QuasiIsoCertificate certificate;

    nlohmann::ordered_json to_json() const
    {
        nlohmann::ordered_json j;
        j["holds"] = holds;
        j["witness_degree"] = witness ? nlohmann::ordered_json(*witness) : nlohmann::ordered_json(nullptr);
        j["top_homology"] = top.to_json();
        j["cech_homology"] = cech.to_json();
        j["certificate"] = certificate.to_json();
        return j;
    }
};

/// Whether the augmentation F(top) -> cech(F) is a quasi-isomorphism.
template <class S>
DescentReport verify_descent(const CoverPresheaf<S>& F)
{
    if constexpr (!scalar_traits<S>::is_field) {
        throw UnsupportedRing("descent verification needs field coefficients");
    } else {
        check_presheaf(F);
        auto C = cech(F);
        DescentReport r;
        r.certificate = is_quasi_iso(C.augmentation);
        r.holds = r.certificate.holds;
        r.witness = r.certificate.witness;
        r.top = homology(F.top());
        r.cech = homology(C.cech);
        return r;
    }
}

/// The pieces of the inclusion-exclusion identity for a cover K_1..K_N:
/// phi = res_B - aug_A : F(K_1) (+) Cech(K_2..K_N) -> Cech(K_1 n K_2, .., K_1 n K_N),
/// and psi : cocone(phi) -> Cech(K_1..K_N) matching summands.
template <class S>
struct InclusionExclusionData
{
    Complex<S> A;
    CechResult<S> B;
    CechResult<S> G;
    ChainMap<S> res_B;
    ChainMap<S> aug_A;
    ChainMap<S> phi;
    CoconeData<S> cocone;
    CechResult<S> full;
    ChainMap<S> psi;
};

template <class S>
InclusionExclusionData<S> inclusion_exclusion_data(const CoverPresheaf<S>& F)
{
    const int N = F.N();
    if (N < 2)
        throw InputError("inclusion-exclusion needs at least two cover members");
    const auto& ring = F.ring();
    std::vector<int> rest;
    for (int m = 1; m < N; ++m)
        rest.push_back(m);
    auto Fb = sub_presheaf(F, rest);
    auto Fg = sub_presheaf(F, rest, NodeMask(1));

    InclusionExclusionData<S> X;
    X.A = F.value(1);
    X.B = cech(Fb);
    X.G = cech(Fg);
    X.full = cech(F);
    X.aug_A = X.G.augmentation;

    X.res_B = ChainMap<S>(X.B.cech, X.G.cech);
    for (int n = X.B.cech.lo(); n <= X.B.cech.hi(); ++n) {
        TripletBuilder<S> tb;
        for (NodeMask J = 1; J <= Fb.full(); ++J) {
            const int p = std::popcount(J) - 1;
            tb.add_block(cech_block_offset(Fg, X.G.nerve, n, J), cech_block_offset(Fb, X.B.nerve, n, J),
                         F.restriction(lift_node(J, rest, 0), lift_node(J, rest, 1)).at(n - p));
        }
        X.res_B.set(n, std::move(tb).build(ring, X.G.cech.dim(n), X.B.cech.dim(n)));
    }

    auto AB = direct_sum(X.A, X.B.cech);
    X.phi = ChainMap<S>(AB, X.G.cech);
    for (int n = AB.lo(); n <= AB.hi(); ++n) {
        TripletBuilder<S> tb;
        tb.add_block(0, 0, X.aug_A.at(n), -scalar_traits<S>::one(ring));
        tb.add_block(0, X.A.dim(n), X.res_B.at(n));
        X.phi.set(n, std::move(tb).build(ring, X.G.cech.dim(n), AB.dim(n)));
    }
    X.cocone = cocone_data(X.phi);

    const auto& K = X.cocone.cocone;
    X.psi = ChainMap<S>(K, X.full.cech);
    const S one = scalar_traits<S>::one(ring);
    for (int n = K.lo(); n <= K.hi(); ++n) {
        TripletBuilder<S> tb;
        for (int r = 0; r < X.A.dim(n); ++r)
            tb.add(cech_block_offset(F, X.full.nerve, n, 1) + r, r, one);
        const int b0 = X.A.dim(n);
        const int g0 = b0 + X.B.cech.dim(n);
        for (NodeMask J = 1; J <= Fb.full(); ++J) {
            const int p = std::popcount(J) - 1;
            const NodeMask JB = lift_node(J, rest, 0), JG = lift_node(J, rest, 1);
            const int db = F.value(JB).dim(n - p);
            const int ob = cech_block_offset(Fb, X.B.nerve, n, J);
            const int tb_off = cech_block_offset(F, X.full.nerve, n, JB);
            for (int r = 0; r < db; ++r)
                tb.add(tb_off + r, b0 + ob + r, one);
            const int dg = F.value(JG).dim(n - 1 - p);
            const int og = cech_block_offset(Fg, X.G.nerve, n - 1, J);
            const int tg_off = cech_block_offset(F, X.full.nerve, n, JG);
            for (int r = 0; r < dg; ++r)
                tb.add(tg_off + r, g0 + og + r, one);
        }
        X.psi.set(n, std::move(tb).build(ring, X.full.cech.dim(n), K.dim(n)));
    }
    return X;
}

/// Whether every matrix of f has exactly one entry, equal to 1, in each row and column.
template <class S>
bool is_permutation_map(const ChainMap<S>& f)
{
    const auto& C = f.source();
    const auto& D = f.target();
    int lo = std::min(C.lo(), D.lo()), hi = std::max(C.hi(), D.hi());
    for (int n = lo; n <= hi; ++n) {
        if (C.dim(n) != D.dim(n))
            return false;
        auto m = f.at(n);
        std::vector<int> col_hits(m.cols(), 0);
        for (int i = 0; i < m.rows(); ++i) {
            if (m.row(i).size() != 1 || !(m.row(i)[0].second == scalar_traits<S>::one(m.ring())))
                return false;
            ++col_hits[m.row(i)[0].first];
        }
        for (int h : col_hits)
            if (h != 1)
                return false;
    }
    return true;
}

struct IsoCertificate
{
    bool holds = false;
    bool chain_map = false;
    bool bijective = false;
    std::optional<int> failing_degree;
    std::vector<int> dims;
    int lo = 0;

    nlohmann::ordered_json to_json() const
    {
        nlohmann::ordered_json j;
        j["isomorphism"] = holds;
        j["chain_map"] = chain_map;
        j["bijective"] = bijective;
        j["failing_degree"] = failing_degree ? nlohmann::ordered_json(*failing_degree) : nlohmann::ordered_json(nullptr);
        nlohmann::ordered_json d = nlohmann::ordered_json::object();
        for (size_t k = 0; k < dims.size(); ++k)
            d[std::to_string(lo + static_cast<int>(k))] = dims[k];
        j["dims"] = d;
        return j;
    }
};

/// Verifies the cocone of phi is isomorphic to the Cech complex via the summand-matching map.
template <class S>
IsoCertificate inclusion_exclusion(const CoverPresheaf<S>& F)
{
    if (F.N() < 3)
        throw InputError("inclusion-exclusion is stated for covers with more than two members");
    check_presheaf(F);
    auto X = inclusion_exclusion_data(F);
    IsoCertificate c;
    validate(X.cocone.cocone);
    c.failing_degree = chain_map_defect(X.psi);
    c.chain_map = !c.failing_degree;
    c.bijective = is_permutation_map(X.psi);
    c.holds = c.chain_map && c.bijective;
    c.lo = X.full.cech.lo();
    for (int n = X.full.cech.lo(); n <= X.full.cech.hi(); ++n)
        c.dims.push_back(X.full.cech.dim(n));
    return c;
}

/// One stage of reproving N-fold descent from two-fold descent:
/// X = K_1 u K' with K' = K_2 u .. u K_N.
struct InductionReport
{
    std::string label;
    int N = 0;
    bool holds = false;
    bool direct_holds = false;   // verify_descent on the N-fold cover, for comparison
    bool two_fold = false;       // descent for (K_1, K')
    bool square_commutes = false;
    bool psi_chain_map = false;
    bool psi_quasi_iso = false;  // cross-check of the five-lemma conclusion
    bool identity_iso = false;   // inclusion-exclusion isomorphism
    bool augmentation_matches = false;
    std::vector<InductionReport> children;
    ChainMap<Rational> augmentation; // F(X) -> Cech, used by the parent stage

    nlohmann::ordered_json to_json() const
    {
        nlohmann::ordered_json j;
        j["label"] = label;
        j["N"] = N;
        j["holds"] = holds;
        j["direct_descent"] = direct_holds;
        if (N > 2) {
            j["two_fold_descent"] = two_fold;
            j["square_commutes"] = square_commutes;
            j["cocone_map_chain_map"] = psi_chain_map;
            j["cocone_map_quasi_iso"] = psi_quasi_iso;
            j["inclusion_exclusion_iso"] = identity_iso;
            j["augmentation_matches"] = augmentation_matches;
            nlohmann::ordered_json ch = nlohmann::ordered_json::array();
            for (const auto& c : children)
                ch.push_back(c.to_json());
            j["stages"] = ch;
        }
        return j;
    }
};

/// Descent for a cover of X by subcomplexes, derived from two-fold descent by induction on N.
/// The base case N <= 2 is a direct verification.
inline InductionReport descent_by_induction(const Subcomplex& X, const std::vector<Subcomplex>& cover,
                                            const std::string& label = "X")
{
    const RationalField Q;
    const int N = static_cast<int>(cover.size());
    InductionReport R;
    R.label = label;
    R.N = N;
    auto F = cochain_presheaf(X, cover);
    auto direct = verify_descent(F);
    R.direct_holds = direct.holds;
    auto C = cech(F);
    R.augmentation = C.augmentation;
    if (N <= 2) {
        R.holds = direct.holds;
        return R;
    }

    Subcomplex Kp;
    for (int m = 1; m < N; ++m)
        Kp = unite(Kp, cover[m]);
    const Subcomplex& K1 = cover[0];
    const Subcomplex K1p = intersect(K1, Kp);
    std::vector<Subcomplex> rest(cover.begin() + 1, cover.end()), inter;
    for (int m = 1; m < N; ++m)
        inter.push_back(intersect(K1, cover[m]));

    auto F2 = cochain_presheaf(X, {K1, Kp});
    R.two_fold = verify_descent(F2).holds;
    R.children.push_back(descent_by_induction(Kp, rest, label + "'"));
    R.children.push_back(descent_by_induction(K1p, inter, label + "1n'"));
    const auto& augB = R.children[0].augmentation;
    const auto& augG = R.children[1].augmentation;

    auto top2 = inclusion_exclusion_data(F2);
    auto full = inclusion_exclusion_data(F);
    const auto& phi_top = top2.phi;
    const auto& phi = full.phi;

    // (id, aug_B) : F(K_1) (+) F(K') -> F(K_1) (+) Cech(K_2..K_N)
    ChainMap<Rational> left(phi_top.source(), phi.source());
    for (int n = phi_top.source().lo(); n <= phi_top.source().hi(); ++n) {
        TripletBuilder<Rational> tb;
        const int a = full.A.dim(n);
        tb.add_block(0, 0, SparseMatrix<Rational>::identity(Q, a));
        tb.add_block(a, a, augB.at(n));
        left.set(n, std::move(tb).build(Q, phi.source().dim(n), phi_top.source().dim(n)));
    }
    R.square_commutes = maps_equal(compose(phi, left), compose(augG, phi_top));

    const auto& K0 = top2.cocone.cocone;
    const auto& K = full.cocone.cocone;
    ChainMap<Rational> psi(K0, K);
    for (int n = K0.lo(); n <= K0.hi(); ++n) {
        TripletBuilder<Rational> tb;
        tb.add_block(0, 0, left.at(n));
        tb.add_block(phi.source().dim(n), phi_top.source().dim(n), augG.at(n - 1));
        psi.set(n, std::move(tb).build(Q, K.dim(n), K0.dim(n)));
    }
    R.psi_chain_map = is_chain_map(psi);
    R.psi_quasi_iso = R.psi_chain_map && is_quasi_iso(psi).holds;
    R.identity_iso = is_chain_map(full.psi) && is_permutation_map(full.psi);

    // F(X) -> cocone(phi_top), x |-> (res x, res x, 0); must reproduce the N-fold augmentation
    ChainMap<Rational> aug_top(F.top(), K0);
    for (int n = F.top().lo(); n <= F.top().hi(); ++n) {
        TripletBuilder<Rational> tb;
        tb.add_block(0, 0, F2.restriction(0, 1).at(n));
        tb.add_block(F2.value(1).dim(n), 0, F2.restriction(0, 2).at(n));
        aug_top.set(n, std::move(tb).build(Q, K0.dim(n), F.top().dim(n)));
    }
    const bool aug_top_matches = maps_equal(compose(top2.psi, aug_top), top2.full.augmentation);
    R.augmentation_matches = aug_top_matches && maps_equal(compose(full.psi, compose(psi, aug_top)), C.augmentation);

    R.holds = R.two_fold && R.children[0].holds && R.children[1].holds && R.square_commutes && R.psi_chain_map &&
              R.identity_iso && R.augmentation_matches;
    return R;
}

} // namespace descentlab
