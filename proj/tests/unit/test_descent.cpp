#include <gtest/gtest.h>

#include "descentlab/descent/generators.hpp"
#include "descentlab/descent/totalization.hpp"
#include "descentlab/descent/verify.hpp"
#include "support/oracles.hpp"

using namespace descentlab;

namespace {

const RationalField Q;

Complex<Rational> point() { return Complex<Rational>(Q, 0, {1}); }

std::vector<int> betti_range(const HomologyReport& h, int lo, int hi)
{
    std::vector<int> out;
    for (int n = lo; n <= hi; ++n)
        out.push_back(h.betti(n));
    return out;
}

CoverPresheaf<Rational> corpus_presheaf(int k)
{
    RandomPresheafOptions opt;
    opt.N = 1 + k % 4;
    opt.max_dim = 1 + k % 3;
    opt.width = 1 + (k / 2) % 3;
    opt.lo = (k % 5 == 0) ? -1 : 0;
    return random_presheaf(1000 + k, opt);
}

bool rank_full(const SparseMatrix<Rational>& m)
{
    return m.rows() == m.cols() && rank(m) == m.rows();
}

} // namespace

TEST(Presheaf, RandomPresheavesAreFunctorial)
{
    for (int k = 0; k < 12; ++k)
        EXPECT_NO_THROW(check_presheaf(corpus_presheaf(k))) << k;
    EXPECT_NO_THROW(check_presheaf(disjoint_presheaf()));
    EXPECT_NO_THROW(check_presheaf(constant_presheaf(3, point())));
}

TEST(Presheaf, BrokenSquareIsReported)
{
    auto F = constant_presheaf(2, point());
    auto twice = identity_map(point());
    twice.set(0, SparseMatrix<Rational>::identity(Q, 1).scaled(Rational(2)));
    F.set_restriction(1, 3, twice);
    try {
        check_presheaf(F);
        FAIL() << "expected FunctorialityFailure";
    } catch (const FunctorialityFailure& e) {
        EXPECT_NE(e.witness().find("[1,2]"), std::string::npos);
    }
}

TEST(Nerve, Examples)
{
    auto F1 = constant_presheaf(1, point());
    auto D1 = nerve_cosimplicial(F1);
    ASSERT_EQ(D1.levels.size(), 1u);
    EXPECT_EQ(D1.levels[0], point());
    EXPECT_TRUE(maps_equal(*D1.augmentation, F1.restriction(0, 1)));

    // d_0 on D^0 = F1 (+) F2 restricts from F2, d_1 from F1
    auto F = corpus_presheaf(1);
    ASSERT_EQ(F.N(), 2);
    auto D = nerve_cosimplicial(F);
    const int n = F.value(1).lo();
    auto d0 = D.cofaces[0][0].at(n), d1 = D.cofaces[0][1].at(n);
    const int a = F.value(1).dim(n);
    for (int i = 0; i < d0.rows(); ++i)
        for (int j = 0; j < d0.cols(); ++j) {
            EXPECT_EQ(d0.at(i, j), j < a ? Rational(0) : F.restriction(2, 3).at(n).at(i, j - a));
            EXPECT_EQ(d1.at(i, j), j < a ? F.restriction(1, 3).at(n).at(i, j) : Rational(0));
        }
}

TEST(Nerve, CosimplicialIdentities)
{
    for (int k = 0; k < 12; ++k) {
        auto D = nerve_cosimplicial(corpus_presheaf(k));
        EXPECT_EQ(cosimplicial_defect(D), std::nullopt) << k;
    }
}

TEST(Cech, Examples)
{
    auto F1 = corpus_presheaf(0);
    ASSERT_EQ(F1.N(), 1);
    auto C1 = cech(F1);
    EXPECT_EQ(C1.cech, F1.value(1));
    EXPECT_TRUE(maps_equal(C1.augmentation, F1.restriction(0, 1)));

    auto Cc = cech(constant_presheaf(2, point()));
    auto h = homology(Cc.cech);
    EXPECT_EQ(h.betti(0), 1);
    EXPECT_EQ(h.betti(1), 0);
    EXPECT_EQ(oracle::betti(Cc.cech), (std::vector<int>{1, 0}));

    auto Cd = cech(disjoint_presheaf());
    EXPECT_EQ(homology(Cd.cech).betti(0), 2);
    EXPECT_FALSE(is_quasi_iso(Cd.augmentation).holds);
}

TEST(Cech, SquareZeroAndAugmentation)
{
    for (int k = 0; k < 20; ++k) {
        auto C = cech(corpus_presheaf(k));
        EXPECT_TRUE(is_complex(C.cech)) << k;
        EXPECT_TRUE(is_chain_map(C.augmentation)) << k;
    }
}

TEST(Tot, Examples)
{
    auto F1 = corpus_presheaf(0);
    auto T1 = tot(nerve_cosimplicial(F1));
    EXPECT_EQ(T1.complex(), F1.value(1));

    auto T2 = tot(nerve_cosimplicial(constant_presheaf(2, point())));
    auto h = homology(T2.complex());
    EXPECT_EQ(betti_range(h, 0, 1), (std::vector<int>{1, 0}));

    auto Td = tot(nerve_cosimplicial(disjoint_presheaf()));
    EXPECT_EQ(homology(Td.complex()).betti(0), 2);
}

TEST(Tot, EqualizerBasisAndSquareZero)
{
    for (int k = 0; k < 12; ++k) {
        auto D = nerve_cosimplicial(corpus_presheaf(k));
        auto T = tot(D);
        EXPECT_TRUE(is_complex(T.complex())) << k;
        ASSERT_TRUE(T.augmentation());
        EXPECT_TRUE(is_chain_map(*T.augmentation())) << k;
        for (int n = T.lo(); n <= T.hi(); ++n)
            for (int j = 0; j < T.dim(n); ++j)
                EXPECT_TRUE(T.contains(D, n, T.ambient(n, j)));
    }
}

TEST(TotCech, IsomorphismOnCorpus)
{
    auto F1 = corpus_presheaf(0);
    auto D1 = nerve_cosimplicial(F1);
    auto T1 = tot(D1);
    auto iso1 = tot_cech_iso(T1, cech_data(D1));
    EXPECT_TRUE(maps_equal(iso1, identity_map(F1.value(1))));

    for (int k = 0; k < 16; ++k) {
        auto D = nerve_cosimplicial(corpus_presheaf(k));
        auto T = tot(D);
        auto C = cech_data(D);
        auto iso = tot_cech_iso(T, C);
        EXPECT_TRUE(is_chain_map(iso)) << k;
        for (int n = std::min(T.lo(), C.cech.lo()); n <= std::max(T.hi(), C.cech.hi()); ++n)
            EXPECT_TRUE(rank_full(iso.at(n))) << "k=" << k << " n=" << n;
        EXPECT_TRUE(maps_equal(compose(iso, *T.augmentation()), *C.augmentation)) << k;
    }
}

TEST(TW, Examples)
{
    auto F1 = corpus_presheaf(0);
    auto W1 = tw(nerve_cosimplicial(F1), 1);
    EXPECT_EQ(W1.complex(), F1.value(1));

    auto W2 = tw(nerve_cosimplicial(constant_presheaf(2, point())), 2);
    EXPECT_EQ(betti_range(homology(W2.complex()), 0, 1), (std::vector<int>{1, 0}));

    EXPECT_THROW(tw(nerve_cosimplicial(constant_presheaf(3, point())), 2), CutoffTooSmall);
}

TEST(TW, ComparisonWithTot)
{
    for (int k = 0; k < 8; ++k) {
        auto F = corpus_presheaf(k);
        auto D = nerve_cosimplicial(F);
        auto T = tot(D);
        auto hT = homology(T.complex());
        for (int P = F.N(); P <= F.N() + 2; ++P) {
            auto W = tw(D, P);
            EXPECT_TRUE(is_complex(W.complex()));
            EXPECT_EQ(homology(W.complex()).betti_table(T.lo(), T.hi()), hT.betti_table(T.lo(), T.hi()))
                << "k=" << k << " P=" << P;
            auto I = tw_to_tot(W, T);
            EXPECT_TRUE(is_chain_map(I));
            EXPECT_TRUE(is_quasi_iso(I).holds);
            auto E = whitney_section(T, W);
            EXPECT_TRUE(is_chain_map(E));
            EXPECT_TRUE(maps_equal(compose(I, E), identity_map(T.complex())));
            EXPECT_TRUE(maps_equal(compose(I, *W.augmentation()), *T.augmentation()));
        }
    }
}

TEST(InclusionExclusion, Examples)
{
    auto c3 = inclusion_exclusion(constant_presheaf(3, point()));
    EXPECT_TRUE(c3.holds);
    for (int k = 0; k < 12; ++k) {
        RandomPresheafOptions opt;
        opt.N = 3 + k % 2;
        opt.max_dim = 2;
        opt.width = 2;
        auto c = inclusion_exclusion(random_presheaf(77 + k, opt));
        EXPECT_TRUE(c.chain_map) << k;
        EXPECT_TRUE(c.bijective) << k;
    }
    // one empty intersection
    auto X = closure({{0, 1}, {2, 3}, {1, 2}});
    auto F = cochain_presheaf(X, {closure({{0, 1}}), closure({{2, 3}}), closure({{1, 2}})});
    EXPECT_EQ(F.value(3).total_dim(), 0);
    EXPECT_TRUE(inclusion_exclusion(F).holds);
    EXPECT_THROW(inclusion_exclusion(constant_presheaf(2, point())), InputError);
}

TEST(Descent, TriangleBoundary)
{
    for (auto cc : {triangle_boundary_arcs(), triangle_boundary_edges()}) {
        ASSERT_TRUE(covers(cc));
        auto r = verify_descent(cochain_presheaf(cc.space, cc.cover));
        EXPECT_TRUE(r.holds) << cc.name;
        EXPECT_EQ(betti_range(r.cech, 0, 1), (std::vector<int>{1, 1})) << cc.name;
        EXPECT_EQ(betti_range(r.top, 0, 1), oracle::simplicial_betti({{0, 1}, {1, 2}, {0, 2}}));
    }
}

TEST(Descent, SquareMatchesSimplicialOracle)
{
    auto cc = square_complex();
    ASSERT_TRUE(covers(cc));
    auto r = verify_descent(cochain_presheaf(cc.space, cc.cover));
    EXPECT_TRUE(r.holds);
    auto expected = oracle::simplicial_betti({{0, 1, 2}, {2, 3}, {0, 3}});
    EXPECT_EQ(expected, (std::vector<int>{1, 1, 0}));
    EXPECT_EQ(betti_range(r.cech, 0, 2), expected);
}

TEST(Descent, DisjointFails)
{
    auto r = verify_descent(disjoint_presheaf());
    EXPECT_FALSE(r.holds);
    ASSERT_TRUE(r.witness);
    EXPECT_EQ(*r.witness, 0);
}

TEST(Descent, PermutationInvariant)
{
    std::vector<CoverPresheaf<Rational>> cases = {
        cochain_presheaf(triangle_boundary_edges().space, triangle_boundary_edges().cover),
        cochain_presheaf(square_complex().space, square_complex().cover),
        corpus_presheaf(2), corpus_presheaf(3), corpus_presheaf(7)};
    for (const auto& F : cases) {
        auto base = verify_descent(F);
        std::vector<int> perm(F.N());
        for (int i = 0; i < F.N(); ++i)
            perm[i] = i;
        while (std::next_permutation(perm.begin(), perm.end())) {
            auto r = verify_descent(permute_members(F, perm));
            EXPECT_EQ(r.holds, base.holds);
            EXPECT_EQ(r.cech.betti_table(-2, 5), base.cech.betti_table(-2, 5));
        }
    }
}

TEST(Descent, InductionFromTwoFold)
{
    auto cc = triangle_boundary_edges();
    auto r = descent_by_induction(cc.space, cc.cover);
    EXPECT_TRUE(r.two_fold);
    EXPECT_TRUE(r.square_commutes);
    EXPECT_TRUE(r.psi_chain_map);
    EXPECT_TRUE(r.psi_quasi_iso);
    EXPECT_TRUE(r.identity_iso);
    EXPECT_TRUE(r.augmentation_matches);
    EXPECT_TRUE(r.holds);
    EXPECT_TRUE(r.direct_holds);

    auto sq = square_complex();
    EXPECT_TRUE(descent_by_induction(sq.space, sq.cover).holds);

    auto X = closure({{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    auto r4 = descent_by_induction(X, {closure({{0, 1}}), closure({{1, 2}}), closure({{2, 3}}), closure({{3, 0}})});
    EXPECT_TRUE(r4.holds);
}

TEST(Descent, NovikovCoefficientsRejected)
{
    NovikovRing R(1, Rational(2));
    Complex<NovikovElem> c(R, 0, {1});
    EXPECT_THROW(verify_descent(constant_presheaf(2, c)), UnsupportedRing);
}
