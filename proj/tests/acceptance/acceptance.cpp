// Acceptance suite: one PASS/FAIL line per criterion, each under a wall-clock budget.
// Usage: acceptance [criterion numbers...]

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "descentlab/descentlab.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"
#include "support/standard_form.hpp"

using namespace descentlab;

namespace {

class Outcome
{
public:
    void require(bool ok, const std::string& what)
    {
        ++checks_;
        if (!ok && failures_.size() < 8)
            failures_.push_back(what);
        failed_ = failed_ || !ok;
    }

    void note(std::string text) { notes_.push_back(std::move(text)); }

    bool failed() const { return failed_; }
    int checks() const { return checks_; }
    const std::vector<std::string>& failures() const { return failures_; }
    const std::vector<std::string>& notes() const { return notes_; }

private:
    bool failed_ = false;
    int checks_ = 0;
    std::vector<std::string> failures_;
    std::vector<std::string> notes_;
};

struct Criterion
{
    int id;
    std::string title;
    double limit_seconds;
    std::function<void(Outcome&)> run;
};

std::string str(int k) { return std::to_string(k); }

std::vector<int> betti_range(const HomologyReport& h, int lo, int hi)
{
    std::vector<int> out;
    for (int n = lo; n <= hi; ++n)
        out.push_back(h.betti(n));
    return out;
}

/// Dense-rank Betti numbers over [lo, hi], zero outside the support of c.
std::vector<int> oracle_betti(const Complex<Rational>& c, int lo, int hi)
{
    const auto inside = oracle::betti(c);
    std::vector<int> out;
    for (int n = lo; n <= hi; ++n)
        out.push_back(n < c.lo() || n > c.hi() ? 0 : inside[n - c.lo()]);
    return out;
}

bool bijective(const SparseMatrix<Rational>& m)
{
    return m.rows() == m.cols() && oracle::rank(m) == m.rows();
}

/// Seeded corpus: up to 4 cover members, at most 4 generators per degree, support width at most 4.
CoverPresheaf<Rational> corpus_presheaf(int k)
{
    RandomPresheafOptions opt;
    opt.N = 1 + k % 4;
    opt.max_dim = 1 + (k / 4) % 4;
    opt.width = 1 + (k / 2) % 4;
    opt.lo = (k % 5 == 0) ? -1 : 0;
    return random_presheaf(2000 + k, opt);
}

constexpr int corpus_size = 25;

void tot_cech(Outcome& out)
{
    int total = 0, largest = 0;
    for (int k = 0; k < corpus_size; ++k) {
        const auto F = corpus_presheaf(k);
        const auto D = nerve_cosimplicial(F);
        const auto T = tot(D);
        const auto C = cech_data(D);
        const auto iso = tot_cech_iso(T, C);
        const std::string tag = "presheaf " + str(k);
        out.require(is_chain_map(iso), tag + ": tot_cech_iso is not a chain map");
        for (int n = std::min(T.lo(), C.cech.lo()); n <= std::max(T.hi(), C.cech.hi()); ++n)
            out.require(bijective(iso.at(n)), tag + ": not bijective in degree " + str(n));
        out.require(maps_equal(compose(iso, *T.augmentation()), *C.augmentation),
                    tag + ": augmentations not intertwined");
        const int lo = std::min(T.lo(), C.cech.lo()), hi = std::max(T.hi(), C.cech.hi());
        out.require(oracle_betti(T.complex(), lo, hi) == oracle_betti(C.cech, lo, hi), tag + ": Betti numbers differ");
        total += T.complex().total_dim();
        largest = std::max(largest, T.complex().total_dim());
    }
    out.note("Tot dimension " + str(total) + " in total, largest " + str(largest));
}

void tw_tot(Outcome& out)
{
    for (int k = 0; k < corpus_size; ++k) {
        const auto F = corpus_presheaf(k);
        const auto D = nerve_cosimplicial(F);
        const auto T = tot(D);
        const auto table = homology(T.complex()).betti_table(T.lo(), T.hi());
        const std::string tag = "presheaf " + str(k);
        std::vector<std::vector<int>> tables;
        for (int P : {F.N(), F.N() + 1}) {
            const std::string at = tag + " P=" + str(P);
            const auto W = tw(D, P);
            out.require(is_complex(W.complex()), at + ": TW differential does not square to zero");
            tables.push_back(homology(W.complex()).betti_table(T.lo(), T.hi()));
            const auto I = tw_to_tot(W, T);
            out.require(is_chain_map(I), at + ": integration is not a chain map");
            out.require(is_quasi_iso(I).holds, at + ": integration is not a quasi-isomorphism");
            const auto E = whitney_section(T, W);
            out.require(is_chain_map(E), at + ": Whitney section is not a chain map");
            out.require(maps_equal(compose(I, E), identity_map(T.complex())), at + ": I o E != id");
            out.require(maps_equal(compose(I, *W.augmentation()), *T.augmentation()),
                        at + ": augmentations not intertwined");
        }
        out.require(tables[0] == tables[1], tag + ": Betti tables differ between P=N and P=N+1");
        out.require(tables[0] == table, tag + ": TW Betti table differs from Tot");
    }
}

void descent_fixtures(Outcome& out)
{
    const std::vector<int> circle = oracle::simplicial_betti({{0, 1}, {1, 2}, {0, 2}});
    out.require(circle == std::vector<int>{1, 1}, "oracle: circle Betti numbers");
    for (const auto& cc : {triangle_boundary_arcs(), triangle_boundary_edges()}) {
        out.require(covers(cc), cc.name + ": cover does not cover");
        const auto r = verify_descent(cochain_presheaf(cc.space, cc.cover));
        out.require(r.holds, cc.name + ": descent fails");
        out.require(betti_range(r.cech, 0, 1) == circle, cc.name + ": Cech Betti numbers are not H0 = H1 = 1");
        out.require(betti_range(r.top, 0, 1) == circle, cc.name + ": global Betti numbers differ from the oracle");
        out.require(r.cech.betti(2) == 0 && r.cech.betti(-1) == 0, cc.name + ": stray Cech homology");
    }
    const auto sq = square_complex();
    const auto r = verify_descent(cochain_presheaf(sq.space, sq.cover));
    const auto expected = oracle::simplicial_betti({{0, 1, 2}, {2, 3}, {0, 3}});
    out.require(r.holds, "square: descent fails");
    out.require(betti_range(r.cech, 0, 2) == expected, "square: Cech Betti numbers differ from the oracle");
    const auto d = verify_descent(disjoint_presheaf());
    out.require(!d.holds, "disjoint: descent unexpectedly holds");
    out.require(d.witness && *d.witness == 0, "disjoint: witness degree is not 0");
}

void inclusion_exclusion_engine(Outcome& out)
{
    for (int N : {3, 4})
        for (int k = 0; k < 8; ++k) {
            RandomPresheafOptions opt;
            opt.N = N;
            opt.max_dim = 1 + k % 3;
            opt.width = 1 + k % 3;
            opt.lo = -(k % 2);
            const auto c = inclusion_exclusion(random_presheaf(3000 + 10 * N + k, opt));
            const std::string tag = "N=" + str(N) + " case " + str(k);
            out.require(c.chain_map, tag + ": comparison is not a chain map");
            out.require(c.bijective, tag + ": comparison is not bijective");
        }
    for (const auto& cc : {triangle_boundary_edges(), square_complex()})
        out.require(inclusion_exclusion(cochain_presheaf(cc.space, cc.cover)).holds, cc.name + ": not an isomorphism");
    const auto cc = triangle_boundary_edges();
    const auto r = descent_by_induction(cc.space, cc.cover);
    out.require(r.two_fold, "induction: two-fold descent fails");
    out.require(r.square_commutes, "induction: comparison square does not commute");
    out.require(r.psi_chain_map && r.psi_quasi_iso, "induction: comparison is not a quasi-isomorphism");
    out.require(r.identity_iso, "induction: identity comparison fails");
    out.require(r.augmentation_matches, "induction: augmentations disagree");
    out.require(r.holds && r.direct_holds, "induction: three-fold descent not reproved");
}

void bv_axioms(Outcome& out)
{
    const PolyvectorRing R{2, false};
    const auto basis = pv_monomial_basis(R, 0, 3);
    const auto report = bv_axiom_check(BVStructure{R}, basis);
    out.require(report.basis_size == 40, "basis size " + str(report.basis_size) + " != 40");
    std::set<std::string> names;
    for (const auto& a : report.axioms) {
        names.insert(a.axiom);
        out.require(a.passed(), a.axiom + ": " + a.witness.value_or(""));
    }
    out.require(names.size() >= 4, "fewer axioms than expected were checked");
    int pairs = 0;
    for (const auto& a : basis)
        for (const auto& b : basis) {
            out.require(bv_bracket(a, b) == oracle::schouten(a, b),
                        "bracket differs from Schouten on " + a.to_string() + ", " + b.to_string());
            ++pairs;
        }
    out.note(str(static_cast<int>(report.axioms.size())) + " axioms, " + str(pairs) + " bracket pairs");
    out.require(!bv_axiom_check(corrupted_bv(R), pv_monomial_basis(R, 0, 2)).passed(),
                "a corrupted operator is not detected");
}

void p1_cohomology(Outcome& out)
{
    const std::pair<int, int> expected[] = {{1, 0}, {3, 0}};
    std::vector<std::pair<int, int>> by_cutoff[2];
    for (int D : {4, 5}) {
        const auto M = p1_polyvector_presheaf(D);
        out.require(!cdga_defect(M.cdga).has_value(), "D=" + str(D) + ": not a presheaf of algebras");
        for (int k = 0; k <= 1; ++k) {
            const std::string tag = "D=" + str(D) + " k=" + str(k);
            const auto H = homology(cech(M.degree_part(k)).cech);
            const std::pair<int, int> got{H.betti(0), H.betti(1)};
            out.require(got == oracle::p1_cech_betti(D, k), tag + ": differs from the two-chart oracle");
            out.require(got == expected[k], tag + ": H0=" + str(got.first) + " H1=" + str(got.second));
            out.require(verify_descent(M.degree_part(k)).holds, tag + ": descent fails");
            by_cutoff[k].push_back(got);
        }
    }
    for (int k = 0; k <= 1; ++k)
        out.require(by_cutoff[k][0] == by_cutoff[k][1], "cutoffs 4 and 5 disagree for k=" + str(k));
}

QVec unit_vector(int i) { return QVec{{i, Rational(1)}}; }

void tw_products_exhaustive(Outcome& out, const CDGAPresheaf& A, int P)
{
    TWAlgebra T(A, P);
    const auto& S = T.source();
    std::vector<std::pair<int, TWFamily>> elems;
    for (int n = S.lo(); n <= S.hi(); ++n)
        for (int i = 0; i < S.dim(n); ++i)
            elems.emplace_back(n, T.family(S, n, unit_vector(i)));
    for (const auto& [a, x] : elems)
        for (const auto& [b, y] : elems) {
            const auto xy = T.multiply(a, x, b, y);
            out.require(xy == T.multiply(b, y, a, x).scaled(Rational((a * b) % 2 ? -1 : 1)),
                        A.name + ": TW product not graded-commutative");
            out.require(T.in_equalizer(T.target(), a + b, xy), A.name + ": TW product leaves the equalizer");
            for (const auto& [c, z] : elems)
                out.require(T.multiply(a + b, xy, c, z) == T.multiply(a, x, b + c, T.multiply(b, y, c, z)),
                            A.name + ": TW product not associative");
        }
}

void cech_cup_exhaustive(Outcome& out, const CDGAPresheaf& A)
{
    CechAlgebra C(A);
    const auto& X = C.complex();
    for (int n = X.lo(); n <= X.hi(); ++n)
        for (int m = X.lo(); m <= X.hi(); ++m)
            for (int k = X.lo(); k <= X.hi(); ++k)
                for (int i = 0; i < X.dim(n); ++i)
                    for (int j = 0; j < X.dim(m); ++j)
                        for (int l = 0; l < X.dim(k); ++l) {
                            const QVec x = unit_vector(i), y = unit_vector(j), z = unit_vector(l);
                            out.require(C.cup(n + m, C.cup(n, x, m, y), k, z) == C.cup(n, x, m + k, C.cup(m, y, k, z)),
                                        A.name + ": Cech cup not associative");
                        }
}

void products(Outcome& out)
{
    tw_products_exhaustive(out, constant_field_cdga(2), 2);
    for (std::uint64_t seed = 1; seed <= 2; ++seed)
        tw_products_exhaustive(out, random_cdga_presheaf(seed, 2, 2), 2);

    const auto tri = cochain_cdga(triangle_boundary_edges());
    cech_cup_exhaustive(out, tri);
    cech_cup_exhaustive(out, random_cdga_presheaf(4, 2));

    const auto A = constant_field_cdga(2);
    CechAlgebra C(A);
    const QVec x = unit_vector(C.position(0, 0, 1, 0));
    const QVec y = unit_vector(C.position(1, 1, 3, 0));
    const QVec xy = C.cup(0, x, 1, y), yx = C.cup(1, y, 0, x);
    out.require(C.complex().d(1).apply(y).empty(), "witness cocycle is not closed");
    out.require(xy != yx && xy != vec_scale(yx, Rational(-1)), "no chain-level non-commutativity witness");
    out.note("non-commutativity witness: x = 1 on member 1 in degree 0, y = 1 on the overlap in degree 1");

    const auto agree = product_agreement(tri, 3);
    out.require(agree.holds(), "triangle: induced products disagree: " + agree.witness.value_or(""));
    out.require(agree.pairs > 0, "triangle: no product pairs compared");
}

void telescopes(Outcome& out)
{
    testing_support::Rng rng(99);
    for (int t = 0; t < 10; ++t) {
        const int L = rng.uniform(2, 4);
        std::vector<Complex<Rational>> stages;
        std::vector<ChainMap<Rational>> maps;
        auto first = testing_support::random_map(rng, 0, 3, 3, false);
        stages.push_back(first.f.source());
        stages.push_back(first.f.target());
        maps.push_back(first.f);
        for (int i = 1; i < L; ++i) {
            stages.push_back(stages.back());
            maps.push_back(identity_map(stages.back()));
        }
        const auto td = telescope_data(stages, maps);
        const std::string tag = "diagram " + str(t);
        out.require(is_complex(td.tel), tag + ": telescope is not a complex");
        for (const auto& f : maps)
            out.require(is_chain_map(f), tag + ": diagram map is not a chain map");
        const auto ht = homology(td.tel), hl = homology(stages.back());
        out.require(betti_range(ht, -2, 4) == betti_range(hl, -2, 4), tag + ": H(telescope) != H(last)");
        out.require(oracle_betti(td.tel, -2, 4) == oracle_betti(stages.back(), -2, 4), tag + ": oracle disagrees");
        out.require(is_quasi_iso(td.stage_inclusion.back()).holds, tag + ": last stage is not a quasi-isomorphism");
        auto longer_stages = stages;
        auto longer_maps = maps;
        longer_stages.push_back(stages.back());
        longer_maps.push_back(identity_map(stages.back()));
        const auto longer = telescope_data(longer_stages, longer_maps);
        out.require(betti_range(homology(longer.tel), -2, 4) == betti_range(ht, -2, 4),
                    tag + ": lengths L and L+1 disagree");
    }

    const NovikovRing R(1, Rational(3));
    Complex<NovikovElem> L(R, 0, {1});
    ChainMap<NovikovElem> t(L, L);
    t.set(0, NMatrix::from_triplets(R, 1, 1, {{0, 0, NovikovElem::parse(R, "T")}}));
    const auto td = telescope_data<NovikovElem>({L, L, L}, {t, t});
    const auto tel = complete(td.tel);
    out.require(tel.completed_at && *tel.completed_at == Rational(3), "completion level is not E = 3");
    out.require(complete(tel) == tel, "completion is not idempotent");
    const auto img = image_in_homology(td.stage_inclusion.front(), 0);
    out.require(img.pure_torsion(), "first-stage image has a valuation-0 class");
    out.require(img.inside_u_multiple, "first-stage image is not divisible by T");
    out.require(oracle::novikov_lengths(tel, -1).empty(), "telescope has homology in degree -1");
}

void covers_and_brackets(Outcome& out)
{
    testing_support::Rng rng(17);
    for (int t = 0; t < 100; ++t) {
        const VarScheme V = VarScheme::phase(rng.uniform(1, 2));
        const auto a = rng.polynomial(V, 3), b = rng.polynomial(V, 3), c = rng.polynomial(V, 3);
        const Rational s = rng.rational();
        const std::string tag = "triple " + str(t);
        out.require(poisson_bracket(a, b) == -poisson_bracket(b, a), tag + ": not antisymmetric");
        out.require(poisson_bracket(a, b + s * c) == poisson_bracket(a, b) + s * poisson_bracket(a, c),
                    tag + ": not bilinear");
        out.require(poisson_bracket(a, b * c) == poisson_bracket(a, b) * c + b * poisson_bracket(a, c),
                    tag + ": Leibniz fails");
        out.require((poisson_bracket(a, poisson_bracket(b, c)) + poisson_bracket(b, poisson_bracket(c, a)) +
                     poisson_bracket(c, poisson_bracket(a, b)))
                        .is_zero(),
                    tag + ": Jacobi fails");
    }

    const Grid grid;
    int points = 0;
    for (auto mode : {SmoothingCurve::Mode::intersection, SmoothingCurve::Mode::unite})
        for (const Rational& d : {Rational(1), Rational(1, 2), Rational(1, 4)}) {
            const SmoothingCurve curve(d, mode);
            grid.for_each(2, [&](const std::vector<Rational>& p) {
                out.require(smoothing_h(curve, p[0], p[1]).sign() == smoothing_region_sign(curve, p[0], p[1]),
                            std::string(mode_name(mode)) + " delta=" + d.to_string() + ": sign wrong at (" +
                                p[0].to_string() + ", " + p[1].to_string() + ")");
                const Rational s = p[0] - p[1];
                out.require(smoothing_h(curve, p[0] + s, p[1] + s) == smoothing_h(curve, p[0], p[1]).plus_sqrt2(s),
                            "slope identity fails at (" + p[0].to_string() + ", " + p[1].to_string() + ")");
                ++points;
                return true;
            });
        }
    out.note(str(points) + " grid points");

    testing_support::Rng crng(5);
    const VarScheme P2 = VarScheme::phase(2);
    const auto q1 = Polynomial::parse(P2, "q1"), p2 = Polynomial::parse(P2, "p2");
    for (int t = 0; t < 20; ++t) {
        const auto Y = VarScheme::plain(2);
        std::vector<Polynomial> fs;
        const int N = crng.uniform(2, 3);
        for (int i = 0; i < N; ++i)
            fs.push_back(crng.polynomial(Y, 2).compose({q1, p2}));
        const auto Z = VarScheme::plain(N);
        const auto g1 = crng.polynomial(Z, 2), g2 = crng.polynomial(Z, 2);
        const auto res = check_composition_lemma(fs, g1, g2);
        out.require(res.bracket.is_zero(), "composition case " + str(t) + ": bracket is nonzero");
        out.require(res.G1 == g1.compose(fs), "composition case " + str(t) + ": G1 is not g1 o f");
    }
}

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> criteria = {
        {1, "Tot to Cech isomorphism on 25 random presheaves", 10, tot_cech},
        {2, "TW to Tot quasi-isomorphism, cutoff stability and Whitney section", 60, tw_tot},
        {3, "descent on the triangle, square and disjoint fixtures", 10, descent_fixtures},
        {4, "inclusion-exclusion isomorphism and descent by induction", 10, inclusion_exclusion_engine},
        {5, "BV axioms and Schouten bracket on Q[x1,x2] up to degree 3", 30, bv_axioms},
        {6, "polyvector cohomology of the projective line at D = 4, 5", 30, p1_cohomology},
        {7, "TW and Cech products and homology product agreement", 30, products},
        {8, "telescopes over Q and the Novikov T-telescope", 10, telescopes},
        {9, "Poisson brackets, smoothing signs, slope identity and composition", 30, covers_and_brackets},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id))
            continue;
        Outcome out;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(out);
        } catch (const std::exception& e) {
            out.require(false, std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = seconds <= c.limit_seconds;
        const bool pass = !out.failed() && in_time;
        failures += !pass;
        char timing[64];
        std::snprintf(timing, sizeof timing, "%.2f s / %.0f s", seconds, c.limit_seconds);
        std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title << "  (" << timing << ", "
                  << out.checks() << " checks)\n";
        for (const auto& n : out.notes())
            std::cout << "        " << n << "\n";
        if (!in_time)
            std::cout << "        over the time limit\n";
        for (const auto& f : out.failures())
            std::cout << "        " << f << "\n";
    }
    std::cout << (failures == 0 ? "all criteria passed" : str(failures) + " criteria failed") << "\n";
    return failures == 0 ? 0 : 1;
}
