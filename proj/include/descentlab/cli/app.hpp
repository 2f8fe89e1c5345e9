#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "descentlab/complexes/homology.hpp"
#include "descentlab/descent/generators.hpp"
#include "descentlab/descent/totalization.hpp"
#include "descentlab/descent/verify.hpp"
#include "descentlab/involutive/covers.hpp"
#include "descentlab/io/json.hpp"
#include "descentlab/operad/bv_check.hpp"
#include "descentlab/operad/p1.hpp"
#include "descentlab/operad/products.hpp"

namespace descentlab::cli {

using io::Json;

inline const std::vector<std::string>& commands()
{
    static const std::vector<std::string> names = {
        "validate", "homology", "cech",    "tot",          "tw",        "compare",     "descent",
        "incl-excl", "bv-check", "p1-demo", "covers-check", "telescope", "emit-fixture"};
    return names;
}

inline const std::vector<std::string>& fixture_names()
{
    static const std::vector<std::string> names = {
        "triangle-boundary", "triangle-cover", "square-cover",  "disjoint",   "constant",
        "random-seeded",     "p1-polyvector",  "novikov-telescope", "weak-cover"};
    return names;
}

struct Options
{
    std::optional<std::string> input;
    std::optional<std::string> out;
    std::string format = "json";
    std::optional<int> weight_cutoff;
    int laurent_cutoff = 4;
    int novikov_den = 1;
    std::string novikov_e = "3";
    std::uint64_t seed = 1;
    std::optional<std::pair<int, int>> degree_window;
    std::string fixture;

    void check() const
    {
        if (format != "json" && format != "text")
            throw InputError("--format must be json or text");
        if (weight_cutoff && (*weight_cutoff < 1 || *weight_cutoff > 12))
            throw InputError("--weight-cutoff must be in 1..12");
        if (laurent_cutoff < 3 || laurent_cutoff > 64)
            throw InputError("--laurent-cutoff must be in 3..64");
        if (novikov_den < 1 || novikov_den > 64)
            throw InputError("--novikov-den must be in 1..64");
        const Rational e = Rational::parse(novikov_e);
        if (e.sign() <= 0 || Rational(64) < e)
            throw InputError("--novikov-e must be a positive rational up to 64");
        if (degree_window && degree_window->first > degree_window->second)
            throw InputError("--degree-window needs lo <= hi");
    }
};

inline std::pair<int, int> parse_window(const std::string& s)
{
    const auto pos = s.find(':');
    if (pos == std::string::npos)
        throw InputError("--degree-window expects lo:hi");
    try {
        return {std::stoi(s.substr(0, pos)), std::stoi(s.substr(pos + 1))};
    } catch (const std::exception&) {
        throw InputError("--degree-window expects integers lo:hi");
    }
}

struct Check
{
    std::string name;
    std::string anchor;
    bool passed = false;
    Json detail;
};

struct Report
{
    std::string command;
    Json options = Json::object();
    std::vector<Check> checks;
    Json results = Json::object();
    std::optional<Json> artifact; // file content written by emit-fixture

    void add(std::string name, std::string anchor, bool passed, Json detail = nullptr)
    {
        checks.push_back({std::move(name), std::move(anchor), passed, std::move(detail)});
    }

    bool passed() const
    {
        for (const auto& c : checks)
            if (!c.passed)
                return false;
        return true;
    }
    int exit_code() const { return passed() ? 0 : 1; }

    Json to_json() const
    {
        Json j;
        j["command"] = command;
        j["options"] = options;
        j["status"] = passed() ? "pass" : "fail";
        Json cs = Json::array();
        for (const auto& c : checks) {
            Json e;
            e["check"] = c.name;
            e["anchor"] = c.anchor;
            e["status"] = c.passed ? "pass" : "fail";
            if (!c.detail.is_null())
                e["detail"] = c.detail;
            cs.push_back(e);
        }
        j["checks"] = cs;
        j["results"] = results;
        return j;
    }

    std::string to_text() const
    {
        std::ostringstream os;
        os << "descentlab " << command << "\n";
        for (const auto& [k, v] : options.items())
            os << "  " << k << " = " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
        size_t w = 5, a = 6;
        for (const auto& c : checks) {
            w = std::max(w, c.name.size());
            a = std::max(a, c.anchor.size());
        }
        os << "\n" << pad("check", w) << "  " << pad("anchor", a) << "  status\n";
        for (const auto& c : checks) {
            os << pad(c.name, w) << "  " << pad(c.anchor, a) << "  " << (c.passed ? "PASS" : "FAIL") << "\n";
            if (!c.passed && !c.detail.is_null())
                os << "    " << (c.detail.is_string() ? c.detail.get<std::string>() : c.detail.dump()) << "\n";
        }
        os << "\nresults\n";
        write_text(os, results, 1);
        os << "\nstatus: " << (passed() ? "pass" : "fail") << "\n";
        return os.str();
    }

private:
    static std::string pad(const std::string& s, size_t w) { return s + std::string(w - std::min(w, s.size()), ' '); }

    static void write_text(std::ostream& os, const Json& j, int depth)
    {
        const std::string ind(2 * depth, ' ');
        for (const auto& [k, v] : j.items()) {
            if (v.is_object() && !is_flat(v)) {
                os << ind << k << ":\n";
                write_text(os, v, depth + 1);
            } else {
                os << ind << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
            }
        }
    }

    static bool is_flat(const Json& j)
    {
        for (const auto& [k, v] : j.items())
            if (v.is_structured())
                return false;
        return j.size() <= 8;
    }
};

// ---------------------------------------------------------------- input

inline Json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot read " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError("malformed JSON in " + path + ": " + e.what());
    }
}

inline std::string kind_of(const Json& j)
{
    if (!j.is_object())
        throw InputError("top-level JSON value must be an object");
    if (j.contains("kind"))
        return j.at("kind").get<std::string>();
    if (j.contains("values"))
        return "presheaf";
    if (j.contains("support"))
        return "complex";
    if (j.contains("stages"))
        return "telescope";
    if (j.contains("maximal"))
        return "covered-complex";
    if (j.contains("functions"))
        return "weak-cover";
    throw InputError("cannot tell what kind of object the input describes");
}

struct PresheafInput
{
    std::string kind;
    io::AnyPresheaf F;
    std::optional<CoveredComplex> covered;
    std::optional<CDGAPresheaf> cdga;
};

inline PresheafInput load_presheaf(const Json& j)
{
    const std::string kind = kind_of(j);
    if (kind == "presheaf")
        return {kind, io::any_presheaf_from_json(j), std::nullopt, std::nullopt};
    if (kind == "cdga-presheaf") {
        auto A = io::cdga_from_json(j);
        return {kind, A.F, std::nullopt, A};
    }
    if (kind == "covered-complex") {
        auto cc = io::covered_complex_from_json(j);
        return {kind, cochain_presheaf(cc.space, cc.cover), cc, std::nullopt};
    }
    throw InputError("expected a presheaf, algebra presheaf or covered complex, got '" + kind + "'");
}

inline const CoverPresheaf<Rational>& rational(const PresheafInput& in)
{
    if (!std::holds_alternative<CoverPresheaf<Rational>>(in.F))
        throw UnsupportedRing("this command needs rational coefficients");
    return std::get<CoverPresheaf<Rational>>(in.F);
}

inline Json betti_json(const HomologyReport& h, int lo, int hi)
{
    Json b = Json::object();
    for (int n = lo; n <= hi; ++n)
        b[std::to_string(n)] = h.betti(n);
    return b;
}

// ---------------------------------------------------------------- fixtures

inline Json fixture_json(const std::string& name, const Options& opt)
{
    const RationalField Q;
    if (name == "triangle-boundary") {
        auto cc = triangle_boundary_edges();
        return io::presheaf_to_json(cochain_presheaf(cc.space, cc.cover));
    }
    if (name == "triangle-cover")
        return io::covered_complex_to_json(triangle_boundary_edges());
    if (name == "square-cover")
        return io::covered_complex_to_json(square_complex());
    if (name == "disjoint")
        return io::presheaf_to_json(disjoint_presheaf());
    if (name == "constant")
        return io::presheaf_to_json(constant_presheaf(3, Complex<Rational>(Q, 0, {1})));
    if (name == "random-seeded") {
        RandomPresheafOptions o;
        o.N = 3;
        o.max_dim = 3;
        o.width = 3;
        auto j = io::presheaf_to_json(random_presheaf(opt.seed, o));
        j["seed"] = opt.seed;
        return j;
    }
    if (name == "p1-polyvector")
        return io::cdga_to_json(p1_polyvector_presheaf(opt.laurent_cutoff).cdga);
    if (name == "novikov-telescope") {
        const NovikovRing R(opt.novikov_den, Rational::parse(opt.novikov_e));
        Complex<NovikovElem> L(R, 0, {1});
        ChainMap<NovikovElem> t(L, L);
        t.set(0, SparseMatrix<NovikovElem>::from_triplets(R, 1, 1, {{0, 0, NovikovElem::parse(R, "T")}}));
        return io::diagram_to_json(io::Diagram<NovikovElem>{{L, L, L}, {t, t}});
    }
    if (name == "weak-cover") {
        Json j;
        j["kind"] = "weak-cover";
        j["phase_dim"] = 1;
        j["set"] = "q1";
        Json fs = Json::array();
        for (int i = 1; i <= 64; ++i)
            fs.push_back(i == 1 ? std::string("q1 - 1") : "q1 - 1/" + std::to_string(i));
        j["functions"] = fs;
        j["grid"] = {{"lo", "-2"}, {"hi", "2"}, {"steps", 100}};
        return j;
    }
    throw UnknownFixture("'" + name + "'; known fixtures: triangle-boundary, triangle-cover, square-cover, disjoint, "
                         "constant, random-seeded, p1-polyvector, novikov-telescope, weak-cover");
}

// ---------------------------------------------------------------- commands

namespace detail {

template <class S>
void validate_complex(Report& r, const Complex<S>& c, const std::string& where)
{
    try {
        validate(c);
        r.add("square-zero differential (" + where + ")", "complex/d-squared-zero", true);
    } catch (const NotAComplex& e) {
        r.add("square-zero differential (" + where + ")", "complex/d-squared-zero", false, e.what());
    }
}

template <class S>
void validate_presheaf(Report& r, const CoverPresheaf<S>& F)
{
    for (const auto& [J, c] : F.values())
        validate_complex(r, c, node_string(J));
    try {
        check_presheaf(F);
        r.add("restrictions are chain maps and compose", "presheaf/functoriality", true);
    } catch (const FunctorialityFailure& e) {
        r.add("restrictions are chain maps and compose", "presheaf/functoriality", false, e.witness());
    } catch (const NotAComplex& e) {
        r.add("restrictions are chain maps and compose", "presheaf/functoriality", false, e.what());
    }
    r.results["N"] = F.N();
}

inline Grid grid_from_json(const Json& j)
{
    Grid g;
    if (j.contains("grid")) {
        const auto& gj = j.at("grid");
        g.lo = io::rational_from_json(gj.value("lo", Json("-2")));
        g.hi = io::rational_from_json(gj.value("hi", Json("2")));
        g.steps = gj.value("steps", 100);
    }
    if (g.steps < 1 || g.steps > 2000 || !(g.lo < g.hi))
        throw InputError("grid needs lo < hi and 1..2000 steps");
    return g;
}

inline std::vector<Polynomial> polys_from_json(const VarScheme& V, const Json& j, const std::string& where)
{
    if (!j.is_array() || j.empty())
        throw InputError(where + " must be a nonempty list of polynomial strings");
    std::vector<Polynomial> out;
    for (const auto& s : j) {
        if (!s.is_string())
            throw InputError(where + " entries must be strings");
        out.push_back(Polynomial::parse(V, s.get<std::string>()));
    }
    return out;
}

inline void add_cover_report(Report& r, const WeakCoverReport& w, const std::string& prefix)
{
    for (const auto& c : w.conditions)
        r.add(prefix + " " + c.name, "covers/" + c.name, c.holds(), c.witness ? Json(*c.witness) : Json(nullptr));
    r.results[prefix] = w.to_json();
}

} // namespace detail

inline Report run_validate(const Json& j)
{
    Report r;
    const std::string kind = kind_of(j);
    r.results["kind"] = kind;
    if (kind == "complex") {
        std::visit([&](const auto& c) { detail::validate_complex(r, c, "input"); }, io::any_complex_from_json(j));
    } else if (kind == "presheaf" || kind == "covered-complex") {
        auto in = load_presheaf(j);
        if (in.covered)
            r.add("cover members union to the space", "cover/union", covers(*in.covered));
        std::visit([&](const auto& F) { detail::validate_presheaf(r, F); }, in.F);
    } else if (kind == "cdga-presheaf") {
        auto A = io::cdga_from_json(j);
        detail::validate_presheaf(r, A.F);
        auto d = cdga_defect(A);
        r.add("unit, Leibniz, associativity, commutativity, multiplicative restrictions", "algebra/presheaf-laws", !d,
              d ? Json(*d) : Json(nullptr));
    } else if (kind == "telescope") {
        auto R = io::ring_from_json(j.at("coeff"));
        auto check = [&](const auto& D) {
            for (size_t i = 0; i < D.maps.size(); ++i) {
                auto bad = chain_map_defect(D.maps[i]);
                r.add("stage map " + std::to_string(i) + " is a chain map", "diagram/chain-maps", !bad,
                      bad ? Json("fails in degree " + std::to_string(*bad)) : Json(nullptr));
            }
            r.results["stages"] = D.stages.size();
        };
        if (R.index() == 0)
            check(io::diagram_from_json<Rational>(std::get<RationalField>(R), j));
        else
            check(io::diagram_from_json<NovikovElem>(std::get<NovikovRing>(R), j));
    } else if (kind == "weak-cover" || kind == "cover-functions") {
        const VarScheme V = VarScheme::phase(j.value("phase_dim", 1));
        if (j.contains("functions"))
            r.results["functions"] = detail::polys_from_json(V, j.at("functions"), "functions").size();
        r.add("input parses", "input/parse", true);
    } else {
        throw InputError("unknown kind '" + kind + "'");
    }
    return r;
}

inline Report run_homology(const Json& j, const Options& opt)
{
    Report r;
    const std::string kind = kind_of(j);
    auto emit = [&](const auto& c) {
        detail::validate_complex(r, c, kind == "complex" ? "input" : "top");
        auto h = homology(c);
        const int lo = opt.degree_window ? opt.degree_window->first : c.lo();
        const int hi = opt.degree_window ? opt.degree_window->second : c.hi();
        r.results["support"] = Json::array({c.lo(), c.hi()});
        r.results["betti"] = betti_json(h, lo, hi);
        r.results["homology"] = h.to_json();
    };
    if (kind == "complex")
        std::visit(emit, io::any_complex_from_json(j));
    else
        std::visit([&](const auto& F) { emit(F.top()); }, load_presheaf(j).F);
    return r;
}

inline Report run_cech(const Json& j)
{
    Report r;
    auto in = load_presheaf(j);
    std::visit(
        [&](const auto& F) {
            check_presheaf(F);
            auto C = cech(F);
            validate(C.cech);
            r.add("Cech differential squares to zero", "cech/d-squared-zero", true);
            r.add("augmentation is a chain map", "cech/augmentation-chain-map", is_chain_map(C.augmentation));
            auto h = homology(C.cech);
            Json dims = Json::object();
            for (int n = C.cech.lo(); n <= C.cech.hi(); ++n)
                dims[std::to_string(n)] = C.cech.dim(n);
            r.results["N"] = F.N();
            r.results["dims"] = dims;
            r.results["betti"] = betti_json(h, C.cech.lo(), C.cech.hi());
            r.results["homology"] = h.to_json();
        },
        in.F);
    return r;
}

namespace detail {

inline bool full_rank_square(const SparseMatrix<Rational>& m)
{
    return m.rows() == m.cols() && rank(m) == m.rows();
}

inline void tot_checks(Report& r, const Cosimplicial<Rational>& D, const Totalization& T)
{
    auto C = cech_data(D);
    auto iso = tot_cech_iso(T, C);
    std::optional<int> bad;
    for (int n = std::min(T.lo(), C.cech.lo()); n <= std::max(T.hi(), C.cech.hi()); ++n)
        if (!full_rank_square(iso.at(n)) && !bad)
            bad = n;
    r.add("Tot to Cech comparison is a chain map", "tot-cech/chain-map", is_chain_map(iso));
    r.add("Tot to Cech comparison is bijective", "tot-cech/bijective", !bad,
          bad ? Json("not invertible in degree " + std::to_string(*bad)) : Json(nullptr));
    r.add("comparison intertwines the augmentations", "tot-cech/augmentation",
          maps_equal(compose(iso, *T.augmentation()), *C.augmentation));
}

inline void tw_checks(Report& r, const Totalization& W, const Totalization& T, const std::string& tag)
{
    auto I = tw_to_tot(W, T);
    auto E = whitney_section(T, W);
    auto q = is_quasi_iso(I);
    r.add("integration TW -> Tot is a quasi-isomorphism (" + tag + ")", "tw-tot/integration-quasi-iso",
          is_chain_map(I) && q.holds, q.witness ? Json("cone homology in degree " + std::to_string(*q.witness)) : Json(nullptr));
    r.add("Whitney section composed with integration is the identity (" + tag + ")", "tw-tot/whitney-section",
          is_chain_map(E) && maps_equal(compose(I, E), identity_map(T.complex())));
    r.add("integration intertwines the augmentations (" + tag + ")", "tw-tot/augmentation",
          maps_equal(compose(I, *W.augmentation()), *T.augmentation()));
}

} // namespace detail

inline Report run_tot(const Json& j)
{
    Report r;
    const auto in = load_presheaf(j);
    const auto& F = rational(in);
    check_presheaf(F);
    auto D = nerve_cosimplicial(F);
    auto T = tot(D);
    detail::tot_checks(r, D, T);
    r.results["N"] = F.N();
    r.results["betti"] = betti_json(homology(T.complex()), T.lo(), T.hi());
    return r;
}

inline Report run_tw(const Json& j, const Options& opt, bool compare)
{
    Report r;
    const auto in = load_presheaf(j);
    const auto& F = rational(in);
    check_presheaf(F);
    const int P = opt.weight_cutoff.value_or(F.N());
    r.options["weight_cutoff"] = P;
    auto D = nerve_cosimplicial(F);
    auto T = tot(D);
    auto W = tw(D, P);
    const auto hT = homology(T.complex());
    detail::tw_checks(r, W, T, "P=" + std::to_string(P));
    r.results["N"] = F.N();
    r.results["tot_betti"] = betti_json(hT, T.lo(), T.hi());
    r.results["tw_betti"] = betti_json(homology(W.complex()), T.lo(), T.hi());
    Json dims = Json::object();
    for (int n = W.lo(); n <= W.hi(); ++n)
        dims[std::to_string(n)] = W.dim(n);
    r.results["tw_dims"] = dims;
    if (compare) {
        detail::tot_checks(r, D, T);
        auto W2 = tw(D, P + 1);
        const bool same = homology(W2.complex()).betti_table(T.lo(), T.hi()) ==
                          homology(W.complex()).betti_table(T.lo(), T.hi());
        r.add("Betti tables agree at weight cutoffs P and P+1", "tw/cutoff-stability", same);
        detail::tw_checks(r, W2, T, "P=" + std::to_string(P + 1));
        auto C = cech_data(D);
        r.results["cech_betti"] = betti_json(homology(C.cech), T.lo(), T.hi());
    }
    return r;
}

inline Report run_descent(const Json& j)
{
    Report r;
    auto in = load_presheaf(j);
    const auto& F = rational(in);
    auto d = verify_descent(F);
    r.add("augmentation F(top) -> Cech is a quasi-isomorphism", "descent/augmentation-quasi-iso", d.holds,
          d.witness ? Json("homology differs in degree " + std::to_string(*d.witness)) : Json(nullptr));
    r.results["N"] = F.N();
    r.results["witness_degree"] = d.witness ? Json(*d.witness) : Json(nullptr);
    const auto& degs = d.certificate.degrees;
    const int lo = degs.empty() ? F.top().lo() : degs.front(), hi = degs.empty() ? F.top().hi() : degs.back();
    r.results["top_betti"] = betti_json(d.top, lo, hi);
    r.results["cech_betti"] = betti_json(d.cech, lo, hi);
    return r;
}

inline Report run_incl_excl(const Json& j)
{
    Report r;
    auto in = load_presheaf(j);
    const auto& F = rational(in);
    auto c = inclusion_exclusion(F);
    r.add("cocone of the restriction-augmentation difference matches the Cech complex",
          "inclusion-exclusion/cocone-cech-iso", c.holds,
          c.failing_degree ? Json("fails in degree " + std::to_string(*c.failing_degree)) : Json(nullptr));
    r.results["certificate"] = c.to_json();
    if (in.covered) {
        auto ind = descent_by_induction(in.covered->space, in.covered->cover, in.covered->name);
        r.add("N-fold descent follows from two-fold descent by induction", "inclusion-exclusion/induction",
              ind.holds);
        r.results["induction"] = ind.to_json();
    }
    return r;
}

inline Report run_bv_check(const std::optional<Json>& j, const Options& opt)
{
    Report r;
    PolyvectorRing ring{2, false};
    if (j) {
        if (kind_of(*j) != "polyvector-ring")
            throw InputError("bv-check expects a polyvector-ring description");
        ring.n = j->value("n", 2);
        ring.laurent = j->value("laurent", false);
        if (ring.n < 1 || ring.n > 4)
            throw InputError("polyvector rings have 1..4 variables here");
    }
    const auto window = opt.degree_window.value_or(std::pair<int, int>{ring.laurent ? -1 : 0, ring.laurent ? 1 : 3});
    r.options["ring"] = std::string(ring.laurent ? "Laurent" : "polynomial") + " in " + std::to_string(ring.n) +
                        " variables";
    r.options["degree_window"] = std::to_string(window.first) + ":" + std::to_string(window.second);
    const auto basis = pv_monomial_basis(ring, window.first, window.second);
    auto rep = bv_axiom_check(BVStructure{ring}, basis);
    for (const auto& a : rep.axioms)
        r.add(a.axiom, "bv/" + a.axiom, !a.witness, a.witness ? Json(*a.witness) : Json(nullptr));
    r.results["basis_size"] = basis.size();
    r.results["report"] = rep.to_json();
    return r;
}

inline Report run_p1_demo(const Options& opt)
{
    Report r;
    const int D = opt.laurent_cutoff;
    r.options["laurent_cutoff"] = D;
    auto M = p1_polyvector_presheaf(D);
    auto M2 = p1_polyvector_presheaf(D + 1);
    auto defect = cdga_defect(M.cdga);
    r.add("presheaf of graded-commutative algebras", "p1/algebra-presheaf", !defect,
          defect ? Json(*defect) : Json(nullptr));
    const std::vector<std::pair<int, int>> classical = {{1, 0}, {3, 0}};
    Json betti = Json::object();
    for (int k = 0; k <= 1; ++k) {
        const std::string tag = std::to_string(k) + "-vectors";
        auto d = verify_descent(M.degree_part(k));
        auto d2 = verify_descent(M2.degree_part(k));
        r.add("global sections compute Cech cohomology (" + tag + ")", "p1/descent", d.holds);
        const std::pair<int, int> h{d.cech.betti(0), d.cech.betti(1)}, h2{d2.cech.betti(0), d2.cech.betti(1)};
        r.add("Laurent cutoffs D and D+1 agree (" + tag + ")", "p1/cutoff-stability", h == h2);
        r.add("cohomology of the projective line (" + tag + ")", "p1/cohomology", h == classical[k],
              Json::array({h.first, h.second}));
        betti[tag] = {{"H0", h.first}, {"H1", h.second}};
    }
    auto agree = product_agreement(M.cdga, 2);
    r.add("TW and Cech products agree in cohomology", "products/homology-agreement", agree.holds(),
          agree.witness ? Json(*agree.witness) : Json(nullptr));
    r.results["cech_cohomology"] = betti;
    r.results["product_agreement"] = agree.to_json();
    Json compat = Json::array();
    for (auto [J, K] : {std::pair<NodeMask, NodeMask>{1, 3}, {2, 3}})
        compat.push_back(M.delta_compatibility(J, K).to_json());
    r.results["divergence_across_charts"] = compat;
    return r;
}

inline Report run_covers_check(const std::optional<Json>& in, const Options& opt)
{
    Report r;
    const Json j = in ? *in : fixture_json("weak-cover", opt);
    const std::string kind = kind_of(j);
    const VarScheme V = VarScheme::phase(j.value("phase_dim", 1));
    const Grid grid = detail::grid_from_json(j);
    r.options["grid"] = grid.lo.to_string() + ".." + grid.hi.to_string() + " x " + std::to_string(grid.steps);
    if (kind == "weak-cover") {
        auto fs = detail::polys_from_json(V, j.at("functions"), "functions");
        auto k = Polynomial::parse(V, j.at("set").get<std::string>());
        detail::add_cover_report(r, check_weak_cover_conditions(fs, k, grid), "weak-cover");
    } else if (kind == "cover-functions") {
        const auto mode = j.value("mode", std::string("intersection")) == "union" ? SmoothingCurve::Mode::unite
                                                                                 : SmoothingCurve::Mode::intersection;
        auto f1 = detail::polys_from_json(V, j.at("f1"), "f1");
        auto f2 = detail::polys_from_json(V, j.at("f2"), "f2");
        std::vector<Rational> deltas;
        for (const auto& d : j.at("deltas"))
            deltas.push_back(io::rational_from_json(d));
        auto sets = detail::polys_from_json(V, j.at("set"), "set");
        if (sets.size() != 2)
            throw InputError("cover-functions 'set' lists the two polynomials k1, k2");
        auto gs = build_cover_functions(f1, f2, mode, deltas);
        const bool inter = mode == SmoothingCurve::Mode::intersection;
        auto member = [&](const std::vector<Rational>& x) {
            const bool a = sets[0].evaluate(x).sign() <= 0, b = sets[1].evaluate(x).sign() <= 0;
            return inter ? (a && b) : (a || b);
        };
        const std::string name = std::string(inter ? "intersection" : "union") + " of {" + sets[0].to_string() +
                                 " <= 0} and {" + sets[1].to_string() + " <= 0}";
        detail::add_cover_report(r, check_cover_functions(gs, name, member, grid), "smoothed");
    } else {
        throw InputError("covers-check expects a weak-cover or cover-functions description");
    }
    // sign and slope properties of the smoothing on the same grid
    Json sign = Json::object();
    for (auto mode : {SmoothingCurve::Mode::intersection, SmoothingCurve::Mode::unite})
        for (const Rational& d : {Rational(1), Rational(1, 2), Rational(1, 4)}) {
            const SmoothingCurve c(d, mode);
            long mismatches = 0, checked = 0;
            std::optional<std::string> witness;
            grid.for_each(2, [&](const std::vector<Rational>& p) {
                ++checked;
                const Surd h = smoothing_h(c, p[0], p[1]);
                if (h.sign() != smoothing_region_sign(c, p[0], p[1]) ||
                    !(smoothing_h(c, p[0] + grid.hi, p[1] + grid.hi) == h.plus_sqrt2(grid.hi))) {
                    ++mismatches;
                    if (!witness)
                        witness = "(" + p[0].to_string() + ", " + p[1].to_string() + ")";
                }
                return true;
            });
            const std::string tag = mode_name(mode) + " delta=" + d.to_string();
            r.add("smoothing sign and slope identity (" + tag + ")", "covers/smoothing-sign", mismatches == 0,
                  witness ? Json(*witness) : Json(nullptr));
            sign[tag] = checked;
        }
    r.results["smoothing_points_checked"] = sign;
    return r;
}

inline Report run_telescope(const std::optional<Json>& in, const Options& opt)
{
    Report r;
    const Json j = in ? *in : fixture_json("novikov-telescope", opt);
    if (kind_of(j) != "telescope")
        throw InputError("telescope expects a telescope diagram");
    const auto R = io::ring_from_json(j.at("coeff"));
    if (R.index() == 0) {
        auto D = io::diagram_from_json<Rational>(std::get<RationalField>(R), j);
        for (size_t i = 0; i < D.maps.size(); ++i)
            r.add("stage map " + std::to_string(i) + " is a chain map", "diagram/chain-maps", is_chain_map(D.maps[i]));
        auto td = telescope_data(D.stages, D.maps);
        validate(td.tel);
        const auto& last = D.stages.back();
        auto ht = homology(td.tel), hl = homology(last);
        const int lo = std::min(td.tel.lo(), last.lo()), hi = std::max(td.tel.hi(), last.hi());
        r.add("telescope homology equals the last stage", "telescope/last-stage",
              ht.betti_table(lo, hi) == hl.betti_table(lo, hi));
        r.add("last stage includes quasi-isomorphically", "telescope/last-stage-inclusion",
              is_quasi_iso(td.stage_inclusion.back()).holds);
        r.results["telescope_betti"] = betti_json(ht, lo, hi);
        r.results["last_stage_betti"] = betti_json(hl, lo, hi);
    } else {
        const auto& ring = std::get<NovikovRing>(R);
        r.options["coeff"] = ring.to_string();
        auto D = io::diagram_from_json<NovikovElem>(ring, j);
        for (size_t i = 0; i < D.maps.size(); ++i)
            r.add("stage map " + std::to_string(i) + " is a chain map", "diagram/chain-maps", is_chain_map(D.maps[i]));
        auto td = telescope_data(D.stages, D.maps);
        auto tel = complete(td.tel);
        r.add("completion is idempotent", "telescope/completion-idempotent", complete(tel) == tel);
        auto h = homology(tel);
        r.results["homology"] = h.to_json();
        Json images = Json::array();
        bool first_torsion = true;
        for (size_t s = 0; s < td.stage_inclusion.size(); ++s)
            for (int n = D.stages[s].lo(); n <= D.stages[s].hi(); ++n) {
                auto img = image_in_homology(td.stage_inclusion[s], n);
                Json e;
                e["stage"] = s;
                e["degree"] = n;
                e["lengths"] = img.lengths;
                e["pure_torsion"] = img.pure_torsion();
                e["inside_T_multiple"] = img.inside_u_multiple;
                images.push_back(e);
                if (s == 0)
                    first_torsion = first_torsion && img.pure_torsion() && img.inside_u_multiple;
            }
        r.add("first stage maps to pure torsion with no valuation-0 class", "telescope/torsion-image", first_torsion);
        r.results["stage_images"] = images;
    }
    return r;
}

inline Report run_emit_fixture(const Options& opt)
{
    Report r;
    r.options["fixture"] = opt.fixture;
    const Json j = fixture_json(opt.fixture, opt);
    if (opt.fixture == "random-seeded")
        r.options["seed"] = opt.seed;
    if (opt.fixture == "p1-polyvector")
        r.options["laurent_cutoff"] = opt.laurent_cutoff;
    if (opt.fixture == "novikov-telescope") {
        r.options["novikov_den"] = opt.novikov_den;
        r.options["novikov_e"] = opt.novikov_e;
    }
    Report v = run_validate(j);
    for (auto& c : v.checks)
        r.checks.push_back(c);
    r.results["kind"] = kind_of(j);
    r.artifact = j;
    return r;
}

/// Runs one command; `input` is required except where a built-in default exists.
inline Report run(const std::string& command, const Options& opt)
{
    opt.check();
    auto need = [&]() -> Json {
        if (!opt.input)
            throw InputError(command + " needs --input");
        return read_json(*opt.input);
    };
    auto maybe = [&]() -> std::optional<Json> {
        if (!opt.input)
            return std::nullopt;
        return read_json(*opt.input);
    };
    Report r;
    if (command == "validate")
        r = run_validate(need());
    else if (command == "homology")
        r = run_homology(need(), opt);
    else if (command == "cech")
        r = run_cech(need());
    else if (command == "tot")
        r = run_tot(need());
    else if (command == "tw")
        r = run_tw(need(), opt, false);
    else if (command == "compare")
        r = run_tw(need(), opt, true);
    else if (command == "descent")
        r = run_descent(need());
    else if (command == "incl-excl")
        r = run_incl_excl(need());
    else if (command == "bv-check")
        r = run_bv_check(maybe(), opt);
    else if (command == "p1-demo")
        r = run_p1_demo(opt);
    else if (command == "covers-check")
        r = run_covers_check(maybe(), opt);
    else if (command == "telescope")
        r = run_telescope(maybe(), opt);
    else if (command == "emit-fixture")
        r = run_emit_fixture(opt);
    else
        throw InputError("unknown command '" + command + "'");
    r.command = command;
    if (opt.input)
        r.options["input"] = std::filesystem::path(*opt.input).filename().string();
    return r;
}

inline std::string render(const Report& r, const std::string& format)
{
    return format == "text" ? r.to_text() : r.to_json().dump(2) + "\n";
}

} // namespace descentlab::cli
