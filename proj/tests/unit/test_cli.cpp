#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "descentlab/cli/app.hpp"
#include "support/random.hpp"

using namespace descentlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch()
{
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("descentlab-cli-" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string emit(const std::string& name, cli::Options opt = {})
{
    opt.fixture = name;
    auto r = cli::run("emit-fixture", opt);
    EXPECT_TRUE(r.passed()) << name;
    const auto path = (scratch() / (name + ".json")).string();
    std::ofstream(path) << r.artifact->dump(2) << "\n";
    return path;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void expect_golden(const std::string& name, const std::string& actual)
{
    const fs::path path = fs::path(DESCENTLAB_GOLDEN_DIR) / name;
    if (std::getenv("DESCENTLAB_UPDATE_GOLDEN")) {
        std::ofstream(path) << actual;
        return;
    }
    ASSERT_TRUE(fs::exists(path)) << "missing golden file " << path;
    EXPECT_EQ(slurp(path), actual) << "golden mismatch for " << name;
}

cli::Options with_input(const std::string& path)
{
    cli::Options o;
    o.input = path;
    return o;
}

} // namespace

TEST(CliRun, DescentOnTriangleHolds)
{
    auto r = cli::run("descent", with_input(emit("triangle-boundary")));
    EXPECT_EQ(r.exit_code(), 0);
    EXPECT_EQ(r.results["cech_betti"]["0"], 1);
    EXPECT_EQ(r.results["cech_betti"]["1"], 1);
    expect_golden("descent-triangle.json", cli::render(r, "json"));
    expect_golden("descent-triangle.txt", cli::render(r, "text"));
}

TEST(CliRun, DescentOnDisjointFailsInDegreeZero)
{
    auto r = cli::run("descent", with_input(emit("disjoint")));
    EXPECT_EQ(r.exit_code(), 1);
    EXPECT_EQ(r.results["witness_degree"], 0);
    expect_golden("descent-disjoint.json", cli::render(r, "json"));
}

TEST(CliRun, MalformedJsonIsAnInputError)
{
    const auto path = (scratch() / "bad.json").string();
    std::ofstream(path) << "{\"coeff\": \"Q\", \"support\": [0";
    EXPECT_THROW(cli::run("homology", with_input(path)), InputError);
    const auto path2 = (scratch() / "bad2.json").string();
    std::ofstream(path2) << R"({"coeff": "Q", "support": [0, 1], "dims": {"0": 1, "1": 1}, "diff": {"0": [[3, 0, 1]]}})";
    EXPECT_THROW(cli::run("homology", with_input(path2)), InputError);
    EXPECT_THROW(cli::run("descent", {}), InputError);
    cli::Options o;
    o.format = "yaml";
    EXPECT_THROW(cli::run("bv-check", o), InputError);
}

TEST(CliRun, UnknownFixture)
{
    cli::Options o;
    o.fixture = "unknown";
    EXPECT_THROW(cli::run("emit-fixture", o), UnknownFixture);
}

TEST(CliRun, EmittedFixturesValidate)
{
    for (const auto& name : cli::fixture_names()) {
        auto r = cli::run("validate", with_input(emit(name)));
        EXPECT_TRUE(r.passed()) << name << "\n" << cli::render(r, "text");
    }
    cli::Options o;
    o.fixture = "triangle-boundary";
    expect_golden("fixture-triangle-boundary.json", cli::run("emit-fixture", o).artifact->dump(2) + "\n");
}

TEST(CliRun, BrokenPresheafIsAMathematicalFailure)
{
    auto j = cli::read_json(emit("triangle-boundary"));
    j["restrictions"]["[1]->[1,2]"]["maps"]["0"] = io::Json::array({io::Json::array({0, 0, "5"})});
    const auto path = (scratch() / "broken.json").string();
    std::ofstream(path) << j.dump();
    auto r = cli::run("validate", with_input(path));
    EXPECT_EQ(r.exit_code(), 1);
    EXPECT_THROW(cli::run("descent", with_input(path)), FunctorialityFailure);
}

TEST(CliRun, ComparisonCommandsOnTheRandomFixture)
{
    cli::Options o;
    o.seed = 7;
    const auto path = emit("random-seeded", o);
    for (const char* c : {"cech", "tot", "tw", "compare", "incl-excl", "descent", "homology"}) {
        auto r = cli::run(c, with_input(path));
        EXPECT_EQ(r.exit_code(), 0) << c << "\n" << cli::render(r, "text");
    }
    expect_golden("compare-random-seeded.json", cli::render(cli::run("compare", with_input(path)), "json"));
}

TEST(CliRun, InductionOnTheTriangleCover)
{
    auto r = cli::run("incl-excl", with_input(emit("triangle-cover")));
    EXPECT_EQ(r.exit_code(), 0);
    EXPECT_TRUE(r.results.contains("induction"));
    expect_golden("incl-excl-triangle-cover.json", cli::render(r, "json"));
}

TEST(CliRun, BuiltInChecks)
{
    cli::Options o;
    auto bv = cli::run("bv-check", o);
    EXPECT_EQ(bv.exit_code(), 0);
    EXPECT_EQ(bv.results["basis_size"], 40);
    expect_golden("bv-check.json", cli::render(bv, "json"));

    auto p1 = cli::run("p1-demo", o);
    EXPECT_EQ(p1.exit_code(), 0);
    expect_golden("p1-demo.json", cli::render(p1, "json"));

    auto tel = cli::run("telescope", o);
    EXPECT_EQ(tel.exit_code(), 0);
    expect_golden("telescope-novikov.json", cli::render(tel, "json"));

    auto cov = cli::run("covers-check", o);
    EXPECT_EQ(cov.exit_code(), 0);
    expect_golden("covers-check.json", cli::render(cov, "json"));
}

TEST(CliRun, WeakCoverFailureCarriesWitness)
{
    const auto path = (scratch() / "short.json").string();
    std::ofstream(path) << R"({"kind": "weak-cover", "phase_dim": 1, "set": "q1",
        "functions": ["q1 - 1", "q1 - 1/2", "q1 - 1/3"], "grid": {"lo": "-2", "hi": "2", "steps": 100}})";
    auto r = cli::run("covers-check", with_input(path));
    EXPECT_EQ(r.exit_code(), 1);
    bool found = false;
    for (const auto& c : r.checks)
        if (c.anchor == "covers/negative_everywhere_only_on_set") {
            found = true;
            EXPECT_FALSE(c.passed);
            EXPECT_TRUE(c.detail.is_string());
        }
    EXPECT_TRUE(found);
}

TEST(CliRun, SmoothedCoverInput)
{
    const auto path = (scratch() / "smoothed.json").string();
    std::ofstream(path) << R"({"kind": "cover-functions", "phase_dim": 2, "mode": "intersection",
        "f1": ["q1 - 1", "q1 - 1/2", "q1 - 1/3"], "f2": ["q2 - 1", "q2 - 1/2", "q2 - 1/3"],
        "deltas": ["1/2", "1/8", "1/18"], "set": ["q1", "q2"], "grid": {"lo": "-2", "hi": "2", "steps": 9}})";
    auto r = cli::run("covers-check", with_input(path));
    EXPECT_EQ(r.exit_code(), 0) << cli::render(r, "text");
}

TEST(CliRun, ReportsAreDeterministic)
{
    cli::Options o;
    o.seed = 3;
    const auto path = emit("random-seeded", o);
    for (const char* c : {"compare", "descent"}) {
        auto a = cli::render(cli::run(c, with_input(path)), "json");
        auto b = cli::render(cli::run(c, with_input(path)), "json");
        EXPECT_EQ(a, b);
    }
    cli::Options e;
    e.fixture = "random-seeded";
    e.seed = 3;
    EXPECT_EQ(cli::run("emit-fixture", e).artifact->dump(), cli::run("emit-fixture", e).artifact->dump());
}

TEST(JsonIo, PresheafRoundTrip)
{
    for (int k = 0; k < 10; ++k) {
        RandomPresheafOptions opt;
        opt.N = 1 + k % 4;
        opt.lo = -(k % 2);
        auto F = random_presheaf(500 + k, opt);
        auto G = io::presheaf_from_json<Rational>(RationalField{}, io::presheaf_to_json(F));
        ASSERT_EQ(G.N(), F.N());
        for (NodeMask J = 0; J <= F.full(); ++J) {
            EXPECT_EQ(G.value(J), F.value(J));
            for (int m = 0; m < F.N(); ++m) {
                const NodeMask K = J | (NodeMask(1) << m);
                if (K != J) {
                    EXPECT_TRUE(maps_equal(G.restriction(J, K), F.restriction(J, K)));
                }
            }
        }
    }
}

TEST(JsonIo, NovikovComplexRoundTrip)
{
    NovikovRing R(2, Rational(5, 2));
    testing_support::Rng rng(4);
    Complex<NovikovElem> c(R, -1, {2, 1});
    c.set_d(-1, SparseMatrix<NovikovElem>::from_triplets(R, 1, 2, {{0, 0, rng.novikov(R)}, {0, 1, rng.novikov(R)}}));
    auto back = io::any_complex_from_json(io::complex_to_json(c));
    ASSERT_TRUE(std::holds_alternative<Complex<NovikovElem>>(back));
    EXPECT_EQ(std::get<Complex<NovikovElem>>(back), c);
}

TEST(JsonIo, AlgebraPresheafRoundTrip)
{
    auto M = p1_polyvector_presheaf(4);
    auto A = io::cdga_from_json(io::cdga_to_json(M.cdga));
    EXPECT_FALSE(cdga_defect(A).has_value());
    int outside = 0;
    for (NodeMask J = 0; J <= A.F.full(); ++J)
        for (int a = 0; a <= 1; ++a)
            for (int b = 0; a + b <= 1; ++b)
                for (int i = 0; i < A.F.value(J).dim(a); ++i)
                    for (int k = 0; k < A.F.value(J).dim(b); ++k) {
                        try {
                            const auto expected = M.cdga.mul(J, a, i, b, k);
                            EXPECT_EQ(A.mul(J, a, i, b, k), expected);
                        } catch (const CutoffTooSmall&) {
                            ++outside;
                            EXPECT_THROW(A.mul(J, a, i, b, k), CutoffTooSmall);
                        }
                    }
    EXPECT_GT(outside, 0);
    auto R = random_cdga_presheaf(9, 3);
    auto B = io::cdga_from_json(io::cdga_to_json(R));
    for (NodeMask J = 0; J <= R.F.full(); ++J)
        for (int i = 0; i < R.F.value(J).dim(1); ++i)
            for (int k = 0; k < R.F.value(J).dim(1); ++k)
                EXPECT_EQ(B.mul(J, 1, i, 1, k), R.mul(J, 1, i, 1, k));
}

TEST(JsonIo, RejectsMalformedPresheaves)
{
    auto good = io::presheaf_to_json(disjoint_presheaf());
    auto missing = good;
    missing["values"].erase("[1,2]");
    EXPECT_THROW(io::any_presheaf_from_json(missing), InputError);
    auto badnode = good;
    badnode["values"]["[3]"] = good["values"]["[1]"];
    EXPECT_THROW(io::any_presheaf_from_json(badnode), InputError);
    auto badkey = good;
    badkey["restrictions"]["[1]=>[1,2]"] = io::Json::object();
    EXPECT_THROW(io::any_presheaf_from_json(badkey), InputError);
    auto badring = good;
    badring["coeff"] = "Z";
    EXPECT_THROW(io::any_presheaf_from_json(badring), InputError);
    auto arrow = good;
    arrow["restrictions"]["[1]\xE2\x86\x92[1,2]"] = arrow["restrictions"]["[1]->[1,2]"];
    arrow["restrictions"].erase("[1]->[1,2]");
    EXPECT_NO_THROW(io::any_presheaf_from_json(arrow));
}

TEST(CliRun, ThreadCountDoesNotChangeReports)
{
    const auto path = emit("random-seeded");
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "4"}) {
        ::setenv("DESCENTLAB_THREADS", threads, 1);
        outputs.push_back(cli::render(cli::run("compare", with_input(path)), "json") +
                          cli::render(cli::run("bv-check", {}), "json"));
    }
    ::unsetenv("DESCENTLAB_THREADS");
    EXPECT_EQ(outputs[0], outputs[1]);
}
