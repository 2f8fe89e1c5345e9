#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "descentlab/cli/app.hpp"

namespace {

using namespace descentlab;

int input_error_exit(const std::string& command, const std::string& what, const cli::Options& opt, int code)
{
    cli::Json j;
    j["command"] = command;
    j["status"] = code == 1 ? "fail" : "error";
    j["error"] = what;
    std::cerr << "descentlab: " << what << "\n";
    if (opt.format == "json")
        std::cout << j.dump(2) << "\n";
    return code;
}

bool write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out)
        return false;
    out << text;
    return static_cast<bool>(out);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"descentlab: exact homological algebra for descent, algebra structures and involutive covers"};
    app.footer("Exit codes: 0 all checks pass, 1 mathematical failure with witness, 2 input error.\n"
               "DESCENTLAB_THREADS caps the number of worker threads.\n"
               "Fixtures: triangle-boundary triangle-cover square-cover disjoint constant random-seeded\n"
               "          p1-polyvector novikov-telescope weak-cover");
    std::string command, window;
    cli::Options opt;
    app.add_option("command", command, "validate | homology | cech | tot | tw | compare | descent | incl-excl | "
                                       "bv-check | p1-demo | covers-check | telescope | emit-fixture")
        ->required()
        ->check(CLI::IsMember(cli::commands()));
    app.add_option("fixture", opt.fixture, "fixture name for emit-fixture");
    app.add_option("--input", opt.input, "input JSON file");
    app.add_option("--out", opt.out, "report file (emit-fixture: fixture file)");
    app.add_option("--format", opt.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--weight-cutoff", opt.weight_cutoff, "polynomial weight cutoff P for TW");
    app.add_option("--laurent-cutoff", opt.laurent_cutoff, "weight window D for the projective line");
    app.add_option("--novikov-den", opt.novikov_den, "exponent denominator of the truncated Novikov ring");
    app.add_option("--novikov-e", opt.novikov_e, "truncation level E of the Novikov ring");
    app.add_option("--seed", opt.seed, "seed for random fixtures");
    app.add_option("--degree-window", window, "degree window lo:hi");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    cli::Report report;
    try {
        if (!window.empty())
            opt.degree_window = cli::parse_window(window);
        if (command == "emit-fixture" && opt.fixture.empty())
            throw InputError("emit-fixture needs a fixture name");
        report = cli::run(command, opt);
    } catch (const FunctorialityFailure& e) {
        return input_error_exit(command, e.what(), opt, 1);
    } catch (const NotAComplex& e) {
        return input_error_exit(command, e.what(), opt, 1);
    } catch (const HypothesisFailure& e) {
        return input_error_exit(command, e.what(), opt, 1);
    } catch (const LemmaViolation& e) {
        return input_error_exit(command, e.what(), opt, 1);
    } catch (const AxiomFailure& e) {
        return input_error_exit(command, e.what(), opt, 1);
    } catch (const Error& e) {
        return input_error_exit(command, e.what(), opt, 2);
    } catch (const cli::Json::exception& e) {
        return input_error_exit(command, std::string("malformed input: ") + e.what(), opt, 2);
    }

    if (report.artifact) {
        const std::string path = opt.out.value_or(opt.fixture + ".json");
        if (!write_file(path, report.artifact->dump(2) + "\n"))
            return input_error_exit(command, "cannot write " + path, opt, 2);
        std::cout << cli::render(report, opt.format);
    } else if (opt.out) {
        if (!write_file(*opt.out, cli::render(report, opt.format)))
            return input_error_exit(command, "cannot write " + *opt.out, opt, 2);
    } else {
        std::cout << cli::render(report, opt.format);
    }
    return report.exit_code();
}
