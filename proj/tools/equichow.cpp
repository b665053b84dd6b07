// equichow: command-line front end.
//
// Exit codes: 0 every check matched, 1 some check failed, 2 bad input.

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "equichow/jobfile.hpp"
#include "equichow/pipeline.hpp"

using namespace equichow;

namespace {

constexpr int kMatch = 0;
constexpr int kMismatch = 1;
constexpr int kInputError = 2;

// --seed, else the environment, else the given default.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
    if (flag) return *flag;
    if (const char* env = std::getenv("EQUICHOW_SEED"); env && *env) {
        std::string s(env);
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size()) throw InvalidInput("EQUICHOW_SEED is not an integer");
        return v;
    }
    return fallback;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    out << content;
    if (!out.flush()) throw InvalidInput("cannot write '" + path + "'");
}

struct Common {
    std::optional<int> degree_bound;
    std::optional<unsigned> oracle_trials;
    std::optional<std::uint64_t> seed;
    std::string report;
    std::string machine_report;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--degree-bound", c.degree_bound, "highest degree checked");
    cmd->add_option("--oracle-trials", c.oracle_trials, "randomized oracle trials per pushforward");
    cmd->add_option("--seed", c.seed, "oracle seed (fallback: EQUICHOW_SEED)");
    cmd->add_option("--report", c.report, "write the text report here");
    cmd->add_option("--machine-report", c.machine_report, "write the tab-separated report here");
}

unsigned degree_bound(const Common& c, std::optional<unsigned> fallback = std::nullopt) {
    if (c.degree_bound) {
        if (*c.degree_bound < 0) throw InvalidInput("--degree-bound must be non-negative");
        return static_cast<unsigned>(*c.degree_bound);
    }
    return fallback.value_or(8);
}

int cmd_pipeline(const Common& c, const std::string& fixtures_path, bool serial) {
    PipelineOptions opt;
    opt.degree_bound = degree_bound(c);
    if (c.oracle_trials) opt.oracle_trials = *c.oracle_trials;
    opt.seed = resolve_seed(c.seed, PipelineOptions::default_seed);
    if (serial) opt.policy = ExecutionPolicy::Serial;
    Fixtures fx = fixtures_path.empty() ? Fixtures::defaults() : Fixtures::load(fixtures_path);

    Pipeline pipeline(std::move(fx), opt);
    PipelineReport report = pipeline.run_all();
    std::string text = render_text(report);
    std::cout << text;
    if (!c.report.empty()) write_file(c.report, text);
    if (!c.machine_report.empty()) write_file(c.machine_report, render_machine(report));
    return report.overall_match() ? kMatch : kMismatch;
}

int cmd_push(const Common& c, const std::string& path) {
    JobFile job = parse_job(read_file(path));
    MapDescriptor map = job.map();
    const unsigned trials = c.oracle_trials ? *c.oracle_trials : job.oracle_trials.value_or(0);
    const std::uint64_t seed = resolve_seed(c.seed ? c.seed : job.seed, PipelineOptions::default_seed);

    std::string out;
    int code = kMatch;
    try {
        Poly result = pushforward(map, job.cls);
        out = render(result) + "\n";
        if (trials > 0) {
            bool ok = specialize_oracle(map, job.cls, result, trials, seed);
            out += std::string("oracle: ") + (ok ? "pass" : "FAIL") + " (" + std::to_string(trials) +
                   " trials, seed " + std::to_string(seed) + ")\n";
            if (!ok) code = kMismatch;
        }
    } catch (const DenominatorResidue& e) {
        out = std::string("denominator residue: ") + e.what() + "\n";
        code = kMismatch;
    }
    std::cout << out;
    if (!c.report.empty()) write_file(c.report, out);
    return code;
}

int cmd_nf(const std::string& path, const std::string& text) {
    IdealFile ideal = parse_ideal_file(read_file(path));
    Poly p = parse_poly(text, ideal.table);
    IdealBasis basis = strong_groebner(ideal.generators, MonomialOrder::standard(ideal.table));
    std::cout << render(normal_form(p, basis)) << "\n";
    return kMatch;
}

int cmd_fiber_check(const Common& c, const std::string& path, bool serial) {
    SquareFile sq = parse_square_file(read_file(path));
    const unsigned N = degree_bound(c, sq.degree_bound);
    CartesianReport rep = verify_cartesian(sq.square, N, serial ? ExecutionPolicy::Serial : ExecutionPolicy::Parallel);

    std::string text, machine;
    for (const auto& d : rep.degrees) {
        const char* verdict = d.passed() ? "match" : "mismatch";
        text += "degree " + std::to_string(d.degree) + ": " + (d.passed() ? "pass" : "FAIL") +
                "  A = " + render_group(d.a) + ", fiber product = " + render_group(d.fiber) +
                (d.surjective ? "" : ", not surjective") + (d.injective ? "" : ", not injective") + "\n";
        machine += "degree_" + std::to_string(d.degree) + "\t" + verdict + "\t" + render_group(d.a) + "\t" +
                   render_group(d.fiber) + "\n";
    }
    text += std::string("overall: ") + (rep.passed() ? "match" : "mismatch") + "\n";
    machine += std::string("overall\t") + (rep.passed() ? "match" : "mismatch") + "\t\t\n";
    std::cout << text;
    if (!c.report.empty()) write_file(c.report, text);
    if (!c.machine_report.empty()) write_file(c.machine_report, machine);
    return rep.passed() ? kMatch : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact equivariant intersection-theory engine"};
    app.require_subcommand(1);

    Common common;
    std::string fixtures, job, ideal_file, poly_text, square_file;
    bool serial = false;

    auto* pipeline = app.add_subcommand("pipeline", "run every verification step");
    add_common(pipeline, common);
    pipeline->add_option("--fixtures", fixtures, "override reference values from a file");
    pipeline->add_flag("--serial", serial, "use the serial reference kernels");

    auto* push = app.add_subcommand("push", "equivariant pushforward of a job file");
    add_common(push, common);
    push->add_option("job", job, "job file")->required();

    auto* nf = app.add_subcommand("nf", "normal form modulo an ideal");
    nf->add_option("ideal", ideal_file, "ideal file")->required();
    nf->add_option("poly", poly_text, "polynomial")->required();

    auto* fiber = app.add_subcommand("fiber-check", "verify a cartesian square of rings degree by degree");
    add_common(fiber, common);
    fiber->add_option("square", square_file, "square file")->required();
    fiber->add_flag("--serial", serial, "use the serial reference kernels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kInputError;
    }

    try {
        if (*pipeline) return cmd_pipeline(common, fixtures, serial);
        if (*push) return cmd_push(common, job);
        if (*nf) return cmd_nf(ideal_file, poly_text);
        if (*fiber) return cmd_fiber_check(common, square_file, serial);
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
