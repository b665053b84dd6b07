#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "equichow/jobfile.hpp"

using namespace equichow;
namespace fs = std::filesystem;

namespace {

struct Run {
    std::string out;
    int code = -1;
};

Run run(const std::string& args, const std::string& env = "") {
    std::string cmd = "env -u EQUICHOW_SEED " + env + (env.empty() ? "" : " ") + "'" EQUICHOW_BIN "' " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string job(const char* name) { return std::string("'" EQUICHOW_JOBS_DIR "/") + name + "'"; }

fs::path scratch() {
    fs::path p = fs::temp_directory_path() / ("equichow_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
}

std::string write(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
    return "'" + p.string() + "'";
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("push golden outputs") {
    auto r = run("push " + job("i_push.job") + " --oracle-trials 0");
    CHECK(r.code == 0);
    CHECK(r.out == "3*h^2 - 9*h*g1 - 9*h*g2 + 6*g1^2 + 15*g1*g2 + 6*g2^2\n");

    r = run("push " + job("i_push.job"));
    CHECK(r.code == 0);
    CHECK(r.out.find("oracle: pass (20 trials, seed 20240917)") != std::string::npos);

    r = run("push " + job("identity.job"));
    CHECK(r.code == 0);
    CHECK(r.out.rfind("2*h*g1 + 5*h*g2 - g2^2\n", 0) == 0);

    CHECK(run("push " + job("rho1_h1.job")).code == 0);
    CHECK(run("push " + job("product.job")).code == 0);
}

TEST_CASE("nf golden outputs") {
    auto r = run("nf " + job("divisor.ideal") + " 'x^3'");
    CHECK(r.code == 0);
    CHECK(r.out == "l1^2*x\n");
    CHECK(run("nf " + job("divisor.ideal") + " '3*x + l2'").out == "l2 + x\n");
    CHECK(run("nf " + job("divisor.ideal") + " 'x^^2'").code == 2);
    CHECK(run("nf " + job("divisor.ideal") + " 'y'").code == 2);
}

TEST_CASE("fiber-check exit codes") {
    auto r = run("fiber-check " + job("patching.square") + " --degree-bound 4");
    CHECK(r.code == 0);
    CHECK(r.out.find("degree 2: pass  A = Z^4 + Z/2, fiber product = Z^4 + Z/2") != std::string::npos);
    CHECK(r.out.find("overall: match") != std::string::npos);

    r = run("fiber-check " + job("patching_control.square") + " --degree-bound 4 --serial");
    CHECK(r.code == 1);
    CHECK(r.out.find("degree 2: FAIL") != std::string::npos);
}

TEST_CASE("pipeline exit codes and reports") {
    fs::path dir = scratch();
    auto r = run("pipeline --degree-bound 2 --oracle-trials 3 --report '" + (dir / "r.txt").string() +
                 "' --machine-report '" + (dir / "r.tsv").string() + "'");
    CHECK(r.code == 0);
    CHECK(slurp(dir / "r.txt") == r.out);
    std::string tsv = slurp(dir / "r.tsv");
    CHECK(tsv.find("overall\tmatch") != std::string::npos);

    CHECK(run("pipeline --degree-bound 2 --oracle-trials 3 --fixtures " + job("corrupted.fixtures")).code == 1);
    CHECK(run("pipeline --degree-bound -1").code == 2);
    CHECK(run("pipeline --fixtures /nonexistent/file").code == 2);
    CHECK(run("pipeline --degree-bound 0 --report /nonexistent/dir/out.txt").code == 2);
    CHECK(run("pipeline --fixtures " + write(dir / "bad.fixtures", "expected.bogus = 1\n")).code == 2);
    fs::remove_all(dir);
}

TEST_CASE("input errors exit with 2") {
    CHECK(run("push " + job("equal_weights.job")).code == 2);
    CHECK(run("push /nonexistent.job").code == 2);
    CHECK(run("").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("push").code == 2);
    CHECK(run("push " + job("i_push.job") + " --seed notanumber").code == 2);
    CHECK(run("--help").code == 0);
}

TEST_CASE("seed precedence") {
    auto with_env = run("push " + job("i_push.job") + " --oracle-trials 2", "EQUICHOW_SEED=77");
    CHECK(with_env.out.find("seed 77)") != std::string::npos);
    auto flag = run("push " + job("i_push.job") + " --oracle-trials 2 --seed 5", "EQUICHOW_SEED=77");
    CHECK(flag.out.find("seed 5)") != std::string::npos);
    CHECK(run("push " + job("i_push.job"), "EQUICHOW_SEED=xyz").code == 2);

    fs::path dir = scratch();
    std::string text = slurp(EQUICHOW_JOBS_DIR "/i_push.job") + "seed = 123\n";
    auto from_job = run("push " + write(dir / "seeded.job", text), "EQUICHOW_SEED=77");
    CHECK(from_job.out.find("seed 123)") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("job files round trip") {
    for (const char* name : {"i_push.job", "rho1_h1.job", "identity.job", "product.job"}) {
        INFO(name);
        JobFile a = parse_job(read_file(std::string(EQUICHOW_JOBS_DIR "/") + name));
        std::string text = render_job(a);
        JobFile b = parse_job(text);
        CHECK(a == b);
        CHECK(render_job(b) == text);
    }
}

TEST_CASE("job parse errors point at the offending line") {
    const std::string text =
        "[vars]\n"
        "h 1\n"
        "g1 1\n"
        "g2 1\n"
        "k 1\n"
        "[space]\n"
        "factor d=1 w0=g1 w1=g2 h=k\n"
        "[map]\n"
        "exponents = 3\n"
        "[class]\n"
        "k + * g1\n";
    try {
        parse_job(text);
        FAIL("no exception");
    } catch (const ParseError& e) {
        CHECK(e.line() == 11);
        CHECK(e.column() == 5);
    }

    try {
        parse_job("[vars]\nh 1\n[space]\nfactor d=1 w0=g1 w1=g2 h=k q=1\n");
        FAIL("no exception");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
    }
    CHECK_THROWS_AS(parse_job("h 1\n"), ParseError);
    CHECK_THROWS_AS(parse_job("[vars]\nh 1\n[nonsense]\n"), ParseError);

    fs::path dir = scratch();
    auto r = run("push " + write(dir / "bad.job", text));
    CHECK(r.code == 2);
    fs::remove_all(dir);
}

TEST_CASE("ideal and square files") {
    IdealFile f = parse_ideal_file(read_file(EQUICHOW_JOBS_DIR "/divisor.ideal"));
    CHECK(f.generators.size() == 2);
    CHECK(render(f.generators[1]) == "l1*x + x^2");
    CHECK_THROWS_AS(parse_ideal_file("[ideal]\nx\n"), ParseError);
    CHECK_THROWS_AS(parse_square_file("[ring A]\nvars = l1:1\n"), InvalidInput);
    CHECK_THROWS_AS(parse_square_file("[ring A]\nvars = l1\n"), ParseError);
}
