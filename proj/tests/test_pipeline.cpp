#include <doctest.h>

#include <algorithm>

#include "equichow/pipeline.hpp"

using namespace equichow;

namespace {

PipelineOptions quick(unsigned bound = 4) {
    PipelineOptions o;
    o.degree_bound = bound;
    o.oracle_trials = 5;
    return o;
}

const PipelineReport& default_report() {
    static PipelineReport r = run_all(Fixtures::defaults(), quick());
    return r;
}

std::string computed(const PipelineReport& r, const std::string& step) {
    const StepReport* s = r.find(step);
    REQUIRE(s != nullptr);
    return s->computed;
}

}  // namespace

TEST_CASE("every checked step matches") {
    const auto& r = default_report();
    CHECK(r.overall_match());
    int matches = 0;
    for (const auto& s : r.steps) {
        INFO(s.name);
        CHECK(s.verdict != Verdict::Mismatch);
        matches += s.verdict == Verdict::Match;
        bool as_ideals = std::find(s.notes.begin(), s.notes.end(), "compared as ideals") != s.notes.end();
        if (s.verdict == Verdict::Match && !as_ideals) CHECK(s.computed == s.expected);
    }
    CHECK(matches >= 20);
}

TEST_CASE("computed values") {
    const auto& r = default_report();
    CHECK(computed(r, "localization.i_1") == "3*h^2 - 9*h*g1 - 9*h*g2 + 6*g1^2 + 15*g1*g2 + 6*g2^2");
    CHECK(computed(r, "D3.class") == "24*l1^2 - 48*l2");
    CHECK(computed(r, "zeta.restricted") == "20*l1*l2");
    CHECK(computed(r, "D33.diagonal") == "0");
    CHECK(computed(r, "D33.membership") == "contained");
    CHECK(computed(r, "patching.control") == "fails in degree 2");
    CHECK(computed(r, "transfer.one") == "2");
    CHECK(r.find("no.such.step") == nullptr);
}

TEST_CASE("steps can run on their own") {
    Pipeline p(Fixtures::defaults(), quick(2));
    auto d3 = p.step_D3();
    REQUIRE_FALSE(d3.empty());
    CHECK(d3.front().name == "D3.class");
    CHECK(d3.front().verdict == Verdict::Match);
    auto sweep = p.step_oracle_sweep();
    REQUIRE(sweep.size() == 1);
    CHECK(sweep.front().verdict == Verdict::Match);
}

TEST_CASE("degree bounds 0 and 2") {
    for (unsigned n : {0u, 2u}) {
        auto r = run_all(Fixtures::defaults(), quick(n));
        CHECK(r.overall_match());
        CHECK(r.degree_bound == n);
        CHECK(computed(r, "patching.cartesian") == "passes in degrees 0.." + std::to_string(n));
    }
}

TEST_CASE("a corrupted reference ideal is reported") {
    Fixtures fx = Fixtures::defaults();
    fx.set("expected.final_ideal", "2*d1^2+2*l1*d1, d1^3+d1^2*l1, 24*l1^2-48*l2, 20*l1*l2-2*d1*l2");
    auto r = run_all(fx, quick(2));
    CHECK_FALSE(r.overall_match());
    const StepReport* s = r.find("final.ideal");
    REQUIRE(s);
    CHECK(s->verdict == Verdict::Mismatch);
    // nothing else is affected
    for (const auto& other : r.steps)
        if (other.name != "final.ideal") CHECK(other.verdict != Verdict::Mismatch);
}

TEST_CASE("a wrong reference polynomial is reported") {
    Fixtures fx = Fixtures::defaults();
    fx.set("expected.d3", "24*l1^2 - 46*l2");
    auto r = run_all(fx, quick(2));
    CHECK_FALSE(r.overall_match());
    CHECK(r.find("D3.class")->verdict == Verdict::Mismatch);
}

TEST_CASE("reports are deterministic") {
    auto a = run_all(Fixtures::defaults(), quick(3));
    auto b = run_all(Fixtures::defaults(), quick(3));
    CHECK(render_machine(a) == render_machine(b));
    CHECK(render_text(a, false) == render_text(b, false));

    PipelineOptions serial = quick(3);
    serial.policy = ExecutionPolicy::Serial;
    CHECK(render_machine(run_all(Fixtures::defaults(), serial)) == render_machine(a));
}

TEST_CASE("machine report layout") {
    std::string m = render_machine(default_report());
    std::size_t lines = 0, pos = 0;
    while ((pos = m.find('\n', pos)) != std::string::npos) ++lines, ++pos;
    CHECK(lines == default_report().steps.size() + 1);
    CHECK(m.rfind("overall\tmatch", 0) != 0);
    CHECK(m.find("\noverall\tmatch") != std::string::npos);
    CHECK(m.find("D3.class\tmatch\t24*l1^2 - 48*l2\t24*l1^2 - 48*l2\n") != std::string::npos);
}

TEST_CASE("fixture files") {
    Fixtures fx = Fixtures::parse("# comment\n\nexpected.d3 = 1\n  character.uv =d1  \n");
    CHECK(fx.get("expected.d3") == "1");
    CHECK(fx.get("character.uv") == "d1");
    CHECK(fx.get("p1.relations") == Fixtures::defaults().get("p1.relations"));

    Fixtures round = Fixtures::parse(Fixtures::defaults().render());
    CHECK(round.values() == Fixtures::defaults().values());

    try {
        Fixtures::parse("expected.d3 = 1\nexpected.nope = 2\n");
        FAIL("no exception");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(Fixtures::parse("expected.d3\n"), ParseError);
    CHECK_THROWS_AS(Fixtures::defaults().get("nope"), InvalidInput);
    CHECK_THROWS_AS(Fixtures::load("/nonexistent/fixtures"), InvalidInput);
}

TEST_CASE("malformed fixture values are input errors") {
    Fixtures fx = Fixtures::defaults();
    fx.set("expected.d3", "24*l1^2 -");
    CHECK_THROWS_AS(run_all(fx, quick(2)), InvalidInput);
}
