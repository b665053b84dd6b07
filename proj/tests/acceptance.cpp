// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Reference values are written out here rather than read
// from the fixture defaults, so a bad default cannot hide a wrong result.

#include <iostream>
#include <sstream>

#include "equichow/pipeline.hpp"
#include "support.hpp"

using namespace equichow;
using equichow::testing::P;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> details;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            details.push_back(what);
        }
    }
};

int failures = 0;

void report(int n, const std::string& title, const Outcome& o) {
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  " << title << "\n";
    for (const auto& d : o.details) std::cout << "    " << d << "\n";
    if (!o.pass) ++failures;
}

template <class F>
void criterion(int n, const std::string& title, F body) {
    Outcome o;
    try {
        body(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.details.push_back(std::string("exception: ") + e.what());
    }
    report(n, title, o);
}

const StepReport& step(const PipelineReport& r, const std::string& name) {
    const StepReport* s = r.find(name);
    if (!s) throw std::runtime_error("missing step " + name);
    return *s;
}

// The engine's output rendered against a display parsed over the same variables.
bool same_poly(const std::string& computed, const std::string& display, const TablePtr& t) {
    return parse_poly(computed, t) == parse_poly(display, t);
}

std::string canonical(const std::string& display, const TablePtr& t) { return render(parse_poly(display, t)); }

}  // namespace

int main() {
    PipelineOptions opt;  // degree bound 8, 20 oracle trials, fixed seed
    const PipelineReport full = run_all(Fixtures::defaults(), opt);

    auto loc = VarTable::make({{"h", 1}, {"g1", 1}, {"g2", 1}});
    auto base = VarTable::make({{"l1", 1}, {"l2", 2}, {"d1", 1}});

    criterion(1, "localization formulas", [&](Outcome& o) {
        const std::pair<const char*, const char*> displays[] = {
            {"localization.i_1", "3*(h-2*g1-g2)*(h-g1-2*g2)"},
            {"localization.rho1_1", "3*(4*h^2-24*h*(g1+g2)+20*(2*g1+g2)*(g1+2*g2)-36*g1*g2)"},
            {"localization.rho1_h1", "h^3-3*(g1+g2)*h^2+(2*(g1+g2)^2-44*g1*g2)*h+108*g1*g2*(g1+g2)"},
            {"localization.rho2_1", "9*(h-5*g1-g2)*(h-4*g1-2*g2)*(h-2*g1-4*g2)*(h-g1-5*g2)"},
        };
        const bool oracle_ok = step(full, "localization.oracle").verdict == Verdict::Match;
        for (const auto& [name, display] : displays) {
            const std::string& got = step(full, name).computed;
            if (same_poly(got, display, loc)) continue;
            const std::string n = name;
            const bool soft = n == "localization.rho1_h1" || n == "localization.rho2_1";
            o.details.push_back(n + ": engine gives " + got + ", display is " + canonical(display, loc));
            if (!soft || !oracle_ok) o.pass = false;
        }
    });

    criterion(2, "oracle agreement, 20 trials per pushforward", [&](Outcome& o) {
        const StepReport& s = step(full, "localization.oracle");
        o.require(s.verdict == Verdict::Match, "oracle: " + s.computed);
        o.require(step(full, "oracle.all_pushforwards").verdict == Verdict::Match, "sweep over all pushforwards failed");
    });

    criterion(3, "[D3] = 24*l1^2 - 48*l2", [&](Outcome& o) {
        const std::string& got = step(full, "D3.class").computed;
        o.require(same_poly(got, "24*l1^2-48*l2", base), "got " + got);
    });

    criterion(4, "zeta restriction = 20*l1*l2", [&](Outcome& o) {
        const std::string& got = step(full, "zeta.restricted").computed;
        o.require(same_poly(got, "20*l1*l2", base), "got " + got);
    });

    criterion(5, "[D33]: diagonal, torus part, membership", [&](Outcome& o) {
        const std::string& a = step(full, "D33.diagonal").computed;
        o.require(same_poly(a, "0", base), "diagonal part: " + a);
        const std::string& b = step(full, "D33.torus").computed;
        o.require(same_poly(b, "36*l2*(d1^2-2*l1*d1+16*l2-3*l1^2)", base), "torus part: " + b);
        o.require(step(full, "D33.membership").computed == "contained", "membership does not hold");
    });

    criterion(6, "patching up to degree 8 with negative control", [&](Outcome& o) {
        o.require(full.degree_bound == 8, "pipeline ran with degree bound " + std::to_string(full.degree_bound));
        o.require(step(full, "patching.nonzerodivisor").computed == "yes", "d1 is a zero divisor");
        o.require(step(full, "patching.cartesian").computed == "passes in degrees 0..8",
                  "cartesian: " + step(full, "patching.cartesian").computed);
        o.require(step(full, "patching.control").computed == "fails in degree 2",
                  "control: " + step(full, "patching.control").computed);
    });

    criterion(7, "gysin values and projection formula", [&](Outcome& o) {
        auto tP = VarTable::make({{"l1", 1}, {"l2", 2}, {"d1", 1}, {"e", 2}});
        auto tP1 = VarTable::make({{"l1", 1}, {"l2", 2}, {"d1", 1}, {"x", 1}});
        RingPresentation pres = RingPresentation::parse(tP, {"2*e", "e*(l1*d1+e)"});
        RingPresentation pres1 = RingPresentation::parse(tP1, {"2*x", "x*(x+l1)"});
        Gysin g(pres1, pres);
        const std::pair<const char*, const char*> values[] = {
            {"1", "d1"}, {"x", "e"}, {"x^2", "l1*e"}, {"l1+d1+x", "e+d1*(l1+d1)"}};
        for (const auto& [in, out] : values) {
            Poly got = g(P(in, tP1));
            o.require(got == P(out, tP), std::string("gysin(") + in + ") = " + render(got));
        }

        RingHom i(pres, pres1, {{"e", P("d1*x", tP1)}});
        IdealBasis basis = strong_groebner(pres.relations, MonomialOrder::standard(tP));
        std::mt19937_64 rng(PipelineOptions::default_seed);
        int bad = 0;
        for (int k = 0; k < 100; ++k) {
            unsigned da = std::uniform_int_distribution<unsigned>(0, 6)(rng);
            unsigned db = std::uniform_int_distribution<unsigned>(0, 6 - da)(rng);
            Poly a = testing::random_homogeneous(rng, tP, da, 3, 6);
            Poly b = testing::random_homogeneous(rng, tP1, db, 3, 6);
            if (!(g(hom_apply(i, a) * b) == normal_form(a * g(b), basis))) ++bad;
        }
        o.require(bad == 0, "projection formula fails on " + std::to_string(bad) + " of 100 pairs");
    });

    criterion(8, "final relation ideal", [&](Outcome& o) {
        const StepReport& s = step(full, "final.ideal");
        o.require(s.verdict == Verdict::Match, "computed " + s.computed);
        // the same comparison against the ideal as written here
        std::vector<Poly> expected;
        for (const char* g : {"2*d1^2+2*l1*d1", "d1^3+d1^2*l1", "24*l1^2-48*l2", "20*l1*l2-4*d1*l2"})
            expected.push_back(P(g, base));
        std::string inner = s.computed.substr(1, s.computed.size() - 2);
        std::vector<Poly> computed;
        std::stringstream ss(inner);
        for (std::string item; std::getline(ss, item, ',');) computed.push_back(parse_poly(item, base));
        o.require(ideal_equal(computed, expected, MonomialOrder::standard(base)), "ideals differ");
    });

    criterion(9, "kernel properties", [&](Outcome& o) {
        std::mt19937_64 rng(PipelineOptions::default_seed);
        auto t = VarTable::make({{"l1", 1}, {"l2", 2}, {"d1", 1}, {"e", 2}});
        auto order = MonomialOrder::standard(t);

        IdealBasis basis = strong_groebner({P("2*e", t), P("e*(l1*d1+e)", t), P("3*l1*d1-l2", t)}, order);
        int idem = 0;
        for (int k = 0; k < 50; ++k) {
            Poly r = normal_form(testing::random_poly(rng, t, 4, 6, 9), basis);
            idem += normal_form(r, basis) == r;
        }
        o.require(idem == 50, "normal form idempotence: " + std::to_string(idem) + "/50");

        int agree = 0;
        for (int k = 0; k < 50; ++k) {
            std::vector<Poly> g = {testing::random_homogeneous(rng, t, 1, 3, 4),
                                   testing::random_homogeneous(rng, t, 2, 3, 4)};
            Poly p = testing::random_homogeneous(rng, t, 3, 4, 4);
            if (k % 2 == 0) {
                p = Poly(t);
                for (const auto& gi : g)
                    if (!gi.is_zero()) p += gi * testing::random_homogeneous(rng, t, 3 - *gi.grade(), 3, 4);
            }
            agree += ideal_contains(p, g, order) == testing::naive_contains(p, g);
        }
        o.require(agree == 50, "membership vs naive search: " + std::to_string(agree) + "/50");

        int snf = 0;
        for (int k = 0; k < 50; ++k) {
            std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
            IntMatrix m = testing::random_matrix(rng, r, c);
            IntMatrix m2 = testing::random_unimodular(rng, r) * m * testing::random_unimodular(rng, c);
            snf += smith_normal_form(m).factors == smith_normal_form(m2).factors;
        }
        o.require(snf == 50, "SNF invariance: " + std::to_string(snf) + "/50");

        int div = 0, tried = 0;
        while (tried < 200) {
            Poly p = testing::random_poly(rng, t, 3, 4), q = testing::random_poly(rng, t, 2, 3);
            if (q.is_zero()) continue;
            ++tried;
            auto r = exact_divide(p * q, q);
            div += r && *r == p;
        }
        o.require(div == 200, "exact_divide round trip: " + std::to_string(div) + "/200");
    });

    criterion(10, "determinism and rendering round trip", [&](Outcome& o) {
        const PipelineReport again = run_all(Fixtures::defaults(), opt);
        o.require(render_machine(full) == render_machine(again), "machine reports differ between runs");
        PipelineOptions serial = opt;
        serial.policy = ExecutionPolicy::Serial;
        o.require(render_machine(run_all(Fixtures::defaults(), serial)) == render_machine(full),
                  "serial and parallel reports differ");

        std::mt19937_64 rng(PipelineOptions::default_seed);
        auto t = VarTable::make({{"l1", 1}, {"l2", 2}, {"d1", 1}, {"e", 2}, {"h", 1}, {"g1", 1}});
        int ok = 0;
        for (int k = 0; k < 200; ++k) {
            Poly p = testing::random_poly(rng, t, 5, 7, 1000);
            ok += parse_poly(render(p), t) == p;
        }
        o.require(ok == 200, "render/parse round trip: " + std::to_string(ok) + "/200");
    });

    std::cout << (failures ? "acceptance: FAIL" : "acceptance: PASS") << " (" << 10 - failures << "/10)\n";
    return failures ? 1 : 0;
}
