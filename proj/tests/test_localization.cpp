#include <doctest.h>

#include "support.hpp"

#include "equichow/localization.hpp"

using namespace equichow;
using equichow::testing::P;

namespace {

TablePtr table() {
    static TablePtr t = VarTable::make({{"h", 1}, {"h1", 1}, {"h2", 1}, {"g1", 1}, {"g2", 1}, {"a", 1},
                                        {"b", 1}, {"d", 1}, {"k1", 1}, {"k2", 1}, {"k3", 1}, {"l2", 2}});
    return t;
}

SpaceFactor factor(unsigned d, const char* w0, const char* w1, const char* h) {
    auto t = table();
    return {d, P(w0, t), P(w1, t), h};
}

Integer factorial(unsigned n) {
    Integer r = 1;
    for (unsigned k = 2; k <= n; ++k) r *= k;
    return r;
}

// Coefficient of h^n once every weight is set to zero.
Integer top_coefficient(const Poly& p, const char* h, unsigned n) {
    Exponents e(p.table()->size(), 0);
    e[p.table()->index(h)] = n;
    return p.coefficient(e);
}

const char* const kIPush = "3*h^2 - 9*h*g1 - 9*h*g2 + 6*g1^2 + 15*g1*g2 + 6*g2^2";

}  // namespace

TEST_CASE("fixed points") {
    SpaceDescriptor s({factor(2, "g1", "g2", "k1")});
    CHECK(enumerate_fixed_points(s) == std::vector<FixedPoint>{{0}, {1}, {2}});
    CHECK(s.dimension() == 2);

    SpaceDescriptor s2({factor(1, "g1", "g2", "k1"), factor(2, "g1", "g2", "k2")});
    auto pts = enumerate_fixed_points(s2);
    CHECK(pts.size() == 6);
    CHECK(pts.front() == FixedPoint{0, 0});
    CHECK(pts.back() == FixedPoint{1, 2});
    CHECK(s2.dimension() == 3);
}

TEST_CASE("point classes and hyperplane restrictions") {
    auto t = table();
    SpaceDescriptor s({factor(1, "g1", "g2", "k1")});
    CHECK(point_class(s, {1}) == P("k1 - g2", t));
    CHECK(point_class(s, {0}) == P("k1 - g1", t));

    SpaceDescriptor q({factor(2, "a", "b", "k1")});
    CHECK(restrict_hyperplane(q, {1}, 0) == P("a + b", t));
    CHECK(restrict_hyperplane(q, {2}, 0) == P("2*a", t));
    CHECK(point_class(q, {0}) == P("(k1 - a - b)*(k1 - 2*a)", t));
    CHECK_THROWS_AS(restrict_hyperplane(q, {3}, 0), InvalidInput);
    CHECK_THROWS_AS(restrict_hyperplane(q, {1}, 1), InvalidInput);
}

TEST_CASE("tangent euler classes") {
    auto t = table();
    SpaceDescriptor s({factor(1, "g1", "g2", "k1")});
    CHECK(tangent_euler(s, {1}).expand(t) == P("g1 - g2", t));
    CHECK(tangent_euler(s, {0}).expand(t) == P("g2 - g1", t));

    SpaceDescriptor q({factor(2, "a", "b", "k1")});
    CHECK(tangent_euler(q, {1}).expand(t) == P("-(a-b)^2", t));
    CHECK(tangent_euler(q, {0}).expand(t) == P("2*(b-a)^2", t));
    auto e = tangent_euler(q, {2});
    REQUIRE(e.forms.size() == 1);
    CHECK(e.forms[0].second == 2);
}

TEST_CASE("a point class restricts to the euler class at its own point") {
    auto t = table();
    SpaceDescriptor s({factor(3, "a", "b", "k1"), factor(2, "g1", "g2", "k2")});
    auto pts = enumerate_fixed_points(s);
    for (const auto& p : pts)
        for (const auto& q : pts) {
            Poly r = restrict_class(s, q, point_class(s, p));
            if (p == q)
                CHECK(r == tangent_euler(s, p).expand(t));
            else
                CHECK(r.is_zero());
        }
}

TEST_CASE("image fixed points") {
    SpaceDescriptor s({factor(1, "g1", "g2", "k1")});
    auto cube = MapDescriptor::multiplication(s, {3});
    CHECK(map_image_fixed_point(cube, {1}) == FixedPoint{3});
    CHECK(map_image_fixed_point(cube, {0}) == FixedPoint{0});
    CHECK(cube.target().factors()[0].degree == 3);

    SpaceDescriptor two({factor(1, "g1", "g2", "k1"), factor(1, "g1", "g2", "k2")});
    auto m = MapDescriptor::multiplication(two, {1, 2});
    CHECK(map_image_fixed_point(m, {1, 0}) == FixedPoint{1});
    CHECK(map_image_fixed_point(m, {1, 1}) == FixedPoint{3});

    SpaceDescriptor diag({factor(1, "g1", "0", "k1"), factor(1, "g2", "0", "k2")});
    auto prod = MapDescriptor::product(diag, {3, 3});
    CHECK(map_image_fixed_point(prod, {1, 0}) == FixedPoint{3, 0});
    CHECK(prod.target().factors()[1].h_var == "h2");
}

TEST_CASE("fixed points map compatibly with hyperplane restrictions") {
    SpaceDescriptor s({factor(1, "a", "b", "k1"), factor(2, "a", "b", "k2"), factor(1, "a", "b", "k3")});
    auto m = MapDescriptor::multiplication(s, {2, 1, 3});
    for (const auto& fp : enumerate_fixed_points(s)) {
        Poly sum(table());
        for (std::size_t j = 0; j < s.size(); ++j)
            sum += Poly::constant(table(), m.components()[0].exponents[j]) * restrict_hyperplane(s, fp, j);
        CHECK(restrict_hyperplane(m.target(), map_image_fixed_point(m, fp), 0) == sum);
    }
}

TEST_CASE("pushforward examples") {
    auto t = table();
    SpaceDescriptor s({factor(1, "g1", "g2", "k1")});
    auto cube = MapDescriptor::multiplication(s, {3});
    Poly one = Poly::constant(t, 1);
    Poly push = pushforward(cube, one);
    CHECK(push == P(kIPush, t));
    CHECK(render(push) == kIPush);
    CHECK(specialize_oracle(cube, one, push, 20, 7));
    CHECK(specialize_oracle(cube, one, 20, 7));

    // the hyperplane pulls back to 3*k1
    Poly push_k = pushforward(cube, P("k1", t));
    CHECK(specialize_oracle(cube, P("3*k1", t), P("h", t) * push, 20, 8));
    CHECK(specialize_oracle(cube, P("k1", t), push_k, 20, 8));

    // identity map: classes come back unchanged
    auto id = MapDescriptor::multiplication(SpaceDescriptor({factor(2, "g1", "g2", "k1")}), {1});
    Poly c = P("2*k1*g1 + 5*k1*g2 - g2^2", t);
    CHECK(pushforward(id, c) == substitute(c, {{"k1", P("h", t)}}));
}

TEST_CASE("the oracle rejects wrong claims") {
    auto t = table();
    auto cube = MapDescriptor::multiplication(SpaceDescriptor({factor(1, "g1", "g2", "k1")}), {3});
    Poly one = Poly::constant(t, 1);
    CHECK_FALSE(specialize_oracle(cube, one, P(kIPush, t) + P("g1^2", t), 20, 1));
    CHECK_FALSE(specialize_oracle(cube, one, P("3*h^2", t), 20, 1));
    CHECK_FALSE(specialize_oracle(cube, one, Poly(t), 20, 1));
}

TEST_CASE("degree of the image") {
    // with zero weights only the top h-power survives, and its coefficient is
    // the integral of (Σ a_j H_j)^dim over the product of projective spaces
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<unsigned> deg(1, 2), expo(1, 3);
    const char* ks[] = {"k1", "k2"};
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<SpaceFactor> fs;
        std::vector<unsigned> ex;
        Integer expected = 1;
        unsigned dim = 0;
        for (int j = 0; j < 2; ++j) {
            fs.push_back(factor(deg(rng), "a", "b", ks[j]));
            ex.push_back(expo(rng));
            dim += fs.back().degree;
            Integer p = 1;
            for (unsigned k = 0; k < fs.back().degree; ++k) p *= ex.back();
            expected *= p;
        }
        expected *= factorial(dim);
        for (const auto& f : fs) expected /= factorial(f.degree);
        auto m = MapDescriptor::multiplication(SpaceDescriptor(fs), ex);
        Poly push = pushforward(m, Poly::constant(table(), 1));
        unsigned codim = m.target().dimension() - dim;
        CHECK(push.grade() == codim);
        CHECK(top_coefficient(push, "h", codim) == expected);
    }
}

TEST_CASE("the target relation pushes to zero") {
    auto t = table();
    auto id = MapDescriptor::multiplication(SpaceDescriptor({factor(2, "a", "b", "k1")}), {1});
    CHECK(pushforward(id, P("(k1-2*b)*(k1-a-b)*(k1-2*a)", t)).is_zero());
    CHECK(pushforward(id, P("(k1-2*b)*(k1-a-b)*(k1-2*a)*(k1+d)", t)).is_zero());
}

TEST_CASE("pushforward of a product map factors") {
    auto t = table();
    SpaceDescriptor diag({factor(1, "g1", "0", "k1"), factor(1, "g2", "0", "k2")});
    auto prod = MapDescriptor::product(diag, {3, 3});
    Poly whole = pushforward(prod, Poly::constant(t, 1));

    auto first = MapDescriptor::multiplication(SpaceDescriptor({factor(1, "g1", "0", "k1")}), {3}, "h1");
    auto second = MapDescriptor::multiplication(SpaceDescriptor({factor(1, "g2", "0", "k2")}), {3}, "h2");
    CHECK(whole == pushforward(first, Poly::constant(t, 1)) * pushforward(second, Poly::constant(t, 1)));

    Poly cls = P("k1*k2", t);
    CHECK(pushforward(prod, cls) == pushforward(first, P("k1", t)) * pushforward(second, P("k2", t)));
}

TEST_CASE("serial and parallel pushforwards agree") {
    auto t = table();
    SpaceDescriptor s({factor(2, "a", "b", "k1"), factor(1, "a", "b", "k2")});
    auto m = MapDescriptor::multiplication(s, {2, 3});
    std::mt19937_64 rng(22);
    auto sub = VarTable::make({{"k1", 1}, {"k2", 1}, {"a", 1}, {"b", 1}, {"d", 1}});
    for (int k = 0; k < 10; ++k) {
        Poly cls = testing::random_poly(rng, sub, 3, 4).rebase(t);
        Poly serial = pushforward(m, cls, ExecutionPolicy::Serial);
        CHECK(serial == pushforward(m, cls, ExecutionPolicy::Parallel));
        CHECK(specialize_oracle(m, cls, serial, 3, 100 + k));
    }
}

TEST_CASE("invalid descriptors") {
    auto t = table();
    CHECK_THROWS_AS(SpaceDescriptor({factor(1, "g1", "g1", "k1")}), InvalidInput);
    CHECK_THROWS_AS(SpaceDescriptor({factor(1, "g1", "g2", "zz")}), InvalidInput);
    CHECK_THROWS_AS(SpaceDescriptor({factor(1, "g1", "g2", "l2")}), InvalidInput);
    CHECK_THROWS_AS(SpaceDescriptor({factor(1, "g1", "g2+1", "k1")}), InvalidInput);
    CHECK_THROWS_AS(SpaceDescriptor({factor(1, "g1*g2", "g2", "k1")}), InvalidInput);
    CHECK_THROWS_AS(SpaceDescriptor({factor(1, "k1", "g2", "k1")}), InvalidInput);
    CHECK_THROWS_AS(SpaceDescriptor({factor(0, "g1", "g2", "k1")}), InvalidInput);
    CHECK_THROWS_AS(SpaceDescriptor({factor(1, "g1", "g2", "k1"), factor(1, "g1", "g2", "k1")}), InvalidInput);
    CHECK_THROWS_AS(SpaceDescriptor(std::vector<SpaceFactor>{}), InvalidInput);

    SpaceDescriptor two({factor(1, "g1", "g2", "k1"), factor(1, "a", "b", "k2")});
    CHECK_THROWS_AS(MapDescriptor::multiplication(two, {1, 1}), InvalidInput);  // weights differ
    CHECK_THROWS_AS(MapDescriptor::product(two, {1}), InvalidInput);
    CHECK_THROWS_AS(MapDescriptor::product(two, {0, 1}), InvalidInput);
    CHECK_THROWS_AS(MapDescriptor(two, {MapComponent{{0}, {1}, "h"}}), InvalidInput);  // factor 1 uncovered

    auto cube = MapDescriptor::multiplication(SpaceDescriptor({factor(1, "g1", "g2", "k1")}), {3});
    CHECK_THROWS_AS(pushforward(cube, P("h", t)), InvalidInput);
    auto other = VarTable::make({{"k1", 1}});
    CHECK_THROWS_AS(pushforward(cube, P("k1", other)), InvalidInput);
}
