#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "gint/geometry.hpp"
#include "gint/vector_value.hpp"

using namespace gint;

namespace {

const Box unit2(Interval1(0.0, 1.0), Interval1(0.0, 1.0));

}  // namespace

TEST_CASE("intervals reject zero width and inverted ends") {
    CHECK_THROWS_AS(Interval1(1.0, 1.0), GeometryError);
    CHECK_THROWS_AS(Interval1(2.0, 1.0), GeometryError);
    CHECK_NOTHROW(Interval1(0.0, 1e-300));
}

TEST_CASE("measure") {
    CHECK(measure(Interval1(0.0, 1.0)) == 1.0);
    CHECK(measure(Box(Interval1(0.0, 1.0), Interval1(0.0, 2.0))) == 2.0);
    CHECK(measure(Box(Interval1(0.25, 0.75), Interval1(0.5, 1.0))) == 0.25);
}

TEST_CASE("ball_contains uses the open max-norm ball") {
    CHECK(ball_contains(unit2, Point(0.5, 0.5), 0.6));
    CHECK_FALSE(ball_contains(unit2, Point(0.5, 0.5), 0.5));
    CHECK(ball_contains(Box(Interval1(0.0, 0.5), Interval1(0.0, 0.5)), Point(1.0, 1.0), 1.2));
    CHECK_THROWS_AS(ball_contains(unit2, Point(0.5), 1.0), GeometryError);
}

TEST_CASE("intersect keeps degenerate overlaps") {
    const Box a(Interval1(0.0, 1.0)), b(Interval1(1.0, 2.0)), c(Interval1(2.0, 3.0));
    auto ab = intersect(a, b);
    REQUIRE(ab);
    CHECK(ab->degenerate());
    CHECK(ab->lo[0] == 1.0);
    CHECK(ab->hi[0] == 1.0);
    CHECK(nonoverlapping(a, b));
    CHECK_FALSE(intersect(a, c));

    const Box d(Interval1(0.5, 2.0), Interval1(0.0, 1.0));
    auto ud = intersect(unit2, d);
    REQUIRE(ud);
    CHECK(ud->measure() == 0.5);
    CHECK(ud->lo[0] == 0.5);
    CHECK(ud->hi[0] == 1.0);
    CHECK_FALSE(nonoverlapping(unit2, d));

    CHECK_THROWS_AS(intersect(a, unit2), GeometryError);
}

TEST_CASE("geometry properties on random boxes") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    auto iv = [&] {
        double a = u(rng), b = u(rng);
        if (a > b) std::swap(a, b);
        if (a == b) b = a + 0.5;
        return Interval1(a, b);
    };
    for (int n = 0; n < 2000; ++n) {
        const Interval1 x = iv(), y = iv();
        const Box b(x, y);
        CHECK(measure(product(x, y)) == measure(x) * measure(y));

        const Box other(iv(), iv());
        CHECK(overlap_measure(b, other) == overlap_measure(other, b));
        auto self = intersect(b, b);
        REQUIRE(self);
        CHECK(self->measure() == b.measure());
        CHECK(self->lo[0] == x.lo());
        CHECK(self->hi[1] == y.hi());

        const Point t(u(rng), u(rng));
        const double r = std::abs(u(rng)) + 1e-3;
        if (ball_contains(b, t, r)) {
            CHECK(ball_contains(b, t, r * 1.5));
            CHECK(ball_contains(b, t, r + 1e-9));
        }
    }
}

TEST_CASE("dyadic subdivisions telescope") {
    const Box dom(Interval1(-1.0, 3.0), Interval1(0.5, 1.25));
    std::vector<Box> cells{dom};
    std::mt19937_64 rng(5);
    for (int step = 0; step < 400; ++step) {
        std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
        const std::size_t i = pick(rng);
        std::array<Box, 4> kids;
        const int n = cells[i].bisect(kids);
        cells[i] = kids[0];
        for (int k = 1; k < n; ++k) cells.push_back(kids[static_cast<std::size_t>(k)]);
    }
    double s = 0.0;
    for (const auto& c : cells) s += c.measure();
    CHECK(std::abs(s - dom.measure()) <= 4.0 * cells.size() * std::numeric_limits<double>::epsilon() * dom.measure());
}

TEST_CASE("vector norms") {
    const Vec v{3.0, -4.0};
    CHECK(v.norm(Norm::euclid) == 5.0);
    CHECK(v.norm(Norm::max) == 4.0);
    CHECK(v.norm(Norm::sum) == 7.0);
    CHECK(Vec::zero(3).norm() == 0.0);
    CHECK(Vec::zero(3).is_zero());
    CHECK_THROWS(Vec{1.0} + Vec{1.0, 2.0});
    CHECK(parse_norm("max") == Norm::max);
    CHECK_THROWS(parse_norm("l2"));

    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int n = 0; n < 500; ++n) {
        const Vec a{g(rng), g(rng), g(rng)}, b{g(rng), g(rng), g(rng)};
        for (Norm nm : {Norm::euclid, Norm::max, Norm::sum}) {
            CHECK(a.norm(nm) >= 0.0);
            CHECK((a + b).norm(nm) <= (a.norm(nm) + b.norm(nm)) * (1 + 1e-15));
        }
    }
}
