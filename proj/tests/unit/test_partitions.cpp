#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "gint/gauges.hpp"
#include "gint/partitions.hpp"

using namespace gint;

namespace {

const Box unit1(Interval1(0.0, 1.0));
const Box unit2(Interval1(0.0, 1.0), Interval1(0.0, 1.0));

Gauge random_gauge(std::mt19937_64& rng, const Box& dom) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double base = 0.02 + 0.5 * u(rng);
    if (u(rng) < 0.5) return constant_gauge(dom, base);
    std::vector<Locus> loci;
    const int n = 1 + static_cast<int>(3 * u(rng));
    for (int i = 0; i < n; ++i)
        loci.push_back(dom.dim() == 1 ? Locus::point1(u(rng)) : Locus::point2(u(rng), u(rng)));
    return singularity_gauge(dom, loci, base, (1.1 + 4.0 * u(rng)) / base);
}

}  // namespace

TEST_CASE("validate reports overlaps and HK tags outside cells") {
    const TaggedPartition p(unit1, Discipline::mcshane,
                            {{Point(0.25), Box(Interval1(0.0, 0.5))}, {Point(0.5), Box(Interval1(0.4, 1.0))}});
    const auto rep = validate(p, true);
    REQUIRE(rep.overlapping_pairs.size() == 1);
    CHECK(rep.overlapping_pairs[0] == std::pair<std::size_t, std::size_t>{0, 1});
    CHECK_FALSE(rep.valid());

    const TaggedPartition q(unit1, Discipline::hk,
                            {{Point(0.9), Box(Interval1(0.0, 0.5))}, {Point(0.75), Box(Interval1(0.5, 1.0))}});
    const auto rq = validate(q, true);
    REQUIRE(rq.tags_outside_cell.size() == 1);
    CHECK(rq.tags_outside_cell[0] == 0);
    CHECK(rq.overlapping_pairs.empty());

    // the same items as a McShane partition are fine
    const TaggedPartition m(unit1, Discipline::mcshane, q.items());
    CHECK(validate(m, true).valid());
}

TEST_CASE("validate detects a cover deficit") {
    const TaggedPartition p(unit1, Discipline::mcshane, {{Point(0.25), Box(Interval1(0.0, 0.5))}});
    CHECK(validate(p, false).valid());
    const auto rep = validate(p, true);
    CHECK_FALSE(rep.valid());
    CHECK(rep.cover_deficit == doctest::Approx(0.5));
}

TEST_CASE("cousin partition for delta = 0.3 on [0,1]") {
    const auto p = cousin_partition(unit1, constant_gauge(unit1, 0.3), Discipline::hk);
    REQUIRE(p.size() == 2);
    CHECK(p[0].cell == Box(Interval1(0.0, 0.5)));
    CHECK(p[1].cell == Box(Interval1(0.5, 1.0)));
    CHECK(p[0].tag[0] == 0.25);
    CHECK(p[1].tag[0] == 0.75);
}

TEST_CASE("null-avoiding tags miss the rationals") {
    const NullSet q = NullSet::rationals();
    const auto p = cousin_partition(unit1, constant_gauge(unit1, 0.3), Discipline::mcshane, TagStrategy::null_avoiding(q));
    REQUIRE(p.size() == 2);
    for (const auto& it : p) {
        CHECK_FALSE(q.contains(it.tag));
        CHECK(it.cell.contains(it.tag));
    }
    CHECK(is_delta_fine(p, constant_gauge(unit1, 0.3)));

    const auto fine = cousin_partition(unit1, constant_gauge(unit1, 1.0 / 300), Discipline::mcshane);
    const auto moved = retag(fine, TagStrategy::null_avoiding(q));
    for (const auto& it : moved) CHECK_FALSE(q.contains(it.tag));
    CHECK(validate(moved, true).valid());
}

TEST_CASE("non-center strategies need McShane") {
    CHECK_THROWS_AS(cousin_partition(unit1, constant_gauge(unit1, 0.3), Discipline::hk, TagStrategy::fixed_corner()),
                    std::invalid_argument);
}

TEST_CASE("depth budget") {
    CousinOptions o;
    o.max_depth = 3;
    CHECK_THROWS_AS(cousin_partition(unit1, constant_gauge(unit1, 1e-3), Discipline::hk, TagStrategy::center(), o),
                    RefinementDepthExceeded);
    CHECK_THROWS_AS(cousin_partition(unit2, constant_gauge(unit2, 1e-3), Discipline::hk, TagStrategy::center(), o),
                    RefinementDepthExceeded);
}

TEST_CASE("the constant-gauge 1D path matches the general generator") {
    // an empty hint sends the run through the general code
    CousinOptions general;
    general.hint = ResolutionHint{};
    const Box dom(Interval1(-0.3, 1.7));
    for (double r : {0.9, 0.3, 0.01, 1e-4}) {
        for (Discipline d : {Discipline::mcshane, Discipline::hk}) {
            const Gauge g = constant_gauge(dom, r);
            const auto a = cousin_partition(dom, g, d);
            const auto b = cousin_partition(dom, g, d, TagStrategy::center(), general);
            REQUIRE(a.size() == b.size());
            CHECK(a.items() == b.items());
        }
    }
}

TEST_CASE("cousin output is full, valid and fine for random gauges") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n < 300; ++n) {
        const bool two = n % 2 == 1;
        const Box dom = two ? unit2 : unit1;
        const Gauge g = random_gauge(rng, dom);
        const Discipline d = u(rng) < 0.5 ? Discipline::mcshane : Discipline::hk;
        TagStrategy s = TagStrategy::center();
        if (d == Discipline::mcshane && u(rng) < 0.5) s = TagStrategy::null_avoiding(two ? NullSet::cross(NullSet::rationals(), NullSet::rationals()) : NullSet::rationals());
        const auto p = cousin_partition(dom, g, d, s);
        const auto rep = validate(p, true);
        CHECK_MESSAGE(rep.valid(), rep.summary());
        CHECK(is_delta_fine(p, g));
    }
}

TEST_CASE("product partition of 2 x 2 cells") {
    const auto outer = cousin_partition(unit1, constant_gauge(unit1, 0.3), Discipline::mcshane);
    const auto inner = cousin_partition(unit1, constant_gauge(unit1, 0.3), Discipline::mcshane);
    const auto q = product_partition(outer, {inner, inner});
    CHECK(q.size() == 4);
    double s = 0.0;
    for (const auto& it : q) s += it.cell.measure();
    CHECK(s == 1.0);
    CHECK(validate(q, true).valid());
    CHECK(is_delta_fine(q, constant_gauge(unit2, 0.3)));
    CHECK_THROWS_AS(product_partition(outer, {inner}), std::invalid_argument);
}

TEST_CASE("product partition fineness transfer") {
    std::mt19937_64 rng(23);
    for (int n = 0; n < 60; ++n) {
        const Gauge big = random_gauge(rng, unit2);
        auto family = [&big](double t1) {
            return cousin_partition(unit1, section_gauge(big, t1), Discipline::mcshane);
        };
        const Gauge d1 = tag_min_gauge(unit1, family, big);
        const auto outer = cousin_partition(unit1, d1, Discipline::mcshane);
        std::vector<TaggedPartition> fam;
        std::size_t cells = 0;
        for (const auto& it : outer) {
            fam.push_back(family(it.tag[0]));
            cells += fam.back().size();
        }
        const auto q = product_partition(outer, fam);
        CHECK(q.size() == cells);
        CHECK(validate(q, true).valid());
        CHECK(is_delta_fine(q, big));
    }
}

TEST_CASE("second coordinate refinement") {
    const auto p = cousin_partition(unit2, constant_gauge(unit2, 0.4), Discipline::hk);
    REQUIRE(p.size() == 4);
    const auto d = second_coord_refinement(p);
    REQUIRE(d.size() == 2);
    CHECK(d[0] == Interval1(0.0, 0.5));
    CHECK(d[1] == Interval1(0.5, 1.0));

    std::mt19937_64 rng(29);
    for (int n = 0; n < 50; ++n) {
        const auto q = cousin_partition(unit2, random_gauge(rng, unit2), Discipline::hk);
        const auto pieces = second_coord_refinement(q);
        double total = 0.0;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            total += pieces[i].length();
            if (i > 0) CHECK(pieces[i - 1].hi() == pieces[i].lo());
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
        // every y-factor is a union of consecutive pieces
        for (const auto& it : q) {
            double covered = 0.0;
            for (const auto& piece : pieces) {
                const bool inside = piece.lo() >= it.cell.y().lo() && piece.hi() <= it.cell.y().hi();
                const bool apart = piece.hi() <= it.cell.y().lo() || piece.lo() >= it.cell.y().hi();
                CHECK((inside || apart));
                if (inside) covered += piece.length();
            }
            CHECK(covered == doctest::Approx(it.cell.y().length()).epsilon(1e-13));
        }
    }
}

TEST_CASE("HK partitions pass the McShane validator") {
    std::mt19937_64 rng(31);
    for (int n = 0; n < 40; ++n) {
        const auto p = cousin_partition(unit2, random_gauge(rng, unit2), Discipline::hk);
        const TaggedPartition m(unit2, Discipline::mcshane, p.items());
        CHECK(validate(p, true).valid());
        CHECK(validate(m, true).valid());
    }
}

TEST_CASE("JSON lines round trip") {
    const auto p = cousin_partition(unit2, constant_gauge(unit2, 0.2), Discipline::mcshane,
                                    TagStrategy::null_avoiding(NullSet::cross(NullSet::rationals(), NullSet::rationals())));
    std::stringstream ss;
    write_jsonl(ss, p);
    const auto back = read_jsonl(ss, unit2, Discipline::mcshane);
    CHECK(back.items() == p.items());
    CHECK(jsonl_line(Point(0.25), Box(Interval1(0.0, 0.5))) == R"({"cell":[[0.0,0.5]],"tag":[0.25]})");
}

TEST_CASE("tag strategy names") {
    const NullSet z = NullSet::rationals();
    for (const char* s : {"center", "null-avoiding", "corner", "null-seeking"})
        CHECK(parse_tag_strategy(s, z).name() == s);
    CHECK_THROWS_AS(parse_tag_strategy("random", z), std::invalid_argument);
}
