#include <doctest.h>

#include <cmath>
#include <random>

#include "gint/corpus.hpp"
#include "gint/integrator.hpp"

using namespace gint;

namespace {

const Box unit1(Interval1(0.0, 1.0));
const Box unit2(Interval1(0.0, 1.0), Interval1(0.0, 1.0));

Integrand fn1(std::function<double(double)> g) {
    return {1, 1, [g](const Point& t) { return Vec::scalar(g(t[0])); }};
}

const TaggedPartition two_cells(unit1, Discipline::hk,
                                {{Point(0.25), Box(Interval1(0.0, 0.5))}, {Point(0.75), Box(Interval1(0.5, 1.0))}});

AdditiveIntervalFn primitive1(std::function<double(double)> F) {
    return {unit1, [F](const Box& c) { return Vec::scalar(F(c.x().hi()) - F(c.x().lo())); }};
}

}  // namespace

TEST_CASE("riemann sums") {
    const Integrand c{2, 2, [](const Point&) { return Vec{3.0, -1.0}; }};
    const auto p = cousin_partition(unit2, constant_gauge(unit2, 0.1), Discipline::mcshane);
    CHECK(riemann_sum(c, p) == Vec{3.0, -1.0});
    CHECK(riemann_sum(fn1([](double x) { return x; }), two_cells) == Vec::scalar(0.5));

    const NullSet q = NullSet::rationals();
    const Integrand dirichlet{1, 1, [q](const Point& t) { return Vec::scalar(indicator(q, t)); }};
    const auto na = cousin_partition(unit1, constant_gauge(unit1, 1e-3), Discipline::mcshane, TagStrategy::null_avoiding(q));
    CHECK(riemann_sum(dirichlet, na) == Vec::scalar(0.0));
    const auto centre = cousin_partition(unit1, constant_gauge(unit1, 1e-3), Discipline::mcshane);
    CHECK(riemann_sum(dirichlet, centre) == Vec::scalar(1.0));
}

TEST_CASE("evaluation errors") {
    const Integrand bad{1, 1, [](const Point&) { return Vec::scalar(NAN); }};
    CHECK_THROWS_AS(riemann_sum(bad, two_cells), EvaluationError);
    const Integrand wrong{1, 2, [](const Point&) { return Vec::scalar(1.0); }};
    CHECK_THROWS_AS(riemann_sum(wrong, two_cells), EvaluationError);
    const Integrand throws{1, 1, [](const Point&) -> Vec { throw std::runtime_error("boom"); }};
    try {
        riemann_sum(throws, two_cells);
        FAIL("expected an EvaluationError");
    } catch (const EvaluationError& e) {
        CHECK(e.where()[0] == 0.25);
    }
}

TEST_CASE("variation sums") {
    CHECK(variation_sum(fn1([](double) { return 0.0; }), two_cells) == 0.0);
    CHECK(variation_sum(fn1([](double x) { return x; }), two_cells) == 0.5);
    CHECK(variation_sum(fn1([](double x) { return x - 0.5; }), two_cells) == 0.25);
}

TEST_CASE("strong gap") {
    CHECK(strong_gap(fn1([](double) { return 2.0; }), two_cells, primitive1([](double x) { return 2.0 * x; })) == 0.0);
    CHECK(strong_gap(fn1([](double x) { return x; }), two_cells, primitive1([](double x) { return x * x / 2.0; })) == 0.0);
    const TaggedPartition one(unit1, Discipline::mcshane, {{Point(0.0), unit1}});
    CHECK(strong_gap(fn1([](double x) { return x * x; }), one, primitive1([](double x) { return x * x * x / 3.0; })) ==
          doctest::Approx(1.0 / 3.0));
}

TEST_CASE("S* double sum") {
    const Integrand id = fn1([](double x) { return x; });
    const auto p = cousin_partition(unit1, constant_gauge(unit1, 0.05), Discipline::hk);
    CHECK(sstar_double_sum(id, p, p) == 0.0);
    const auto q = cousin_partition(unit1, constant_gauge(unit1, 0.01), Discipline::mcshane,
                                    TagStrategy::null_avoiding(NullSet::rationals()));
    CHECK(sstar_double_sum(fn1([](double) { return 4.0; }), p, q) == 0.0);
    const TaggedPartition a(unit1, Discipline::mcshane, {{Point(0.0), unit1}});
    const TaggedPartition b(unit1, Discipline::mcshane, {{Point(1.0), unit1}});
    CHECK(sstar_double_sum(id, a, b) == 1.0);
    CHECK_THROWS_AS(sstar_double_sum(id, a, TaggedPartition(Box(Interval1(0.0, 2.0)), Discipline::hk, {})),
                    std::invalid_argument);
}

TEST_CASE("S* sums obey the mesh bound") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto& fn = lookup("gauss2d");
    const double L = fn.lipschitz_for(Norm::euclid);
    for (int n = 0; n < 12; ++n) {
        const Gauge g1 = singularity_gauge(unit2, {Locus::point2(u(rng), u(rng))}, 0.05 + 0.2 * u(rng), 30.0);
        const Gauge g2 = constant_gauge(unit2, 0.02 + 0.1 * u(rng));
        const auto p = cousin_partition(unit2, g1, Discipline::hk);
        const auto q = cousin_partition(unit2, g2, Discipline::mcshane, TagStrategy::fixed_corner());
        CHECK(sstar_double_sum(fn.f, p, q) <= L * (p.mesh() + q.mesh()) * unit2.measure());
    }
}

TEST_CASE("riemann sums are linear") {
    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const Integrand f{2, 1, [](const Point& t) { return Vec::scalar(std::sin(3 * t[0]) + t[1]); }};
    const Integrand g{2, 1, [](const Point& t) { return Vec::scalar(std::exp(t[0] * t[1])); }};
    const auto p = cousin_partition(unit2, singularity_gauge(unit2, {Locus::point2(0.3, 0.6)}, 0.2, 20.0), Discipline::hk);
    for (int n = 0; n < 20; ++n) {
        const double a = u(rng), b = u(rng);
        const Integrand h{2, 1, [&](const Point& t) { return a * f(t) + b * g(t); }};
        const double lhs = riemann_sum(h, p)[0];
        const double rhs = a * riemann_sum(f, p)[0] + b * riemann_sum(g, p)[0];
        const double scale = std::abs(a) * variation_sum(f, p) + std::abs(b) * variation_sum(g, p);
        CHECK(std::abs(lhs - rhs) <= 8.0 * std::numeric_limits<double>::epsilon() * scale * 4);
    }
}

TEST_CASE("sums are bit-stable across thread counts") {
    const auto& fn = lookup("gauss2d");
    const auto p = cousin_partition(unit2, constant_gauge(unit2, 0.75 * std::ldexp(1.0, -8)), Discipline::hk);
    REQUIRE(p.size() > 40000);
    const Vec s1 = riemann_sum(fn.f, p, 1);
    for (int t : {2, 3, 8}) CHECK(riemann_sum(fn.f, p, t) == s1);
    CHECK(variation_sum(fn.f, p, Norm::euclid, 4) == variation_sum(fn.f, p, Norm::euclid, 1));

    IntegrateOptions o;
    o.tol = 1e-7;
    const auto r1 = integrate(fn.f, unit2, o);
    o.threads = 4;
    CHECK(integrate(fn.f, unit2, o) == r1);
}

TEST_CASE("integrate examples") {
    const Integrand zero{2, 1, [](const Point&) { return Vec::scalar(0.0); }};
    const auto rz = integrate(zero, unit2);
    CHECK(rz.converged);
    CHECK(rz.converged_depth == 0);
    CHECK(rz.value == Vec::scalar(0.0));

    const Integrand sum{2, 1, [](const Point& t) { return Vec::scalar(t[0] + t[1]); }};
    const auto rs = integrate(sum, unit2);
    CHECK(rs.converged);
    CHECK(std::abs(rs.value[0] - 1.0) <= 1e-6);

    const auto& hk = lookup("hk1d_cos");
    IntegrateOptions o = default_options(hk);
    o.discipline = Discipline::hk;
    const auto rh = integrate(hk.f, hk.domain, o);
    CHECK(rh.converged);
    CHECK(std::abs(rh.value[0] + 1.0) <= 1e-4);
}

TEST_CASE("convergence means a full stable window") {
    for (const char* id : {"poly1d", "gauss2d", "vector2d"}) {
        const auto& fn = lookup(id);
        IntegrateOptions o = default_options(fn);
        const auto r = integrate(fn.f, fn.domain, o);
        REQUIRE(r.converged);
        REQUIRE(r.trace.size() >= static_cast<std::size_t>(o.window) + 1);
        for (std::size_t i = r.trace.size() - static_cast<std::size_t>(o.window); i < r.trace.size(); ++i)
            CHECK(*r.trace[i].gap <= o.tol);
        CHECK(r.cauchy_gap == *r.trace.back().gap);
        CHECK(r.converged_depth == r.depth - o.window);
    }
}

TEST_CASE("budgets end a run without an error") {
    const auto& fn = lookup("gauss2d");
    IntegrateOptions o;
    o.tol = 1e-12;
    o.max_depth = 5;
    auto r = integrate(fn.f, fn.domain, o);
    CHECK_FALSE(r.converged);
    CHECK(r.depth == 5);
    CHECK(r.stop_reason.find("depth budget") != std::string::npos);

    o.max_depth = 40;
    o.max_cells = 5000;
    r = integrate(fn.f, fn.domain, o);
    CHECK_FALSE(r.converged);
    CHECK(r.stop_reason.find("cell budget") != std::string::npos);

    o.tol = -1.0;
    CHECK_THROWS_AS(integrate(fn.f, fn.domain, o), std::invalid_argument);
}

TEST_CASE("interval estimates") {
    const Integrand c = fn1([](double) { return 3.0; });
    CHECK(interval_estimate(c, Box(Interval1(0.25, 0.75)))[0] == 1.5);
    const Integrand id = fn1([](double x) { return x; });
    CHECK(interval_estimate(id, Box(Interval1(0.0, 0.5)))[0] == doctest::Approx(0.125).epsilon(1e-9));

    IntegrateOptions o;
    o.tol = 1e-7;
    const Integrand g = fn1([](double x) { return std::exp(std::sin(5 * x)); });
    const double whole = interval_estimate(g, unit1, o)[0];
    const double parts = interval_estimate(g, Box(Interval1(0.0, 0.5)), o)[0] + interval_estimate(g, Box(Interval1(0.5, 1.0)), o)[0];
    CHECK(std::abs(whole - parts) <= 2 * o.tol);
}

TEST_CASE("strong gap sources") {
    const auto& fn = lookup("poly1d");
    IntegrateOptions o = default_options(fn);
    o.strong_gap = StrongGapMode::exact;
    auto r = integrate(fn.f, fn.domain, o);
    CHECK(r.strong_gap_source == "exact");
    REQUIRE(r.trace.back().strong_gap);

    o.strong_gap = StrongGapMode::estimate;
    o.tol = 1e-4;
    r = integrate(fn.f, fn.domain, o);
    CHECK(r.strong_gap_source == "interval_estimate");
    CHECK(*r.trace.back().strong_gap < 1e-3);

    IntegrateOptions bare;
    bare.strong_gap = StrongGapMode::exact;
    CHECK_THROWS_AS(integrate(fn.f, fn.domain, bare), std::invalid_argument);
}

TEST_CASE("strong gap shrinks under refinement for Bochner entries") {
    for (const char* id : {"poly1d", "gauss2d", "vector2d"}) {
        const auto& fn = lookup(id);
        IntegrateOptions o = default_options(fn);
        o.strong_gap = StrongGapMode::exact;
        o.min_depth = 10;
        o.max_depth = 10;
        const auto r = integrate(fn.f, fn.domain, o);
        for (std::size_t k = 2; k + 2 < r.trace.size(); ++k) CHECK(*r.trace[k + 2].strong_gap <= *r.trace[k].strong_gap);
    }
}

TEST_CASE("stage partitions are the ones integrate sums") {
    const auto& fn = lookup("hk1d_cos");
    IntegrateOptions o = default_options(fn);
    o.max_depth = 12;
    o.min_depth = 12;
    const auto r = integrate(fn.f, fn.domain, o);
    for (int k : {0, 5, 12}) {
        const auto p = stage_partition(fn.domain, o, k);
        CHECK(p.size() == r.trace[static_cast<std::size_t>(k)].cells);
        CHECK(riemann_sum(fn.f, p) == r.trace[static_cast<std::size_t>(k)].estimate);
        CHECK(validate(p, true).valid());
    }
}
