#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "gint/corpus.hpp"

#ifndef GINT_FIXTURE_DIR
#error "GINT_FIXTURE_DIR must point at tests/fixtures"
#endif

using namespace gint;

TEST_CASE("lookup") {
    const auto& z = lookup("zero2d");
    CHECK(z.dim == 2);
    CHECK(z.f(Point(0.3, 0.4)).is_zero());
    CHECK(*z.exact == Vec::scalar(0.0));

    const auto& p = lookup("poly_xy");
    CHECK(p.f(Point(0.5, 0.25))[0] == 0.125);
    CHECK(*p.exact == Vec::scalar(0.25));
    CHECK(p.domain == Box(Interval1(0.0, 1.0), Interval1(0.0, 1.0)));

    const auto& h = lookup("hk1d_cos");
    CHECK(*h.exact == Vec::scalar(-1.0));
    CHECK(h.cls == FnClass::hk_only);
    REQUIRE(h.singular.size() == 1);
    CHECK(h.singular[0] == Locus::point1(0.0));

    CHECK_THROWS_AS(lookup("nope"), UnknownFunction);
    CHECK_THROWS_AS(lookup("nope"), std::out_of_range);
}

TEST_CASE("list filters") {
    const auto b2 = list({2, FnClass::bochner});
    CHECK(std::find(b2.begin(), b2.end(), "poly_xy") != b2.end());
    for (const auto& id : b2) {
        CHECK(lookup(id).dim == 2);
        CHECK(lookup(id).cls == FnClass::bochner);
    }
    const auto hk = list({std::nullopt, FnClass::hk_only});
    CHECK(std::set<std::string>(hk.begin(), hk.end()) == std::set<std::string>{"hk1d_cos", "hk2d_product"});
    CHECK(list().size() == registry().size());
    for (const char* id : {"zero2d", "const2d", "poly_xy", "sum_xy", "gauss2d", "dirichlet1d", "line_mass2d",
                           "grid_null2d", "hk1d_cos", "hk2d_product", "vector2d"})
        CHECK_NOTHROW(lookup(id));
}

TEST_CASE("closed forms") {
    CHECK(*lookup("sum_xy").exact == Vec::scalar(1.0));
    CHECK(*lookup("vector2d").exact == (Vec{1.0, 0.25}));
    CHECK(lookup("const2d").codim == 2);
    const double g = gauss_1d_integral();
    CHECK(g == doctest::Approx(std::sqrt(std::acos(-1.0)) / 2.0 * std::erf(1.0)).epsilon(1e-12));
    CHECK((*lookup("gauss2d").exact)[0] == g * g);
    CHECK(hk_primitive(1.0) == -1.0);
    CHECK(hk_primitive(0.0) == 0.0);
    CHECK(hk_derivative(0.0) == 0.0);
    // the derivative matches a central difference of the primitive away from 0
    for (double x : {0.3, 0.55, 0.9}) {
        const double h = 1e-6;
        CHECK(hk_derivative(x) == doctest::Approx((hk_primitive(x + h) - hk_primitive(x - h)) / (2 * h)).epsilon(1e-6));
    }
}

TEST_CASE("exact values agree with the grid oracle") {
    std::ifstream in(std::string(GINT_FIXTURE_DIR) + "/oracle.json");
    REQUIRE(in);
    const auto j = nlohmann::json::parse(in);
    int checked = 0;
    for (const auto& fn : registry()) {
        if (!fn.exact) continue;
        REQUIRE_MESSAGE(j.at("entries").contains(fn.id), fn.id);
        const auto& v = j.at("entries").at(fn.id).at("value");
        REQUIRE(static_cast<int>(v.size()) == fn.codim);
        for (int i = 0; i < fn.codim; ++i)
            CHECK_MESSAGE(std::abs(v[static_cast<std::size_t>(i)].get<double>() - (*fn.exact)[i]) <= 1e-4, fn.id);
        ++checked;
    }
    CHECK(checked == static_cast<int>(registry().size()));
}

TEST_CASE("null-perturbed entries keep their base value") {
    for (const auto& fn : registry()) {
        if (fn.cls != FnClass::null_perturbed) continue;
        CHECK_FALSE(fn.null_set().is_empty());
        if (fn.base.empty()) continue;
        const auto& base = lookup(fn.base);
        CHECK_MESSAGE(*fn.exact == *base.exact, fn.id);
        // f and its base differ only on the declared set
        std::mt19937_64 rng(71);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 1000; ++i) {
            const Point t = fn.dim == 1 ? Point(u(rng)) : Point(u(rng), u(rng));
            if (!fn.null_set().contains(t)) CHECK(fn.f(t) == base.f(t));
        }
    }
}

TEST_CASE("declared Lipschitz constants hold") {
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& fn : registry()) {
        if (!fn.lipschitz) continue;
        for (Norm n : {Norm::euclid, Norm::max, Norm::sum}) {
            const double L = fn.lipschitz_for(n);
            for (int i = 0; i < 2000; ++i) {
                const Point s = fn.dim == 1 ? Point(u(rng)) : Point(u(rng), u(rng));
                const Point t = fn.dim == 1 ? Point(u(rng)) : Point(u(rng), u(rng));
                CHECK(distance(fn.f(s), fn.f(t), n) <= L * distance_inf(s, t) * (1 + 1e-12));
            }
        }
    }
    CHECK_THROWS_AS(lookup("dirichlet1d").lipschitz_for(Norm::max), std::logic_error);
}

TEST_CASE("primitives are additive and match the exact value") {
    for (const auto& fn : registry()) {
        if (!fn.primitive) continue;
        const Vec whole = (*fn.primitive)(fn.domain);
        CHECK_MESSAGE(distance(whole, *fn.exact, Norm::max) <= 1e-12, fn.id);
        std::array<Box, 4> kids;
        const int n = fn.domain.bisect(kids);
        Vec s = Vec::zero(fn.codim);
        for (int i = 0; i < n; ++i) s += (*fn.primitive)(kids[static_cast<std::size_t>(i)]);
        CHECK_MESSAGE(distance(s, whole, Norm::max) <= 1e-12, fn.id);
    }
}

TEST_CASE("closed-form inner integrals") {
    for (const auto& fn : registry()) {
        if (fn.dim != 2 || !fn.exact_inner_xy) continue;
        const Integrand f0 = truncate_f0(fn.f, fn.z1, fn.z2);
        for (double t : {0.125, 0.3, 0.71}) {
            if (fn.cls == FnClass::hk_only) continue;
            const InnerIntegral g(f0, fn.domain, Order::xy, inner_options(FubiniOptions{}, Order::xy));
            CHECK_MESSAGE(distance(g(t), fn.exact_inner_xy(t), Norm::max) <= 1e-6, fn.id);
            const InnerIntegral h(f0, fn.domain, Order::yx, inner_options(FubiniOptions{}, Order::yx));
            CHECK_MESSAGE(distance(h(t), fn.exact_inner_yx(t), Norm::max) <= 1e-6, fn.id);
        }
    }
}

TEST_CASE("metadata JSON") {
    const auto j = metadata(lookup("line_mass2d"));
    for (const char* key : {"id", "dim", "codim", "domain", "class", "exact", "exact_expr", "closed_form_primitive",
                            "z1", "z2", "singular", "lipschitz", "base", "defaults", "notes"})
        CHECK_MESSAGE(j.contains(key), key);
    CHECK(NullSet::from_json(j.at("z1")) == lookup("line_mass2d").z1);
    const auto all = registry_json();
    CHECK(all.size() == registry().size());
    CHECK(registry_json({1, std::nullopt}).size() == list({1, std::nullopt}).size());
}
