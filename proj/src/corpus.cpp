#include "gint/corpus.hpp"

#include <cmath>
#include <numbers>

namespace gint {

std::string to_string(FnClass c) {
    switch (c) {
        case FnClass::bochner: return "bochner";
        case FnClass::hk_only: return "hk_only";
        case FnClass::null_perturbed: return "null_perturbed";
    }
    return "?";
}

FnClass parse_fn_class(const std::string& s) {
    if (s == "bochner") return FnClass::bochner;
    if (s == "hk_only") return FnClass::hk_only;
    if (s == "null_perturbed") return FnClass::null_perturbed;
    throw std::invalid_argument("unknown class '" + s + "'");
}

double hk_primitive(double x) {
    if (x == 0.0) return 0.0;
    return x * x * std::cos(std::numbers::pi / (x * x));
}

double hk_derivative(double x) {
    if (x == 0.0) return 0.0;
    const double a = std::numbers::pi / (x * x);
    return 2.0 * x * std::cos(a) + 2.0 * std::numbers::pi / x * std::sin(a);
}

double gauss_1d_integral() {
    const int n = 1 << 14;
    const double h = 1.0 / n;
    double s = 1.0 + std::exp(-1.0);
    for (int i = 1; i < n; ++i) {
        const double x = i * h;
        s += (i % 2 ? 4.0 : 2.0) * std::exp(-x * x);
    }
    return s * h / 3.0;
}

double CorpusFunction::lipschitz_for(Norm n) const {
    if (!lipschitz) throw std::logic_error(id + " has no Lipschitz constant");
    return (*lipschitz)[static_cast<std::size_t>(n)];
}

NullSet CorpusFunction::null_set() const { return dim == 1 ? z1 : NullSet::cross(z1, z2); }

namespace {

const Box kUnit1 = Box(Interval1(0.0, 1.0));
const Box kUnit2 = Box(Interval1(0.0, 1.0), Interval1(0.0, 1.0));

std::array<double, 3> same_l(double l) { return {l, l, l}; }

// centers and half-widths of a cell; products of these stay exact on dyadic cells
struct CellParts {
    double xc, yc, hx, hy;
};
CellParts parts(const Box& c) {
    if (c.dim() == 1) return {c.x().mid(), 0.0, c.x().length(), 1.0};
    return {c.x().mid(), c.y().mid(), c.x().length(), c.y().length()};
}

AdditiveIntervalFn prim(const Box& dom, std::function<Vec(const Box&)> fn) { return {dom, std::move(fn)}; }

CorpusFunction zero1d() {
    CorpusFunction c;
    c.id = "zero1d";
    c.domain = kUnit1;
    c.f = {1, 1, [](const Point&) { return Vec::scalar(0.0); }};
    c.exact = Vec::scalar(0.0);
    c.exact_expr = "0";
    c.primitive = prim(kUnit1, [](const Box&) { return Vec::scalar(0.0); });
    c.lipschitz = same_l(0.0);
    c.notes = "theta on [0,1]";
    return c;
}

CorpusFunction poly1d() {
    CorpusFunction c;
    c.id = "poly1d";
    c.domain = kUnit1;
    c.f = {1, 1, [](const Point& t) { return Vec::scalar(t[0] * t[0]); }};
    c.exact = Vec::scalar(1.0 / 3.0);
    c.exact_expr = "1^3/3 - 0^3/3";
    c.primitive = prim(kUnit1, [](const Box& b) {
        const double a = b.x().lo(), e = b.x().hi();
        return Vec::scalar((e - a) * (a * a + a * e + e * e) / 3.0);
    });
    c.lipschitz = same_l(2.0);
    c.notes = "x^2";
    return c;
}

CorpusFunction zero2d() {
    CorpusFunction c;
    c.id = "zero2d";
    c.dim = 2;
    c.domain = kUnit2;
    c.f = {2, 1, [](const Point&) { return Vec::scalar(0.0); }};
    c.exact = Vec::scalar(0.0);
    c.exact_expr = "0";
    c.primitive = prim(kUnit2, [](const Box&) { return Vec::scalar(0.0); });
    c.exact_inner_xy = c.exact_inner_yx = [](double) { return Vec::scalar(0.0); };
    c.lipschitz = same_l(0.0);
    c.notes = "theta on [0,1]^2";
    return c;
}

CorpusFunction const2d() {
    const Vec v{2.0, -1.0};
    CorpusFunction c;
    c.id = "const2d";
    c.dim = 2;
    c.codim = 2;
    c.domain = kUnit2;
    c.f = {2, 2, [v](const Point&) { return v; }};
    c.exact = v * kUnit2.measure();
    c.exact_expr = "(2, -1) * |[0,1]^2|";
    c.primitive = prim(kUnit2, [v](const Box& b) { return v * b.measure(); });
    c.exact_inner_xy = c.exact_inner_yx = [v](double) { return v; };
    c.lipschitz = same_l(0.0);
    c.notes = "constant vector (2, -1)";
    return c;
}

CorpusFunction poly_xy() {
    CorpusFunction c;
    c.id = "poly_xy";
    c.dim = 2;
    c.domain = kUnit2;
    c.f = {2, 1, [](const Point& t) { return Vec::scalar(t[0] * t[1]); }};
    c.exact = Vec::scalar((1.0 * 1.0 / 2.0) * (1.0 * 1.0 / 2.0));
    c.exact_expr = "(1^2/2) * (1^2/2)";
    c.primitive = prim(kUnit2, [](const Box& b) {
        const auto p = parts(b);
        return Vec::scalar((p.hx * p.xc) * (p.hy * p.yc));
    });
    c.exact_inner_xy = c.exact_inner_yx = [](double t) { return Vec::scalar(t / 2.0); };
    c.lipschitz = same_l(2.0);
    c.notes = "x y";
    return c;
}

CorpusFunction sum_xy() {
    CorpusFunction c;
    c.id = "sum_xy";
    c.dim = 2;
    c.domain = kUnit2;
    c.f = {2, 1, [](const Point& t) { return Vec::scalar(t[0] + t[1]); }};
    c.exact = Vec::scalar(1.0 / 2.0 + 1.0 / 2.0);
    c.exact_expr = "1^2/2 + 1^2/2";
    c.primitive = prim(kUnit2, [](const Box& b) {
        const auto p = parts(b);
        return Vec::scalar((p.xc + p.yc) * (p.hx * p.hy));
    });
    c.exact_inner_xy = c.exact_inner_yx = [](double t) { return Vec::scalar(t + 0.5); };
    c.lipschitz = same_l(2.0);
    c.notes = "x + y";
    return c;
}

CorpusFunction gauss2d() {
    const double g = gauss_1d_integral();
    const double k = std::sqrt(std::numbers::pi) / 2.0;
    CorpusFunction c;
    c.id = "gauss2d";
    c.dim = 2;
    c.domain = kUnit2;
    c.f = {2, 1, [](const Point& t) { return Vec::scalar(std::exp(-t[0] * t[0] - t[1] * t[1])); }};
    c.exact = Vec::scalar(g * g);
    c.exact_expr = "(int_0^1 exp(-x^2) dx)^2, inner integral by Simpson on 2^14 panels";
    c.primitive = prim(kUnit2, [k](const Box& b) {
        return Vec::scalar((k * (std::erf(b.x().hi()) - std::erf(b.x().lo()))) *
                           (k * (std::erf(b.y().hi()) - std::erf(b.y().lo()))));
    });
    c.exact_inner_xy = c.exact_inner_yx = [g](double t) { return Vec::scalar(std::exp(-t * t) * g); };
    c.lipschitz = same_l(2.0 * std::exp(-0.5));  // sup of |f_x| + |f_y|, at x = y = 1/2
    c.notes = "exp(-x^2 - y^2)";
    return c;
}

CorpusFunction vector2d() {
    CorpusFunction c;
    c.id = "vector2d";
    c.dim = 2;
    c.codim = 2;
    c.domain = kUnit2;
    c.f = {2, 2, [](const Point& t) { return Vec{t[0] + t[1], t[0] * t[1]}; }};
    c.exact = Vec{1.0 / 2.0 + 1.0 / 2.0, (1.0 / 2.0) * (1.0 / 2.0)};
    c.exact_expr = "(1^2/2 + 1^2/2, (1^2/2) * (1^2/2))";
    c.primitive = prim(kUnit2, [](const Box& b) {
        const auto p = parts(b);
        return Vec{(p.xc + p.yc) * (p.hx * p.hy), (p.hx * p.xc) * (p.hy * p.yc)};
    });
    c.exact_inner_xy = c.exact_inner_yx = [](double t) { return Vec{t + 0.5, t / 2.0}; };
    // each component moves by at most 2 d
    c.lipschitz = std::array<double, 3>{2.0 * std::sqrt(2.0), 2.0, 4.0};
    c.notes = "(x + y, x y)";
    return c;
}

CorpusFunction dirichlet1d() {
    const NullSet q = NullSet::rationals();
    CorpusFunction c;
    c.id = "dirichlet1d";
    c.domain = kUnit1;
    c.f = {1, 1, [](const Point& t) { return Vec::scalar(is_rational(t[0]) ? 1.0 : 0.0); }};
    c.cls = FnClass::null_perturbed;
    c.base = "zero1d";
    c.exact = Vec::scalar(0.0);
    c.exact_expr = "0 (indicator of a countable set)";
    c.z1 = q;
    c.tags = TagStrategy::null_avoiding(q);
    c.notes = "indicator of the rationals; doubles nearest p/q with q <= 2^20 count as rational";
    return c;
}

CorpusFunction line_mass2d() {
    CorpusFunction c;
    c.id = "line_mass2d";
    c.dim = 2;
    c.domain = kUnit2;
    c.f = {2, 1, [](const Point& t) { return Vec::scalar(t[0] + t[1] + (t[0] == 0.5 ? 1000.0 : 0.0)); }};
    c.cls = FnClass::null_perturbed;
    c.base = "sum_xy";
    c.exact = Vec::scalar(1.0 / 2.0 + 1.0 / 2.0);
    c.exact_expr = "1^2/2 + 1^2/2 (the line x = 1/2 is null)";
    c.exact_inner_xy = [](double t) { return Vec::scalar(t == 0.5 ? 0.0 : t + 0.5); };
    c.exact_inner_yx = [](double t) { return Vec::scalar(t + 0.5); };
    c.z1 = NullSet::points(std::vector<double>{0.5});
    c.notes = "x + y plus 1000 on the line x = 1/2";
    return c;
}

CorpusFunction grid_null2d() {
    const NullSet z1 = NullSet::points(std::vector<double>{0.5});
    const NullSet z2 = NullSet::points(std::vector<double>{0.5});
    const NullSet z = NullSet::cross(z1, z2);
    CorpusFunction c;
    c.id = "grid_null2d";
    c.dim = 2;
    c.domain = kUnit2;
    c.f = {2, 1, [z](const Point& t) { return Vec::scalar(indicator(z, t)); }};
    c.cls = FnClass::null_perturbed;
    c.base = "zero2d";
    c.exact = Vec::scalar(0.0);
    c.exact_expr = "0 (union of two lines)";
    c.exact_inner_xy = c.exact_inner_yx = [](double) { return Vec::scalar(0.0); };
    c.z1 = z1;
    c.z2 = z2;
    c.tags = TagStrategy::null_avoiding(z);
    c.notes = "indicator of {x = 1/2} u {y = 1/2}";
    return c;
}

CorpusFunction hk1d_cos() {
    CorpusFunction c;
    c.id = "hk1d_cos";
    c.domain = kUnit1;
    c.f = {1, 1, [](const Point& t) { return Vec::scalar(hk_derivative(t[0])); }};
    c.cls = FnClass::hk_only;
    c.exact = Vec::scalar(hk_primitive(1.0) - hk_primitive(0.0));
    c.exact_expr = "F(1) - F(0) = cos(pi) * 1^2 - 0, F(x) = x^2 cos(pi/x^2)";
    c.primitive = prim(kUnit1, [](const Box& b) { return Vec::scalar(hk_primitive(b.x().hi()) - hk_primitive(b.x().lo())); });
    c.singular = {Locus::point1(0.0)};
    c.discipline = Discipline::hk;
    c.tol = 1e-4;
    c.notes = "F' for F(x) = x^2 cos(pi/x^2); not absolutely integrable";
    return c;
}

CorpusFunction hk2d_product() {
    const double ey = 1.0 - std::exp(-1.0);
    CorpusFunction c;
    c.id = "hk2d_product";
    c.dim = 2;
    c.domain = kUnit2;
    c.f = {2, 1, [](const Point& t) { return Vec::scalar(hk_derivative(t[0]) * std::exp(-t[1])); }};
    c.cls = FnClass::hk_only;
    c.exact = Vec::scalar((hk_primitive(1.0) - hk_primitive(0.0)) * (std::exp(-0.0) - std::exp(-1.0)));
    c.exact_expr = "(F(1) - F(0)) * (e^0 - e^-1), F(x) = x^2 cos(pi/x^2)";
    c.primitive = prim(kUnit2, [](const Box& b) {
        return Vec::scalar((hk_primitive(b.x().hi()) - hk_primitive(b.x().lo())) *
                           (std::exp(-b.y().lo()) - std::exp(-b.y().hi())));
    });
    c.exact_inner_xy = [ey](double t) { return Vec::scalar(hk_derivative(t) * ey); };
    c.exact_inner_yx = [](double t) { return Vec::scalar(-std::exp(-t)); };
    c.singular = {Locus::vline(0.0)};
    c.discipline = Discipline::hk;
    c.tol = 2e-4;
    c.notes = "F'(x) exp(-y); every x-section is HK-only";
    return c;
}

std::vector<CorpusFunction> build() {
    return {zero1d(),     poly1d(),      zero2d(),      const2d(),     poly_xy(),  sum_xy(),      gauss2d(),
            vector2d(),   dirichlet1d(), line_mass2d(), grid_null2d(), hk1d_cos(), hk2d_product()};
}

}  // namespace

const std::vector<CorpusFunction>& registry() {
    static const std::vector<CorpusFunction> r = build();
    return r;
}

const CorpusFunction& lookup(const std::string& id) {
    for (const auto& c : registry())
        if (c.id == id) return c;
    throw UnknownFunction(id);
}

std::vector<std::string> list(const CorpusFilter& filter) {
    std::vector<std::string> out;
    for (const auto& c : registry()) {
        if (filter.dim && c.dim != *filter.dim) continue;
        if (filter.cls && c.cls != *filter.cls) continue;
        out.push_back(c.id);
    }
    return out;
}

nlohmann::json metadata(const CorpusFunction& fn) {
    using nlohmann::json;
    json j;
    j["id"] = fn.id;
    j["dim"] = fn.dim;
    j["codim"] = fn.codim;
    json dom = json::array();
    for (int a = 0; a < fn.dim; ++a) dom.push_back({fn.domain.axis(a).lo(), fn.domain.axis(a).hi()});
    j["domain"] = dom;
    j["class"] = to_string(fn.cls);
    if (fn.exact) {
        json v = json::array();
        for (int i = 0; i < fn.exact->dim(); ++i) v.push_back((*fn.exact)[i]);
        j["exact"] = v;
    } else {
        j["exact"] = nullptr;
    }
    j["exact_expr"] = fn.exact_expr;
    j["closed_form_primitive"] = fn.primitive.has_value();
    j["z1"] = fn.z1.to_json();
    j["z2"] = fn.z2.to_json();
    json loci = json::array();
    for (const auto& l : fn.singular) loci.push_back(to_json(l));
    j["singular"] = loci;
    if (fn.lipschitz) {
        j["lipschitz"] = {{"euclid", (*fn.lipschitz)[0]}, {"max", (*fn.lipschitz)[1]}, {"sum", (*fn.lipschitz)[2]}};
    } else {
        j["lipschitz"] = nullptr;
    }
    j["base"] = fn.base.empty() ? json(nullptr) : json(fn.base);
    j["defaults"] = {{"mode", to_string(fn.discipline)}, {"tags", fn.tags.name()}, {"tol", fn.tol}};
    j["notes"] = fn.notes;
    return j;
}

nlohmann::json registry_json(const CorpusFilter& filter) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& id : list(filter)) out.push_back(metadata(lookup(id)));
    return out;
}

IntegrateOptions default_options(const CorpusFunction& fn) {
    IntegrateOptions o;
    o.discipline = fn.discipline;
    o.tags = fn.tags;
    o.tol = fn.tol;
    o.singular = fn.singular;
    if (fn.primitive) o.interval_fn = fn.primitive;
    return o;
}

FubiniOptions default_fubini_options(const CorpusFunction& fn) {
    FubiniOptions o;
    o.discipline = fn.discipline;
    o.tags = fn.tags;
    o.tol_outer = fn.tol;
    o.singular = fn.singular;
    return o;
}

}  // namespace gint
