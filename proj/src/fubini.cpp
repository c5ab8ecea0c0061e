#include "gint/fubini.hpp"

#include <bit>
#include <cstdint>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace gint {

Box x_factor(const Box& domain) {
    if (domain.dim() != 2) throw GeometryError("x_factor needs a 2D box");
    return Box(domain.x());
}

Box y_factor(const Box& domain) {
    if (domain.dim() != 2) throw GeometryError("y_factor needs a 2D box");
    return Box(domain.y());
}

namespace {

void check_2d(const Integrand& f, const Box& domain) {
    if (f.dim != 2 || domain.dim() != 2) throw std::invalid_argument("sections need a 2D integrand and box");
}

std::string coord_str(double t) {
    std::ostringstream os;
    os.precision(17);
    os << t;
    return os.str();
}

}  // namespace

Integrand section_x(const Integrand& f, const Box& domain, double t1) {
    check_2d(f, domain);
    if (!domain.x().contains(t1)) throw GeometryError("section_x: t1 = " + coord_str(t1) + " outside [a1, b1]");
    auto eval = f.eval;
    return Integrand{1, f.codim, [eval, t1](const Point& s) { return eval(Point(t1, s[0])); }};
}

Integrand section_y(const Integrand& f, const Box& domain, double t2) {
    check_2d(f, domain);
    if (!domain.y().contains(t2)) throw GeometryError("section_y: t2 = " + coord_str(t2) + " outside [a2, b2]");
    auto eval = f.eval;
    return Integrand{1, f.codim, [eval, t2](const Point& s) { return eval(Point(s[0], t2)); }};
}

Integrand truncate_f0(const Integrand& f, const NullSet& z1, const NullSet& z2) {
    if (f.dim != 2) throw std::invalid_argument("truncate_f0 needs a 2D integrand");
    if (z1.dim() != 1 || z2.dim() != 1) throw std::invalid_argument("truncate_f0: Z1 and Z2 are subsets of R");
    if (z1.is_empty() && z2.is_empty()) return f;
    auto eval = f.eval;
    const int codim = f.codim;
    return Integrand{2, codim, [eval, codim, z1, z2](const Point& t) {
                         if (z1.contains(Point(t[0])) || z2.contains(Point(t[1]))) return Vec::zero(codim);
                         return eval(t);
                     }};
}

std::string to_string(Order o) { return o == Order::xy ? "xy" : "yx"; }

InnerIntegralError::InnerIntegralError(double at, Order order, const std::string& reason)
    : std::runtime_error("inner integral (" + to_string(order) + ") at " + (order == Order::xy ? "t1 = " : "t2 = ") +
                         coord_str(at) + " did not converge: " + reason),
      at_(at) {}

struct InnerMemo {
    std::mutex mu;
    std::unordered_map<std::uint64_t, Vec> values;
};

InnerIntegral::InnerIntegral(Integrand f, Box domain, Order order, IntegrateOptions inner)
    : f_(std::move(f)),
      domain_(std::move(domain)),
      order_(order),
      inner_(std::move(inner)),
      memo_(std::make_shared<InnerMemo>()) {
    check_2d(f_, domain_);
}

Vec InnerIntegral::operator()(double t) const {
    // +0.0 and -0.0 are the same coordinate
    const std::uint64_t key = std::bit_cast<std::uint64_t>(t == 0.0 ? 0.0 : t);
    {
        std::lock_guard<std::mutex> lock(memo_->mu);
        auto it = memo_->values.find(key);
        if (it != memo_->values.end()) return it->second;
    }
    const bool xy = order_ == Order::xy;
    const Integrand s = xy ? section_x(f_, domain_, t) : section_y(f_, domain_, t);
    const IntegralResult r = integrate(s, xy ? y_factor(domain_) : x_factor(domain_), inner_);
    if (!r.converged) throw InnerIntegralError(t, order_, r.stop_reason);
    std::lock_guard<std::mutex> lock(memo_->mu);
    return memo_->values.emplace(key, r.value).first->second;
}

Integrand InnerIntegral::as_integrand() const {
    InnerIntegral self = *this;
    return Integrand{1, f_.codim, [self](const Point& t) { return self(t[0]); }};
}

std::size_t InnerIntegral::evaluations() const {
    std::lock_guard<std::mutex> lock(memo_->mu);
    return memo_->values.size();
}

std::vector<Locus> axis_loci(const std::vector<Locus>& loci, int axis) {
    std::vector<Locus> out;
    for (const auto& l : loci) {
        const auto& c = axis == 0 ? l.x : l.y;
        if (!c) continue;
        const Locus p = Locus::point1(*c);
        bool seen = false;
        for (const auto& q : out) seen = seen || q == p;
        if (!seen) out.push_back(p);
    }
    return out;
}

TagStrategy axis_strategy(const TagStrategy& s, int axis) {
    if (!s.nullset || s.nullset->dim() == 1) return s;
    TagStrategy out = s;
    const NullSet* part = s.nullset->kind() == NullSet::Kind::cross ? (axis == 0 ? s.nullset->first() : s.nullset->second())
                                                                     : nullptr;
    out.nullset = std::make_shared<const NullSet>(part ? *part : NullSet::empty(1));
    return out;
}

namespace {

IntegrateOptions one_d(const FubiniOptions& o, int axis, double tol) {
    IntegrateOptions io;
    io.discipline = o.discipline;
    io.tags = axis_strategy(o.tags, axis);
    io.tol = tol;
    io.max_depth = o.max_depth;
    io.norm = o.norm;
    io.singular = axis_loci(o.singular, axis);
    io.threads = 1;
    return io;
}

}  // namespace

IntegrateOptions inner_options(const FubiniOptions& o, Order order) {
    return one_d(o, order == Order::xy ? 1 : 0, o.inner_tol());
}

IntegrateOptions outer_options(const FubiniOptions& o, Order order) {
    return one_d(o, order == Order::xy ? 0 : 1, o.tol_outer);
}

FubiniReport fubini_compare(const Integrand& f, const Box& domain, const NullSet& z1, const NullSet& z2,
                            const FubiniOptions& opts) {
    check_2d(f, domain);
    if (!(opts.tol_outer > 0.0) || !(opts.inner_tol() > 0.0)) throw std::invalid_argument("tolerances must be > 0");

    FubiniReport rep;
    rep.tol_outer = opts.tol_outer;
    rep.tol_inner = opts.inner_tol();
    rep.discipline = to_string(opts.discipline);
    rep.z1 = z1;
    rep.z2 = z2;

    IntegrateOptions dbl;
    dbl.discipline = opts.discipline;
    dbl.tags = opts.tags;
    dbl.tol = opts.tol_outer;
    dbl.max_depth = opts.max_depth;
    dbl.norm = opts.norm;
    dbl.singular = opts.singular;
    dbl.threads = opts.threads;
    rep.double_integral = integrate(f, domain, dbl);

    const Integrand f0 = truncate_f0(f, z1, z2);
    for (Order order : {Order::xy, Order::yx}) {
        const InnerIntegral inner(f0, domain, order, inner_options(opts, order));
        const bool xy = order == Order::xy;
        const Box outer_box = xy ? x_factor(domain) : y_factor(domain);
        IntegralResult r = integrate(inner.as_integrand(), outer_box, outer_options(opts, order));
        const double gap = distance(r.value, rep.double_integral.value, opts.norm);
        // the outer sum scales inner errors by the length of the outer side
        const double bound = 10.0 * (opts.tol_outer + opts.inner_tol() * outer_box.measure());
        if (xy) {
            rep.iterated_xy = std::move(r);
            rep.gap_xy = gap;
            rep.bound_xy = bound;
            rep.inner_evaluations_xy = inner.evaluations();
        } else {
            rep.iterated_yx = std::move(r);
            rep.gap_yx = gap;
            rep.bound_yx = bound;
            rep.inner_evaluations_yx = inner.evaluations();
        }
    }
    return rep;
}

IntegralResult nullset_integral_check(const NullSet& z, const Box& domain, Discipline discipline,
                                      const TagStrategy& tags, double tol, int max_depth, int min_depth) {
    if (z.dim() != domain.dim()) throw std::invalid_argument("null set and domain dimensions differ");
    Integrand ind{domain.dim(), 1, [z](const Point& t) { return Vec::scalar(indicator(z, t)); }};
    IntegrateOptions o;
    o.discipline = discipline;
    o.tags = tags;
    o.tol = tol;
    o.max_depth = max_depth;
    o.min_depth = min_depth;
    return integrate(ind, domain, o);
}

}  // namespace gint
