#include "gint/gauges.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "gint/partitions.hpp"

namespace gint {

using nlohmann::json;

std::string to_string(GaugeForm f) {
    switch (f) {
        case GaugeForm::constant: return "constant";
        case GaugeForm::level_set: return "level_set";
        case GaugeForm::norm_level: return "norm_level";
        case GaugeForm::min: return "min";
        case GaugeForm::section: return "section";
        case GaugeForm::singularity: return "singularity";
        case GaugeForm::tag_min: return "tag_min";
    }
    return "constant";
}

Gauge::Gauge(Box domain, GaugeForm form, Fn fn, std::vector<Locus> anchors, json desc)
    : domain_(domain),
      form_(form),
      fn_(std::make_shared<const Fn>(std::move(fn))),
      anchors_(std::move(anchors)),
      desc_(std::move(desc)) {}

double Gauge::eval(const Point& t) const {
    const double v = (*fn_)(t);
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << to_string(form_) << " gauge is not positive at (" << t[0];
        if (t.dim == 2) os << ", " << t[1];
        os << "): " << v;
        throw GaugeError(os.str());
    }
    return v;
}

Gauge Gauge::with_anchors(std::vector<Locus> anchors) const {
    Gauge g = *this;
    g.anchors_ = std::move(anchors);
    return g;
}

Gauge constant_gauge(const Box& domain, double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw GaugeError("constant gauge needs r > 0");
    Gauge g(domain, GaugeForm::constant, [r](const Point&) { return r; }, {}, json{{"form", "constant"}, {"r", r}});
    g.constant_ = r;
    return g;
}

Gauge pointwise_min(const Gauge& g1, const Gauge& g2) {
    if (!(g1.domain() == g2.domain())) throw GaugeError("pointwise_min: domain mismatch");
    std::vector<Locus> anchors = g1.anchors();
    for (const auto& a : g2.anchors())
        if (std::find(anchors.begin(), anchors.end(), a) == anchors.end()) anchors.push_back(a);
    json desc;
    if (!g1.describe().is_null() && !g2.describe().is_null())
        desc = json{{"form", "min"}, {"of", json::array({g1.describe(), g2.describe()})}};
    return Gauge(
        g1.domain(), GaugeForm::min, [g1, g2](const Point& t) { return std::min(g1(t), g2(t)); },
        std::move(anchors), std::move(desc));
}

std::optional<std::int64_t> level_set_branch(double w) {
    if (std::isnan(w) || w < 0.0) throw GaugeError("level_set_gauge: w must be >= 0");
    if (w == 0.0) return std::nullopt;
    if (w >= 1.0) return 0;
    constexpr double kCap = 9007199254740992.0;  // 2^53
    const double inv = 1.0 / w;
    if (!(inv < kCap)) return static_cast<std::int64_t>(kCap);
    auto n = static_cast<std::int64_t>(std::ceil(inv)) - 1;
    n = std::max<std::int64_t>(n, 1);
    // the closed form can land one off near a level boundary; walk to the
    // branch whose defining inequalities hold in floating point
    for (int guard = 0; guard < 8; ++guard) {
        const double lo = 1.0 / static_cast<double>(n + 1);
        const double hi = 1.0 / static_cast<double>(n);
        if (w < lo) {
            ++n;
        } else if (!(w < hi)) {
            if (n == 1) break;
            --n;
        } else {
            break;
        }
    }
    return n;
}

namespace {

/// Thread-safe cache of gauge_seq results.
class SeqCache {
public:
    explicit SeqCache(GaugeSeq seq) : seq_(std::move(seq)) {}

    Gauge get(std::int64_t n) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = cache_.find(n);
            if (it != cache_.end()) return it->second;
        }
        Gauge g = seq_(n);
        std::lock_guard<std::mutex> lock(mu_);
        return cache_.emplace(n, std::move(g)).first->second;
    }

private:
    GaugeSeq seq_;
    std::mutex mu_;
    std::map<std::int64_t, Gauge> cache_;
};

std::uint64_t bits_of(double x) {
    std::uint64_t b = 0;
    std::memcpy(&b, &x, sizeof b);
    return b;
}

}  // namespace

Gauge level_set_gauge(const Box& domain, std::function<double(const Point&)> w, GaugeSeq gauge_seq,
                      double fallback) {
    if (!(fallback > 0.0)) throw GaugeError("level_set_gauge: fallback must be > 0");
    auto cache = std::make_shared<SeqCache>(std::move(gauge_seq));
    return Gauge(domain, GaugeForm::level_set, [w = std::move(w), cache, fallback](const Point& t) {
        const auto n = level_set_branch(w(t));
        if (!n) return fallback;
        return cache->get(*n)(t);
    });
}

std::int64_t norm_level_branch(double v) {
    if (std::isnan(v) || v < 0.0) throw GaugeError("norm_level_gauge: norm must be >= 0");
    constexpr double kCap = 9007199254740992.0;
    if (!(v < kCap)) return static_cast<std::int64_t>(kCap);
    return static_cast<std::int64_t>(std::floor(v)) + 1;
}

Gauge norm_level_gauge(const Box& domain, std::function<Vec(const Point&)> f, Norm norm, GaugeSeq gauge_seq) {
    auto cache = std::make_shared<SeqCache>(std::move(gauge_seq));
    return Gauge(domain, GaugeForm::norm_level, [f = std::move(f), cache, norm](const Point& t) {
        return cache->get(norm_level_branch(f(t).norm(norm)))(t);
    });
}

Gauge section_gauge(const Gauge& big, double t, int fixed_axis) {
    if (big.dim() != 2) throw GaugeError("section_gauge needs a 2D gauge");
    if (fixed_axis != 0 && fixed_axis != 1) throw GaugeError("section_gauge: axis must be 0 or 1");
    const Interval1& fixed = big.domain().axis(fixed_axis);
    if (!fixed.contains(t)) throw GaugeError("section_gauge: coordinate outside the domain");
    const int free_axis = 1 - fixed_axis;
    std::vector<Locus> anchors;
    for (const auto& a : big.anchors()) {
        // a line crossing the section at one point becomes a point anchor
        const auto& fixed_c = fixed_axis == 0 ? a.x : a.y;
        const auto& free_c = fixed_axis == 0 ? a.y : a.x;
        if (free_c && (!fixed_c || *fixed_c == t)) anchors.push_back(Locus::point1(*free_c));
    }
    return Gauge(Box(big.domain().axis(free_axis)), GaugeForm::section,
                 [big, t, fixed_axis](const Point& s) {
                     return fixed_axis == 0 ? big(Point(t, s[0])) : big(Point(s[0], t));
                 },
                 std::move(anchors));
}

Gauge singularity_gauge(const Box& domain, std::vector<Locus> loci, double base, double decay, int order,
                        std::optional<double> floor) {
    if (!(base > 0.0) || !std::isfinite(base)) throw GaugeError("singularity_gauge: base must be > 0");
    if (!(decay > 0.0) || !std::isfinite(decay)) throw GaugeError("singularity_gauge: decay must be > 0");
    if (order < 1) throw GaugeError("singularity_gauge: order must be >= 1");
    const double fl = floor.value_or(std::ldexp(base, -40));
    if (!(fl > 0.0)) throw GaugeError("singularity_gauge: floor must be > 0");
    json desc{{"form", "singularity"}, {"base", base}, {"decay", decay}, {"order", order}, {"floor", fl}};
    json jl = json::array();
    for (const auto& l : loci) jl.push_back(to_json(l));
    desc["loci"] = jl;
    auto fn = [loci, base, decay, order, fl](const Point& t) {
        if (loci.empty()) return base;
        double d = std::numeric_limits<double>::infinity();
        for (const auto& l : loci) d = std::min(d, l.distance(t));
        if (d == 0.0) return fl;
        double p = d;
        for (int i = 1; i < order; ++i) p *= d;
        const double v = base * std::min(1.0, decay * p);
        return v > 0.0 ? v : fl;
    };
    return Gauge(domain, GaugeForm::singularity, fn, std::move(loci), std::move(desc));
}

namespace {

double min_over_section(const TaggedPartition& q, const Gauge& big, double t1) {
    if (q.empty()) throw GaugeError("tag_min_gauge: empty partition in family");
    double m = std::numeric_limits<double>::infinity();
    for (const auto& it : q) m = std::min(m, big(Point(t1, it.tag[0])));
    return m;
}

}  // namespace

Gauge tag_min_gauge(const Box& outer_domain, std::function<TaggedPartition(double)> family, const Gauge& big) {
    if (big.dim() != 2 || outer_domain.dim() != 1) throw GaugeError("tag_min_gauge: needs a 2D gauge, 1D domain");
    struct Memo {
        std::mutex mu;
        std::unordered_map<std::uint64_t, double> values;
    };
    auto memo = std::make_shared<Memo>();
    return Gauge(outer_domain, GaugeForm::tag_min, [family = std::move(family), big, memo](const Point& t) {
        const auto key = bits_of(t[0]);
        {
            std::lock_guard<std::mutex> lock(memo->mu);
            auto it = memo->values.find(key);
            if (it != memo->values.end()) return it->second;
        }
        const double v = min_over_section(family(t[0]), big, t[0]);
        std::lock_guard<std::mutex> lock(memo->mu);
        return memo->values.emplace(key, v).first->second;
    });
}

Gauge tag_min_gauge(const TaggedPartition& outer, const std::vector<TaggedPartition>& family, const Gauge& big,
                    const Gauge& fallback) {
    if (family.size() != outer.size()) throw GaugeError("tag_min_gauge: family size differs from outer partition");
    if (big.dim() != 2 || outer.domain().dim() != 1) throw GaugeError("tag_min_gauge: needs a 2D gauge, 1D domain");
    // min per item, then per distinct tag value; lookups go through the sorted tag list
    std::vector<std::pair<double, double>> table;
    table.reserve(outer.size());
    for (std::size_t i = 0; i < outer.size(); ++i) {
        const double t1 = outer[i].tag[0];
        table.emplace_back(t1, min_over_section(family[i], big, t1));
    }
    std::sort(table.begin(), table.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& [t, v] : table) {
        if (!merged.empty() && merged.back().first == t)
            merged.back().second = std::min(merged.back().second, v);
        else
            merged.emplace_back(t, v);
    }
    auto shared = std::make_shared<const std::vector<std::pair<double, double>>>(std::move(merged));
    return Gauge(outer.domain(), GaugeForm::tag_min, [shared, fallback](const Point& t) {
        auto it = std::lower_bound(shared->begin(), shared->end(), std::make_pair(t[0], -1.0),
                                   [](const auto& a, const auto& b) { return a.first < b.first; });
        if (it != shared->end() && it->first == t[0]) return it->second;
        return fallback(t);
    });
}

Gauge gauge_from_json(const Box& domain, const json& j) {
    const auto form = j.at("form").get<std::string>();
    if (form == "constant") return constant_gauge(domain, j.at("r").get<double>());
    if (form == "singularity") {
        std::vector<Locus> loci;
        for (const auto& l : j.at("loci")) loci.push_back(locus_from_json(l));
        std::optional<double> fl;
        if (j.contains("floor")) fl = j["floor"].get<double>();
        return singularity_gauge(domain, std::move(loci), j.at("base").get<double>(), j.at("decay").get<double>(),
                                 j.value("order", 1), fl);
    }
    if (form == "min") {
        const auto& of = j.at("of");
        if (!of.is_array() || of.empty()) throw GaugeError("min gauge needs a non-empty 'of' list");
        Gauge g = gauge_from_json(domain, of.at(0));
        for (std::size_t i = 1; i < of.size(); ++i) g = pointwise_min(g, gauge_from_json(domain, of.at(i)));
        return g;
    }
    throw GaugeError("gauge form '" + form + "' cannot be built from JSON");
}

}  // namespace gint
