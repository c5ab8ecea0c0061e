#pragma once

// Gauges: strictly positive functions t -> delta(t) on an interval.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gint/geometry.hpp"
#include "gint/nullset.hpp"
#include "gint/vector_value.hpp"

namespace gint {

class TaggedPartition;

enum class GaugeForm { constant, level_set, norm_level, min, section, singularity, tag_min };

std::string to_string(GaugeForm f);

class GaugeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An immutable, pure evaluation procedure with its domain and form.
///
/// Anchors are loci where the gauge is concentrated (singular points, null
/// lines); partition generators may try projections onto them as tags.
class Gauge {
public:
    using Fn = std::function<double(const Point&)>;

    Gauge(Box domain, GaugeForm form, Fn fn, std::vector<Locus> anchors = {}, nlohmann::json desc = {});

    /// Throws GaugeError unless the value is finite and > 0.
    double operator()(const Point& t) const { return constant_ ? *constant_ : eval(t); }

    const Box& domain() const { return domain_; }
    int dim() const { return domain_.dim(); }
    GaugeForm form() const { return form_; }
    const std::vector<Locus>& anchors() const { return anchors_; }
    /// Set for constant gauges.
    std::optional<double> constant_value() const { return constant_; }
    /// JSON parameters; null for forms that wrap arbitrary functions.
    const nlohmann::json& describe() const { return desc_; }

    Gauge with_anchors(std::vector<Locus> anchors) const;

private:
    friend Gauge constant_gauge(const Box& domain, double r);
    double eval(const Point& t) const;

    Box domain_;
    GaugeForm form_;
    std::optional<double> constant_;
    std::shared_ptr<const Fn> fn_;
    std::vector<Locus> anchors_;
    nlohmann::json desc_;
};

Gauge constant_gauge(const Box& domain, double r);

/// t -> min(g1(t), g2(t)); anchors are merged.
Gauge pointwise_min(const Gauge& g1, const Gauge& g2);

using GaugeSeq = std::function<Gauge(std::int64_t n)>;

/// Branch of w: 0 when w >= 1, n >= 1 when 1/(n+1) <= w < 1/n, nullopt when w = 0.
/// Branches are capped at 2^53; every w < 2^-53 lands there.
/// Throws on w < 0 or NaN.
std::optional<std::int64_t> level_set_branch(double w);

/// delta(t) = delta_n(t) on A_n, fallback where w(t) = 0. gauge_seq results are cached.
Gauge level_set_gauge(const Box& domain, std::function<double(const Point&)> w, GaugeSeq gauge_seq,
                      double fallback = 1.0);

/// n with n-1 <= v < n.
std::int64_t norm_level_branch(double v);

/// delta(t) = delta_n(t) where n-1 <= ||f(t)|| < n.
Gauge norm_level_gauge(const Box& domain, std::function<Vec(const Point&)> f, Norm norm, GaugeSeq gauge_seq);

/// Restriction of a 2D gauge to the line where coordinate `fixed_axis` equals t.
/// The result lives on the other factor.
Gauge section_gauge(const Gauge& big, double t, int fixed_axis = 0);

/// base * min(1, decay * dist^order) off the loci, `floor` on them.
/// order 1 is the usual linear shape; order 3 follows x^3-scale oscillation.
/// With order 1, bisection only terminates beside a locus when base * decay > 1.
Gauge singularity_gauge(const Box& domain, std::vector<Locus> loci, double base, double decay, int order = 1,
                        std::optional<double> floor = std::nullopt);

/// delta1(t1) = min over the tags t2 of family(t1) of big(t1, t2).
/// The family generator is evaluated once per distinct t1.
Gauge tag_min_gauge(const Box& outer_domain, std::function<TaggedPartition(double)> family, const Gauge& big);

/// Index-keyed form: family[i] belongs to outer item i. At a point equal to the tag
/// of some outer item the min runs over that item's family (all such items if the
/// tag repeats); elsewhere fallback is used.
Gauge tag_min_gauge(const TaggedPartition& outer, const std::vector<TaggedPartition>& family, const Gauge& big,
                    const Gauge& fallback);

/// Builds constant, singularity and min gauges from their describe() JSON.
Gauge gauge_from_json(const Box& domain, const nlohmann::json& j);

}  // namespace gint
