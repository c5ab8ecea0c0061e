#include "gint/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "gint/reduce.hpp"
#include "bucket_index.hpp"

namespace gint {

using nlohmann::json;

std::string to_string(Discipline d) { return d == Discipline::hk ? "hk" : "mcshane"; }

Discipline parse_discipline(const std::string& s) {
    if (s == "mcshane" || s == "m") return Discipline::mcshane;
    if (s == "hk") return Discipline::hk;
    throw std::invalid_argument("unknown mode '" + s + "' (expected mcshane|hk)");
}

TaggedPartition::TaggedPartition(Box domain, Discipline discipline, std::vector<TaggedInterval> items)
    : domain_(domain), discipline_(discipline), items_(std::move(items)) {
    for (const auto& it : items_)
        if (it.cell.dim() != domain_.dim() || it.tag.dim != domain_.dim())
            throw GeometryError("partition item dimension differs from its domain");
}

double TaggedPartition::mesh() const {
    double m = 0.0;
    for (const auto& it : items_) m = std::max(m, it.cell.diameter());
    return m;
}

bool ValidityReport::valid() const {
    return overlapping_pairs.empty() && cells_outside_domain.empty() && tags_outside_domain.empty() &&
           tags_outside_cell.empty() && (!full || cover_deficit <= cover_tolerance);
}

std::string ValidityReport::summary() const {
    if (valid()) return "valid";
    std::ostringstream os;
    if (!overlapping_pairs.empty())
        os << overlapping_pairs.size() << " overlapping pair(s), first (" << overlapping_pairs[0].first << ","
           << overlapping_pairs[0].second << "); ";
    if (!cells_outside_domain.empty()) os << cells_outside_domain.size() << " cell(s) outside the domain; ";
    if (!tags_outside_domain.empty()) os << tags_outside_domain.size() << " tag(s) outside the domain; ";
    if (!tags_outside_cell.empty()) os << tags_outside_cell.size() << " HK tag(s) outside their cell; ";
    if (full && cover_deficit > cover_tolerance) os << "cover deficit " << cover_deficit;
    return os.str();
}


ValidityReport validate(const TaggedPartition& p, bool full) {
    ValidityReport r;
    r.full = full;
    const Box& dom = p.domain();
    const auto& items = p.items();

    for (std::size_t i = 0; i < items.size(); ++i) {
        if (!dom.contains(items[i].cell)) r.cells_outside_domain.push_back(i);
        if (!dom.contains(items[i].tag)) r.tags_outside_domain.push_back(i);
        if (p.discipline() == Discipline::hk && !items[i].cell.contains(items[i].tag)) r.tags_outside_cell.push_back(i);
    }

    detail::BucketIndex index(dom, items.size());
    for (std::size_t i = 0; i < items.size(); ++i) index.insert(i, items[i].cell);
    std::vector<std::size_t> cand;
    for (std::size_t i = 0; i < items.size(); ++i) {
        cand.clear();
        index.for_buckets(items[i].cell, [&](std::size_t b) {
            for (std::size_t j : index.bucket(b))
                if (j > i) cand.push_back(j);
        });
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        for (std::size_t j : cand)
            if (overlap_measure(items[i].cell, items[j].cell) > 0.0) r.overlapping_pairs.emplace_back(i, j);
    }

    if (full) {
        PairwiseSum<double> total(0.0);
        for (const auto& it : items) total.push(it.cell.measure());
        r.cover_deficit = std::abs(dom.measure() - total.total());
        r.cover_tolerance =
            4.0 * static_cast<double>(std::max<std::size_t>(items.size(), 1)) * std::numeric_limits<double>::epsilon() *
            dom.measure();
    }
    return r;
}

bool is_delta_fine(const TaggedPartition& p, const Gauge& delta) {
    for (const auto& it : p)
        if (!ball_contains(it.cell, it.tag, delta(it.tag))) return false;
    return true;
}

TagStrategy TagStrategy::null_avoiding(NullSet z) {
    return {Kind::null_avoiding, std::make_shared<const NullSet>(std::move(z))};
}

TagStrategy TagStrategy::null_seeking(NullSet z) {
    return {Kind::null_seeking, std::make_shared<const NullSet>(std::move(z))};
}

std::string TagStrategy::name() const {
    switch (kind) {
        case Kind::center: return "center";
        case Kind::null_avoiding: return "null-avoiding";
        case Kind::fixed_corner: return "corner";
        case Kind::null_seeking: return "null-seeking";
    }
    return "center";
}

TagStrategy parse_tag_strategy(const std::string& s, const NullSet& z) {
    if (s == "center") return TagStrategy::center();
    if (s == "null-avoiding") return TagStrategy::null_avoiding(z);
    if (s == "corner") return TagStrategy::fixed_corner();
    if (s == "null-seeking") return TagStrategy::null_seeking(z);
    throw std::invalid_argument("unknown tag strategy '" + s + "' (expected center|null-avoiding|corner|null-seeking)");
}

namespace {

bool fine(const Gauge* g, const Box& cell, const Point& t) { return !g || ball_contains(cell, t, (*g)(t)); }

Point clamp_into(const Box& cell, Point t) {
    for (int a = 0; a < cell.dim(); ++a) t[a] = std::clamp(t[a], cell.axis(a).lo(), cell.axis(a).hi());
    return t;
}

}  // namespace

std::optional<Point> strategy_tag(const TagStrategy& s, const Box& cell, const Box& domain, const Gauge* delta) {
    switch (s.kind) {
        case TagStrategy::Kind::center: {
            const Point c = cell.center();
            if (fine(delta, cell, c)) return c;
            return std::nullopt;
        }
        case TagStrategy::Kind::fixed_corner: {
            const Point c = cell.lower_corner();
            if (fine(delta, cell, c)) return c;
            return std::nullopt;
        }
        case TagStrategy::Kind::null_avoiding: {
            const Point c = cell.center();
            double xi = kAvoidOffset;
            for (int attempt = 0; attempt <= kAvoidHalvings; ++attempt, xi *= 0.5) {
                Point t = c;
                for (int a = 0; a < cell.dim(); ++a) t[a] += xi * cell.axis(a).length();
                t = clamp_into(cell, t);
                if (s.nullset && s.nullset->contains(t)) continue;
                if (fine(delta, cell, t)) return t;
            }
            return std::nullopt;
        }
        case TagStrategy::Kind::null_seeking: {
            if (!s.nullset) return std::nullopt;
            const auto t = s.nullset->nearest(cell.center());
            if (!t || !domain.contains(*t)) return std::nullopt;
            if (fine(delta, cell, *t)) return t;
            return std::nullopt;
        }
    }
    return std::nullopt;
}

RefinementDepthExceeded::RefinementDepthExceeded(const Box& cell, int depth)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "refinement depth " << depth << " exceeded at cell [" << cell.x().lo() << ", " << cell.x().hi() << "]";
          if (cell.dim() == 2) os << " x [" << cell.y().lo() << ", " << cell.y().hi() << "]";
          return os.str();
      }()),
      cell_(cell),
      depth_(depth) {}

namespace {

class CousinRun {
public:
    CousinRun(const Box& domain, const Gauge& g, Discipline d, const TagStrategy& s, const CousinOptions& o,
              const CellSink& sink)
        : domain_(domain), g_(g), d_(d), s_(s), o_(o), sink_(sink) {}

    // constant gauge, centre tags, no hint or anchors: the centre is the only
    // candidate, so choose() reduces to one fineness test
    bool plain_1d() const {
        return domain_.dim() == 1 && g_.constant_value() && !o_.hint && g_.anchors().empty() &&
               (d_ == Discipline::hk || s_.kind == TagStrategy::Kind::center);
    }

    // same midpoint split and fineness test as Box::bisect and ball_contains
    void process_plain(double lo, double hi, int level, double r) {
        const double mid = 0.5 * (lo + hi);
        if (std::max(hi - mid, mid - lo) < r) {
            sink_(Point(mid), Box(Interval1(lo, hi)));
            return;
        }
        if (level >= o_.max_depth) throw RefinementDepthExceeded(Box(Interval1(lo, hi)), o_.max_depth);
        process_plain(lo, mid, level + 1, r);
        process_plain(mid, hi, level + 1, r);
    }

    void process(const Box& cell, int lx, int ly) {
        const auto t = choose(cell);
        if (!t) {
            if (std::max(lx, ly) >= o_.max_depth) throw RefinementDepthExceeded(cell, o_.max_depth);
            std::array<Box, 4> kids;
            const int n = cell.bisect(kids);
            for (int i = 0; i < n; ++i) process(kids[static_cast<std::size_t>(i)], lx + 1, ly + 1);
            return;
        }
        if (o_.hint) {
            const int axis = hint_axis(cell);
            if (axis >= 0) {
                const int lvl = axis == 0 ? lx : ly;
                if (lvl >= o_.max_depth) throw RefinementDepthExceeded(cell, o_.max_depth);
                const auto halves = cell.split_axis(axis);
                for (const auto& h : halves) process(h, axis == 0 ? lx + 1 : lx, axis == 1 ? ly + 1 : ly);
                return;
            }
        }
        sink_(*t, cell);
    }

private:
    bool is_fine(const Box& cell, const Point& t) const { return ball_contains(cell, t, g_(t)); }

    std::optional<Point> anchor_tag(const Box& cell, const std::vector<Locus>& anchors) const {
        if (anchors.empty()) return std::nullopt;
        const Point c = cell.center();
        for (const auto& a : anchors) {
            const Point p = a.project(c);
            const bool placed = d_ == Discipline::hk ? cell.contains(p) : domain_.contains(p);
            if (placed && is_fine(cell, p)) return p;
        }
        return std::nullopt;
    }

    std::optional<Point> choose(const Box& cell) const {
        if (o_.hint) {
            // cells meeting a hint locus are tagged on it
            std::vector<Locus> touching;
            for (const auto& l : o_.hint->loci)
                if (l.distance(cell) == 0.0) touching.push_back(l);
            if (!touching.empty()) {
                auto t = anchor_tag(cell, touching);
                if (t) return t;
            }
        }
        const Point c = cell.center();
        const bool moves = d_ == Discipline::mcshane && s_.kind != TagStrategy::Kind::center;
        if (is_fine(cell, c)) {
            if (moves) {
                auto t = strategy_tag(s_, cell, domain_, &g_);
                if (t) return t;
            }
            return c;
        }
        if (moves) {
            auto t = strategy_tag(s_, cell, domain_, &g_);
            if (t) return t;
        }
        return anchor_tag(cell, g_.anchors());
    }

    /// Axis the hint wants split, or -1.
    int hint_axis(const Box& cell) const {
        const auto& h = *o_.hint;
        int best = -1;
        double excess = 1.0;
        for (const auto& l : h.loci) {
            const double d = l.distance(cell);
            double limit = h.eps;
            if (d > 0.0) {
                double p = d;
                for (int i = 1; i < h.order; ++i) p *= d;
                limit = std::min(h.cap, h.coeff * p);
            }
            for (int a = 0; a < cell.dim(); ++a) {
                if (!l.constrains(a)) continue;
                const double r = cell.axis(a).length() / limit;
                if (r > excess) {
                    excess = r;
                    best = a;
                }
            }
        }
        return best;
    }

    const Box& domain_;
    const Gauge& g_;
    Discipline d_;
    const TagStrategy& s_;
    const CousinOptions& o_;
    const CellSink& sink_;
};

}  // namespace

void for_each_cousin_cell(const Box& domain, const Gauge& delta, Discipline discipline, const TagStrategy& strategy,
                          const CousinOptions& opts, const CellSink& sink) {
    if (delta.dim() != domain.dim()) throw GaugeError("cousin: gauge and domain dimensions differ");
    if (discipline == Discipline::hk && strategy.kind != TagStrategy::Kind::center)
        throw std::invalid_argument("tag strategy '" + strategy.name() + "' needs McShane discipline");
    if (opts.max_depth < 0) throw std::invalid_argument("cousin: negative depth budget");
    CousinRun run(domain, delta, discipline, strategy, opts, sink);
    if (run.plain_1d())
        run.process_plain(domain.x().lo(), domain.x().hi(), 0, *delta.constant_value());
    else
        run.process(domain, 0, 0);
}

TaggedPartition cousin_partition(const Box& domain, const Gauge& delta, Discipline discipline,
                                 const TagStrategy& strategy, const CousinOptions& opts) {
    std::vector<TaggedInterval> items;
    for_each_cousin_cell(domain, delta, discipline, strategy, opts,
                         [&items](const Point& t, const Box& c) { items.push_back({t, c}); });
    return TaggedPartition(domain, discipline, std::move(items));
}

TaggedPartition product_partition(const TaggedPartition& outer, const std::vector<TaggedPartition>& family) {
    if (outer.domain().dim() != 1) throw std::invalid_argument("product_partition: outer partition must be 1D");
    if (family.size() != outer.size())
        throw std::invalid_argument("product_partition: family has " + std::to_string(family.size()) +
                                    " partitions for " + std::to_string(outer.size()) + " outer tags");
    if (family.empty()) throw std::invalid_argument("product_partition: empty outer partition");
    const Box dom2 = family.front().domain();
    for (const auto& q : family)
        if (!(q.domain() == dom2) || q.domain().dim() != 1)
            throw std::invalid_argument("product_partition: family members must share one 1D domain");
    const Discipline d = outer.discipline() == Discipline::hk && std::all_of(family.begin(), family.end(), [](const auto& q) {
                             return q.discipline() == Discipline::hk;
                         })
                             ? Discipline::hk
                             : Discipline::mcshane;
    std::vector<TaggedInterval> items;
    for (std::size_t i = 0; i < outer.size(); ++i)
        for (const auto& it : family[i])
            items.push_back({Point(outer[i].tag[0], it.tag[0]), Box(outer[i].cell.x(), it.cell.x())});
    return TaggedPartition(Box(outer.domain().x(), dom2.x()), d, std::move(items));
}

std::vector<Interval1> second_coord_refinement(const TaggedPartition& p) {
    if (p.domain().dim() != 2) throw std::invalid_argument("second_coord_refinement needs a 2D partition");
    std::vector<double> edges{p.domain().y().lo(), p.domain().y().hi()};
    for (const auto& it : p) {
        edges.push_back(it.cell.y().lo());
        edges.push_back(it.cell.y().hi());
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::vector<Interval1> out;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) out.emplace_back(edges[i], edges[i + 1]);
    return out;
}

TaggedPartition retag(const TaggedPartition& p, const TagStrategy& s, const Gauge* delta) {
    std::vector<TaggedInterval> items;
    items.reserve(p.size());
    for (const auto& it : p) {
        auto t = strategy_tag(s, it.cell, p.domain(), delta);
        if (!t) t = it.cell.center();
        if (!p.domain().contains(*t)) throw std::invalid_argument("retag: strategy produced a tag outside the domain");
        items.push_back({*t, it.cell});
    }
    return TaggedPartition(p.domain(), Discipline::mcshane, std::move(items));
}

std::string jsonl_line(const Point& tag, const Box& cell) {
    json j;
    json t = json::array();
    json c = json::array();
    for (int a = 0; a < cell.dim(); ++a) {
        t.push_back(tag[a]);
        c.push_back({cell.axis(a).lo(), cell.axis(a).hi()});
    }
    j["tag"] = t;
    j["cell"] = c;
    return j.dump();
}

void write_jsonl(std::ostream& os, const TaggedPartition& p) {
    for (const auto& it : p) os << jsonl_line(it.tag, it.cell) << '\n';
}

TaggedPartition read_jsonl(std::istream& is, const Box& domain, Discipline discipline) {
    std::vector<TaggedInterval> items;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        const auto& t = j.at("tag");
        const auto& c = j.at("cell");
        if (t.size() == 1) {
            items.push_back({Point(t[0].get<double>()), Box(Interval1(c[0][0].get<double>(), c[0][1].get<double>()))});
        } else {
            items.push_back({Point(t[0].get<double>(), t[1].get<double>()),
                             Box(Interval1(c[0][0].get<double>(), c[0][1].get<double>()),
                                 Interval1(c[1][0].get<double>(), c[1][1].get<double>()))});
        }
    }
    return TaggedPartition(domain, discipline, std::move(items));
}

}  // namespace gint
