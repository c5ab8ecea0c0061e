#pragma once

// Tagged partitions, fineness, and the bisection (Cousin) generator.

#include <cstddef>
#include <functional>
#include <memory>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gint/gauges.hpp"
#include "gint/geometry.hpp"
#include "gint/nullset.hpp"

namespace gint {

/// McShane tags may sit anywhere in the domain; HK tags must lie in their cell.
enum class Discipline { mcshane, hk };

std::string to_string(Discipline d);
Discipline parse_discipline(const std::string& s);

struct TaggedInterval {
    Point tag;
    Box cell;

    friend bool operator==(const TaggedInterval&, const TaggedInterval&) = default;
};

class TaggedPartition {
public:
    TaggedPartition(Box domain, Discipline discipline, std::vector<TaggedInterval> items = {});

    const Box& domain() const { return domain_; }
    Discipline discipline() const { return discipline_; }
    const std::vector<TaggedInterval>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    const TaggedInterval& operator[](std::size_t i) const { return items_[i]; }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }

    /// Largest cell diameter (max norm).
    double mesh() const;

private:
    Box domain_;
    Discipline discipline_;
    std::vector<TaggedInterval> items_;
};

struct ValidityReport {
    std::vector<std::pair<std::size_t, std::size_t>> overlapping_pairs;
    std::vector<std::size_t> cells_outside_domain;
    std::vector<std::size_t> tags_outside_domain;
    std::vector<std::size_t> tags_outside_cell;  // HK only
    double cover_deficit = 0.0;                  // |measure(domain) - sum of cell measures|
    double cover_tolerance = 0.0;
    bool full = false;

    bool valid() const;
    std::string summary() const;
};

ValidityReport validate(const TaggedPartition& p, bool full);

/// Every cell inside the open ball B(tag, delta(tag)).
bool is_delta_fine(const TaggedPartition& p, const Gauge& delta);

struct TagStrategy {
    enum class Kind { center, null_avoiding, fixed_corner, null_seeking };

    Kind kind = Kind::center;
    std::shared_ptr<const NullSet> nullset;

    static TagStrategy center() { return {}; }
    static TagStrategy null_avoiding(NullSet z);
    static TagStrategy fixed_corner() { return {Kind::fixed_corner, nullptr}; }
    /// Moves tags onto the null set when fineness allows. Adversarial; used to
    /// show that null-set sums stay small even when tags do hit the set.
    static TagStrategy null_seeking(NullSet z);

    std::string name() const;
};

/// "center", "null-avoiding", "corner", "null-seeking". The last two kinds need z.
TagStrategy parse_tag_strategy(const std::string& s, const NullSet& z);

/// Irrational offset fraction for null-avoiding tags.
inline constexpr double kAvoidOffset = 0.35355339059327373;  // sqrt(2)/4
inline constexpr int kAvoidHalvings = 8;

/// Tag proposed by a strategy for a cell, or nullopt (caller falls back to center).
/// With a gauge the tag must also be fine for the cell.
std::optional<Point> strategy_tag(const TagStrategy& s, const Box& cell, const Box& domain,
                                  const Gauge* delta = nullptr);

/// Extra splitting applied to cells that are already fine: near each locus the
/// cell width along the locus' constrained axes must not exceed
/// coeff * dist^order, and cells meeting a locus must be no wider than eps and
/// are tagged on it. Splits are single-axis, so a strip stays fine for the
/// gauge that accepted its parent as long as its center is.
struct ResolutionHint {
    std::vector<Locus> loci;
    double coeff = 1.0 / 16.0;
    int order = 3;
    double eps = 1e-3;
    double cap = std::numeric_limits<double>::infinity();  // width limit away from the loci
};

class RefinementDepthExceeded : public std::runtime_error {
public:
    RefinementDepthExceeded(const Box& cell, int depth);
    const Box& cell() const { return cell_; }
    int depth() const { return depth_; }

private:
    Box cell_;
    int depth_;
};

struct CousinOptions {
    int max_depth = 40;
    std::optional<ResolutionHint> hint;
};

using CellSink = std::function<void(const Point& tag, const Box& cell)>;

/// Streams the cells of the bisection partition in depth-first, x-major order.
///
/// A cell is accepted when its center is fine (the strategy may then move the
/// McShane tag); otherwise the strategy tag and the gauge's anchors are tried
/// before the cell is split.
void for_each_cousin_cell(const Box& domain, const Gauge& delta, Discipline discipline, const TagStrategy& strategy,
                          const CousinOptions& opts, const CellSink& sink);

TaggedPartition cousin_partition(const Box& domain, const Gauge& delta, Discipline discipline,
                                 const TagStrategy& strategy = TagStrategy::center(), const CousinOptions& opts = {});

/// {((t1,t2), I1 x I2)} for (t1,I1) = outer[i] and (t2,I2) in family[i].
TaggedPartition product_partition(const TaggedPartition& outer, const std::vector<TaggedPartition>& family);

/// Elementary y-intervals cut by every y-edge of P.
std::vector<Interval1> second_coord_refinement(const TaggedPartition& p);

/// Same cells, new tags; the result is a McShane partition. With a gauge,
/// moved tags that are not fine fall back to the center.
TaggedPartition retag(const TaggedPartition& p, const TagStrategy& s, const Gauge* delta = nullptr);

/// One JSON object per line: {"tag":[...],"cell":[[lo,hi],...]}.
std::string jsonl_line(const Point& tag, const Box& cell);
void write_jsonl(std::ostream& os, const TaggedPartition& p);
TaggedPartition read_jsonl(std::istream& is, const Box& domain, Discipline discipline);

}  // namespace gint
