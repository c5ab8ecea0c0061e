#pragma once

// Lebesgue-null subsets of an interval: finite point sets, "rational" points,
// and in 2D the cross sets (Z1 x [a2,b2]) u ([a1,b1] x Z2).

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gint/geometry.hpp"

namespace gint {

/// Point, vertical line or horizontal line. In 1D only x is used.
struct Locus {
    std::optional<double> x;
    std::optional<double> y;

    static Locus point1(double x) { return {x, std::nullopt}; }
    static Locus point2(double x, double y) { return {x, y}; }
    static Locus vline(double x) { return {x, std::nullopt}; }
    static Locus hline(double y) { return {std::nullopt, y}; }

    /// Max-norm distance over the constrained axes.
    double distance(const Point& t) const;
    /// Gap between the cell and the locus, 0 if they meet.
    double distance(const Box& cell) const;
    /// Closest point of the locus to t.
    Point project(const Point& t) const;
    bool constrains(int axis) const { return axis == 0 ? x.has_value() : y.has_value(); }

    friend bool operator==(const Locus&, const Locus&) = default;
};

nlohmann::json to_json(const Locus& l);
Locus locus_from_json(const nlohmann::json& j);

/// True iff x is the double nearest to p/q for some integers p, q with 0 < q <= max_den.
/// Decided exactly from the continued fraction of the binary value of x.
bool is_rational(double x, std::int64_t max_den = std::int64_t{1} << 20);

class NullSet {
public:
    enum class Kind { empty, points, rationals, cross };

    static NullSet empty(int dim);
    static NullSet points(std::vector<double> xs);  // 1D
    static NullSet points(std::vector<Point> ps);   // 2D
    static NullSet rationals(std::int64_t max_den = std::int64_t{1} << 20);
    /// (z1 x R) u (R x z2); both factors 1D.
    static NullSet cross(const NullSet& z1, const NullSet& z2);
    static NullSet vertical_lines(std::vector<double> xs);
    static NullSet horizontal_lines(std::vector<double> ys);

    /// Parses "empty", "rationals", "points:a,b", "vlines:a,b", "hlines:a,b",
    /// "grid:xs;ys" (xs and ys comma lists, either may be empty).
    static NullSet parse(const std::string& spec, int dim);

    int dim() const { return dim_; }
    Kind kind() const { return kind_; }
    bool is_empty() const { return kind_ == Kind::empty; }

    bool contains(const Point& t) const;
    /// A point of the set near t, if the set has one we can name.
    std::optional<Point> nearest(const Point& t) const;
    /// Points and lines usable as anchor tags. Rationals contribute nothing.
    std::vector<Locus> loci() const;

    const NullSet* first() const { return z1_.get(); }
    const NullSet* second() const { return z2_.get(); }

    nlohmann::json to_json() const;
    static NullSet from_json(const nlohmann::json& j);
    std::string describe() const;

    friend bool operator==(const NullSet& a, const NullSet& b) { return a.to_json() == b.to_json(); }

private:
    int dim_ = 1;
    Kind kind_ = Kind::empty;
    std::vector<double> xs_;
    std::vector<Point> ps_;
    std::int64_t max_den_ = 0;
    std::shared_ptr<const NullSet> z1_;
    std::shared_ptr<const NullSet> z2_;
};

/// Indicator of a null set as a function value.
inline double indicator(const NullSet& z, const Point& t) { return z.contains(t) ? 1.0 : 0.0; }

}  // namespace gint
