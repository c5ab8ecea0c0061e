#pragma once

// Compact intervals in R^1 and R^2 with the maximum norm.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace gint {

struct Point {
    std::array<double, 2> c{0.0, 0.0};
    int dim = 1;

    Point() = default;
    explicit Point(double x) : c{x, 0.0}, dim(1) {}
    Point(double x, double y) : c{x, y}, dim(2) {}

    double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

    friend bool operator==(const Point& a, const Point& b) {
        if (a.dim != b.dim) return false;
        for (int i = 0; i < a.dim; ++i)
            if (a[i] != b[i]) return false;
        return true;
    }
};

/// Max-norm distance between two points of equal dimension.
double distance_inf(const Point& a, const Point& b);

class GeometryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Closed non-degenerate interval [lo, hi] with lo < hi.
class Interval1 {
public:
    Interval1(double lo, double hi);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double length() const { return hi_ - lo_; }
    double mid() const { return 0.5 * (lo_ + hi_); }
    bool contains(double t) const { return lo_ <= t && t <= hi_; }

    friend bool operator==(const Interval1&, const Interval1&) = default;

private:
    struct Unchecked {};
    Interval1(double lo, double hi, Unchecked) : lo_(lo), hi_(hi) {}
    friend class Box;

    double lo_;
    double hi_;
};

/// [a1,b1] x [a2,b2].
class Interval2 {
public:
    Interval2(Interval1 x, Interval1 y) : x_(x), y_(y) {}
    const Interval1& x() const { return x_; }
    const Interval1& y() const { return y_; }

    friend bool operator==(const Interval2&, const Interval2&) = default;

private:
    Interval1 x_;
    Interval1 y_;
};

/// A 1D or 2D compact cell. The common currency of partitions and gauges.
class Box {
public:
    /// The unit interval [0, 1].
    Box() = default;
    explicit Box(Interval1 x);
    Box(Interval1 x, Interval1 y);
    Box(const Interval2& i2);  // NOLINT(google-explicit-constructor)

    int dim() const { return dim_; }
    const Interval1& axis(int i) const { return axes_[static_cast<std::size_t>(i)]; }
    const Interval1& x() const { return axes_[0]; }
    const Interval1& y() const;

    double measure() const;
    /// Largest side length (the max-norm diameter).
    double diameter() const;
    Point center() const { return dim_ == 1 ? Point(axes_[0].mid()) : Point(axes_[0].mid(), axes_[1].mid()); }
    Point lower_corner() const;

    bool contains(const Point& t) const;
    bool contains(const Box& other) const;

    /// Halves every axis; returns 2 (1D) or 4 (2D) children, x-major order.
    int bisect(std::array<Box, 4>& out) const;
    /// Halves one axis only.
    std::array<Box, 2> split_axis(int axis) const;

    Interval2 as_interval2() const;

    friend bool operator==(const Box&, const Box&) = default;

private:
    std::array<Interval1, 2> axes_{Interval1(0.0, 1.0, Interval1::Unchecked{}),
                                   Interval1(0.0, 1.0, Interval1::Unchecked{})};
    int dim_ = 1;

    static Box unchecked(int dim, double x0, double x1, double y0, double y1);
};

double measure(const Interval1& i);
double measure(const Interval2& i);
double measure(const Box& b);

Box product(const Interval1& x, const Interval1& y);

/// Open max-norm ball B(t, r) contains the closed cell: every corner strictly inside.
inline bool ball_contains(const Box& cell, const Point& t, double r) {
    if (cell.dim() != t.dim) throw GeometryError("ball_contains: dimension mismatch");
    for (int i = 0; i < cell.dim(); ++i) {
        const double reach = std::max(cell.axis(i).hi() - t[i], t[i] - cell.axis(i).lo());
        if (!(reach < r)) return false;
    }
    return true;
}

/// Common part of two cells; may be degenerate (zero measure) but never inverted.
struct Overlap {
    int dim = 1;
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{0.0, 0.0};

    double measure() const;
    bool degenerate() const { return measure() == 0.0; }
};

/// Returns nullopt when the cells are disjoint; throws on dimension mismatch.
std::optional<Overlap> intersect(const Box& a, const Box& b);
double overlap_measure(const Box& a, const Box& b);
bool nonoverlapping(const Box& a, const Box& b);

}  // namespace gint
