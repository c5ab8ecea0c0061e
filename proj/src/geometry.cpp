#include "gint/geometry.hpp"

#include <algorithm>
#include <string>

namespace gint {

double distance_inf(const Point& a, const Point& b) {
    if (a.dim != b.dim) throw GeometryError("distance_inf: dimension mismatch");
    double d = 0.0;
    for (int i = 0; i < a.dim; ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

Interval1::Interval1(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw GeometryError("interval endpoints must be finite");
    if (!(lo < hi))
        throw GeometryError("degenerate interval [" + std::to_string(lo) + ", " + std::to_string(hi) +
                            "]");
}

Box::Box(Interval1 x) : axes_{x, x}, dim_(1) {}

Box::Box(Interval1 x, Interval1 y) : axes_{x, y}, dim_(2) {}

Box::Box(const Interval2& i2) : axes_{i2.x(), i2.y()}, dim_(2) {}

const Interval1& Box::y() const {
    if (dim_ != 2) throw GeometryError("1D box has no y factor");
    return axes_[1];
}

Box Box::unchecked(int dim, double x0, double x1, double y0, double y1) {
    Box b;
    b.dim_ = dim;
    b.axes_[0] = Interval1(x0, x1, Interval1::Unchecked{});
    b.axes_[1] = dim == 2 ? Interval1(y0, y1, Interval1::Unchecked{}) : b.axes_[0];
    return b;
}

double Box::measure() const {
    double m = axes_[0].length();
    if (dim_ == 2) m *= axes_[1].length();
    return m;
}

double Box::diameter() const {
    double d = axes_[0].length();
    if (dim_ == 2) d = std::max(d, axes_[1].length());
    return d;
}

Point Box::lower_corner() const {
    return dim_ == 1 ? Point(axes_[0].lo()) : Point(axes_[0].lo(), axes_[1].lo());
}

bool Box::contains(const Point& t) const {
    if (t.dim != dim_) throw GeometryError("Box::contains: dimension mismatch");
    for (int i = 0; i < dim_; ++i)
        if (!axis(i).contains(t[i])) return false;
    return true;
}

bool Box::contains(const Box& other) const {
    if (other.dim_ != dim_) throw GeometryError("Box::contains: dimension mismatch");
    for (int i = 0; i < dim_; ++i)
        if (other.axis(i).lo() < axis(i).lo() || other.axis(i).hi() > axis(i).hi()) return false;
    return true;
}

int Box::bisect(std::array<Box, 4>& out) const {
    const double x0 = axes_[0].lo(), x1 = axes_[0].hi(), xm = axes_[0].mid();
    if (dim_ == 1) {
        out[0] = unchecked(1, x0, xm, 0, 0);
        out[1] = unchecked(1, xm, x1, 0, 0);
        return 2;
    }
    const double y0 = axes_[1].lo(), y1 = axes_[1].hi(), ym = axes_[1].mid();
    out[0] = unchecked(2, x0, xm, y0, ym);
    out[1] = unchecked(2, x0, xm, ym, y1);
    out[2] = unchecked(2, xm, x1, y0, ym);
    out[3] = unchecked(2, xm, x1, ym, y1);
    return 4;
}

std::array<Box, 2> Box::split_axis(int axis) const {
    if (axis < 0 || axis >= dim_) throw GeometryError("split_axis: bad axis");
    const double lo = axes_[static_cast<std::size_t>(axis)].lo();
    const double hi = axes_[static_cast<std::size_t>(axis)].hi();
    const double m = 0.5 * (lo + hi);
    if (dim_ == 1) return {unchecked(1, lo, m, 0, 0), unchecked(1, m, hi, 0, 0)};
    if (axis == 0)
        return {unchecked(2, lo, m, axes_[1].lo(), axes_[1].hi()),
                unchecked(2, m, hi, axes_[1].lo(), axes_[1].hi())};
    return {unchecked(2, axes_[0].lo(), axes_[0].hi(), lo, m),
            unchecked(2, axes_[0].lo(), axes_[0].hi(), m, hi)};
}

Interval2 Box::as_interval2() const {
    if (dim_ != 2) throw GeometryError("as_interval2 on a 1D box");
    return Interval2(axes_[0], axes_[1]);
}

double measure(const Interval1& i) { return i.length(); }
double measure(const Interval2& i) { return i.x().length() * i.y().length(); }
double measure(const Box& b) { return b.measure(); }

Box product(const Interval1& x, const Interval1& y) { return Box(x, y); }

double Overlap::measure() const {
    double m = hi[0] - lo[0];
    if (dim == 2) m *= hi[1] - lo[1];
    return m;
}

std::optional<Overlap> intersect(const Box& a, const Box& b) {
    if (a.dim() != b.dim()) throw GeometryError("intersect: dimension mismatch");
    Overlap o;
    o.dim = a.dim();
    for (int i = 0; i < a.dim(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        o.lo[k] = std::max(a.axis(i).lo(), b.axis(i).lo());
        o.hi[k] = std::min(a.axis(i).hi(), b.axis(i).hi());
        if (o.lo[k] > o.hi[k]) return std::nullopt;
    }
    return o;
}

double overlap_measure(const Box& a, const Box& b) {
    const auto o = intersect(a, b);
    return o ? o->measure() : 0.0;
}

bool nonoverlapping(const Box& a, const Box& b) { return overlap_measure(a, b) == 0.0; }

}  // namespace gint
