#include "gint/nullset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gint {

using nlohmann::json;

double Locus::distance(const Point& t) const {
    double d = 0.0;
    if (x) d = std::max(d, std::abs(t[0] - *x));
    if (y && t.dim == 2) d = std::max(d, std::abs(t[1] - *y));
    return d;
}

double Locus::distance(const Box& cell) const {
    double d = 0.0;
    auto gap = [](const Interval1& i, double c) { return std::max({0.0, i.lo() - c, c - i.hi()}); };
    if (x) d = std::max(d, gap(cell.x(), *x));
    if (y && cell.dim() == 2) d = std::max(d, gap(cell.y(), *y));
    return d;
}

Point Locus::project(const Point& t) const {
    Point p = t;
    if (x) p[0] = *x;
    if (y && t.dim == 2) p[1] = *y;
    return p;
}

json to_json(const Locus& l) {
    json j = json::object();
    j["x"] = l.x ? json(*l.x) : json(nullptr);
    j["y"] = l.y ? json(*l.y) : json(nullptr);
    return j;
}

Locus locus_from_json(const json& j) {
    Locus l;
    if (j.contains("x") && !j["x"].is_null()) l.x = j["x"].get<double>();
    if (j.contains("y") && !j["y"].is_null()) l.y = j["y"].get<double>();
    return l;
}

bool is_rational(double x, std::int64_t max_den) {
    if (!std::isfinite(x)) return false;
    if (x == 0.0) return true;
    const double ax = std::abs(x);
    // p/q with q <= max_den is either 0 or at least 1/max_den in size
    if (ax < 0.5 / static_cast<double>(max_den)) return false;
    if (ax >= 0x1p60) return false;

    // exact value of ax as num/den with den a power of two
    int e = 0;
    const double m = std::frexp(ax, &e);  // ax = m * 2^e, m in [0.5, 1)
    using i128 = __int128;
    i128 num = static_cast<i128>(std::ldexp(m, 53));
    int shift = 53 - e;
    i128 den = 1;
    if (shift >= 0) {
        den = i128{1} << shift;
    } else {
        num <<= -shift;
    }

    // convergents h/k of num/den; fl(p/q) == x forces |x - p/q| < 1/(2 q^2)
    // for the sizes allowed here, so p/q must be one of them
    i128 h_prev = 0, h = 1, k_prev = 1, k = 0;
    i128 a = num, b = den;
    while (b != 0) {
        const i128 q = a / b;
        const i128 r = a - q * b;
        const i128 h_next = q * h + h_prev;
        const i128 k_next = q * k + k_prev;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
        if (k > max_den) break;
        if (static_cast<double>(h) / static_cast<double>(k) == ax) return true;
        a = b;
        b = r;
    }
    return false;
}

NullSet NullSet::empty(int dim) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("null set dimension must be 1 or 2");
    NullSet z;
    z.dim_ = dim;
    z.kind_ = Kind::empty;
    return z;
}

NullSet NullSet::points(std::vector<double> xs) {
    NullSet z;
    z.dim_ = 1;
    z.kind_ = xs.empty() ? Kind::empty : Kind::points;
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    z.xs_ = std::move(xs);
    return z;
}

NullSet NullSet::points(std::vector<Point> ps) {
    NullSet z;
    z.dim_ = 2;
    for (const auto& p : ps)
        if (p.dim != 2) throw std::invalid_argument("2D point set needs 2D points");
    z.kind_ = ps.empty() ? Kind::empty : Kind::points;
    z.ps_ = std::move(ps);
    return z;
}

NullSet NullSet::rationals(std::int64_t max_den) {
    if (max_den < 1) throw std::invalid_argument("rationals: max denominator must be positive");
    NullSet z;
    z.dim_ = 1;
    z.kind_ = Kind::rationals;
    z.max_den_ = max_den;
    return z;
}

NullSet NullSet::cross(const NullSet& z1, const NullSet& z2) {
    if (z1.dim() != 1 || z2.dim() != 1) throw std::invalid_argument("cross null set needs 1D factors");
    if (z1.is_empty() && z2.is_empty()) return empty(2);
    NullSet z;
    z.dim_ = 2;
    z.kind_ = Kind::cross;
    z.z1_ = std::make_shared<NullSet>(z1);
    z.z2_ = std::make_shared<NullSet>(z2);
    return z;
}

NullSet NullSet::vertical_lines(std::vector<double> xs) { return cross(points(std::move(xs)), empty(1)); }

NullSet NullSet::horizontal_lines(std::vector<double> ys) { return cross(empty(1), points(std::move(ys))); }

namespace {

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad number '" + item + "' in null set spec");
        }
        if (used != item.size()) throw std::invalid_argument("bad number '" + item + "' in null set spec");
        out.push_back(v);
    }
    return out;
}

}  // namespace

NullSet NullSet::parse(const std::string& spec, int dim) {
    if (spec == "empty") return empty(dim);
    if (spec == "rationals") {
        if (dim != 1) throw std::invalid_argument("'rationals' is a 1D null set");
        return rationals();
    }
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("unknown null set spec '" + spec + "'");
    const std::string kind = spec.substr(0, colon);
    const std::string body = spec.substr(colon + 1);
    if (kind == "points") {
        if (dim == 1) return points(parse_list(body));
        // 2D points are written x/y,x/y
        std::vector<Point> ps;
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto slash = item.find('/');
            if (slash == std::string::npos) throw std::invalid_argument("2D point needs the form x/y");
            const auto xy = parse_list(item.substr(0, slash) + "," + item.substr(slash + 1));
            if (xy.size() != 2) throw std::invalid_argument("2D point needs the form x/y");
            ps.emplace_back(xy[0], xy[1]);
        }
        return points(std::move(ps));
    }
    if (dim != 2) throw std::invalid_argument("'" + kind + "' is a 2D null set");
    if (kind == "vlines") return vertical_lines(parse_list(body));
    if (kind == "hlines") return horizontal_lines(parse_list(body));
    if (kind == "grid") {
        const auto semi = body.find(';');
        if (semi == std::string::npos) throw std::invalid_argument("grid spec needs the form xs;ys");
        return cross(points(parse_list(body.substr(0, semi))), points(parse_list(body.substr(semi + 1))));
    }
    throw std::invalid_argument("unknown null set spec '" + spec + "'");
}

bool NullSet::contains(const Point& t) const {
    if (t.dim != dim_) throw std::invalid_argument("NullSet::contains: dimension mismatch");
    switch (kind_) {
        case Kind::empty: return false;
        case Kind::points:
            if (dim_ == 1) return std::binary_search(xs_.begin(), xs_.end(), t[0]);
            return std::find(ps_.begin(), ps_.end(), t) != ps_.end();
        case Kind::rationals: return is_rational(t[0], max_den_);
        case Kind::cross: return z1_->contains(Point(t[0])) || z2_->contains(Point(t[1]));
    }
    return false;
}

std::optional<Point> NullSet::nearest(const Point& t) const {
    if (t.dim != dim_) throw std::invalid_argument("NullSet::nearest: dimension mismatch");
    switch (kind_) {
        case Kind::empty: return std::nullopt;
        case Kind::rationals:
            // the dyadic points the engine produces are rational already
            if (contains(t)) return t;
            return std::nullopt;
        case Kind::points: {
            if (dim_ == 1) {
                double best = xs_.front();
                for (double x : xs_)
                    if (std::abs(x - t[0]) < std::abs(best - t[0])) best = x;
                return Point(best);
            }
            Point best = ps_.front();
            for (const auto& p : ps_)
                if (distance_inf(p, t) < distance_inf(best, t)) best = p;
            return best;
        }
        case Kind::cross: {
            const auto px = z1_->nearest(Point(t[0]));
            const auto py = z2_->nearest(Point(t[1]));
            if (px && (!py || std::abs((*px)[0] - t[0]) <= std::abs((*py)[0] - t[1])))
                return Point((*px)[0], t[1]);
            if (py) return Point(t[0], (*py)[0]);
            return std::nullopt;
        }
    }
    return std::nullopt;
}

std::vector<Locus> NullSet::loci() const {
    std::vector<Locus> out;
    switch (kind_) {
        case Kind::empty:
        case Kind::rationals: break;
        case Kind::points:
            if (dim_ == 1)
                for (double x : xs_) out.push_back(Locus::point1(x));
            else
                for (const auto& p : ps_) out.push_back(Locus::point2(p[0], p[1]));
            break;
        case Kind::cross:
            for (const auto& l : z1_->loci()) out.push_back(Locus::vline(*l.x));
            for (const auto& l : z2_->loci()) out.push_back(Locus::hline(*l.x));
            break;
    }
    return out;
}

json NullSet::to_json() const {
    json j;
    j["dim"] = dim_;
    switch (kind_) {
        case Kind::empty: j["kind"] = "empty"; break;
        case Kind::points:
            j["kind"] = "points";
            if (dim_ == 1) {
                j["points"] = xs_;
            } else {
                json arr = json::array();
                for (const auto& p : ps_) arr.push_back({p[0], p[1]});
                j["points"] = arr;
            }
            break;
        case Kind::rationals:
            j["kind"] = "rationals";
            j["max_den"] = max_den_;
            break;
        case Kind::cross:
            j["kind"] = "cross";
            j["z1"] = z1_->to_json();
            j["z2"] = z2_->to_json();
            break;
    }
    return j;
}

NullSet NullSet::from_json(const json& j) {
    const int dim = j.at("dim").get<int>();
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "empty") return empty(dim);
    if (kind == "rationals") return rationals(j.at("max_den").get<std::int64_t>());
    if (kind == "cross") return cross(from_json(j.at("z1")), from_json(j.at("z2")));
    if (kind == "points") {
        if (dim == 1) return points(j.at("points").get<std::vector<double>>());
        std::vector<Point> ps;
        for (const auto& p : j.at("points")) ps.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        return points(std::move(ps));
    }
    throw std::invalid_argument("unknown null set kind '" + kind + "'");
}

std::string NullSet::describe() const {
    std::ostringstream os;
    auto list = [&os](const std::vector<double>& xs) {
        for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
    };
    switch (kind_) {
        case Kind::empty: os << "empty"; break;
        case Kind::rationals: os << "rationals(q<=" << max_den_ << ")"; break;
        case Kind::points:
            os << "points:";
            if (dim_ == 1) {
                list(xs_);
            } else {
                for (std::size_t i = 0; i < ps_.size(); ++i) os << (i ? "," : "") << ps_[i][0] << "/" << ps_[i][1];
            }
            break;
        case Kind::cross: os << "cross(" << z1_->describe() << " ; " << z2_->describe() << ")"; break;
    }
    return os.str();
}

}  // namespace gint
