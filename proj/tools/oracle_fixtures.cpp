// Grid oracle for the corpus. Deliberately shares no code with the engine:
// every integrand is re-typed here and summed with plain loops.
//
// usage: oracle_fixtures OUT.json

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace {

using json = nlohmann::json;

constexpr int kGrid1 = 1 << 12;
constexpr int kGrid2 = 1 << 9;
constexpr double kPi = 3.14159265358979323846;

// Kahan summation keeps the million-term sums honest.
struct Kahan {
    double s = 0.0, c = 0.0;
    void add(double v) {
        const double y = v - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

double mid1(const std::function<double(double)>& f) {
    Kahan k;
    const double h = 1.0 / kGrid1;
    for (int i = 0; i < kGrid1; ++i) k.add(f((i + 0.5) * h));
    return k.s * h;
}

double mid2(const std::function<double(double, double)>& f) {
    Kahan k;
    const double h = 1.0 / kGrid2;
    for (int i = 0; i < kGrid2; ++i)
        for (int j = 0; j < kGrid2; ++j) k.add(f((i + 0.5) * h, (j + 0.5) * h));
    return k.s * h * h;
}

// x is "rational" when it is the double nearest p/q for some q <= 2^20.
// Euclid on the exact dyadic x = m / 2^e; any such p/q is a convergent.
bool rational(double x) {
    if (x < 0.0 || x > 1.0) return false;
    if (x == 0.0 || x == 1.0) return true;
    int e = 0;
    double fr = std::frexp(x, &e);  // x = fr * 2^e, fr in [0.5, 1)
    unsigned __int128 num = static_cast<std::uint64_t>(std::ldexp(fr, 53));
    const int shift = 53 - e;
    if (shift > 120) return false;
    unsigned __int128 den = static_cast<unsigned __int128>(1) << shift;
    long long p0 = 0, p1 = 1, q0 = 1, q1 = 0;
    while (den != 0) {
        const auto a = static_cast<long long>(num / den);
        const unsigned __int128 r = num % den;
        num = den;
        den = r;
        const long long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > (1LL << 20)) break;
        p0 = p1;
        p1 = p2;
        q0 = q1;
        q1 = q2;
        if (static_cast<double>(p1) / static_cast<double>(q1) == x) return true;
    }
    return false;
}

// golden-ratio shifted grid: points (i + g) / N with g = (sqrt 5 - 1) / 2
double shifted1(const std::function<double(double)>& f, int& hits) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    Kahan k;
    hits = 0;
    for (int i = 0; i < kGrid1; ++i) {
        const double x = (i + g) / kGrid1;
        const double v = f(x);
        if (v != 0.0) ++hits;
        k.add(v);
    }
    return k.s / kGrid1;
}

// The HK example in the phase variable v = pi / x^2 on [x_min, 1]:
//   int f dx = pi * int_pi^V (sin v / v + cos v / v^2) dv, V = pi / x_min^2.
// A uniform v grid is graded like x^3 toward the singularity. Composite
// Simpson: the midpoint rule leaves an h^2 end term at v = pi of about 4e-4.
double phase_graded(double x_min, int per_period, long long& points) {
    const double v0 = kPi;
    const double v1 = kPi / (x_min * x_min);
    const double h = 2.0 * kPi / per_period;
    long long n = static_cast<long long>(std::ceil((v1 - v0) / h));
    if (n % 2) ++n;
    points = n + 1;
    const double step = (v1 - v0) / static_cast<double>(n);
    auto g = [](double v) { return std::sin(v) / v + std::cos(v) / (v * v); };
    Kahan k;
    for (long long i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        k.add(w * g(v0 + static_cast<double>(i) * step));
    }
    return kPi * k.s * step / 3.0;
}

json entry(std::vector<double> value, const std::string& method, long long points) {
    return json{{"value", value}, {"method", method}, {"points", points}};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: oracle_fixtures OUT.json\n";
        return 1;
    }
    json out;
    out["grid_1d"] = kGrid1;
    out["grid_2d"] = kGrid2;
    json& e = out["entries"];

    const long long n1 = kGrid1, n2 = static_cast<long long>(kGrid2) * kGrid2;
    e["zero1d"] = entry({mid1([](double) { return 0.0; })}, "midpoint", n1);
    e["poly1d"] = entry({mid1([](double x) { return x * x; })}, "midpoint", n1);
    e["zero2d"] = entry({mid2([](double, double) { return 0.0; })}, "midpoint", n2);
    e["const2d"] = entry({mid2([](double, double) { return 2.0; }), mid2([](double, double) { return -1.0; })},
                         "midpoint", n2);
    e["poly_xy"] = entry({mid2([](double x, double y) { return x * y; })}, "midpoint", n2);
    e["sum_xy"] = entry({mid2([](double x, double y) { return x + y; })}, "midpoint", n2);
    e["gauss2d"] = entry({mid2([](double x, double y) { return std::exp(-x * x - y * y); })}, "midpoint", n2);
    e["vector2d"] = entry({mid2([](double x, double y) { return x + y; }), mid2([](double x, double y) { return x * y; })},
                          "midpoint", n2);

    int hits = 0;
    const double dir = shifted1([](double x) { return rational(x) ? 1.0 : 0.0; }, hits);
    e["dirichlet1d"] = entry({dir}, "golden-shifted grid", n1);
    e["dirichlet1d"]["rational_hits"] = hits;

    // the spike sits on x = 0.5, which no midpoint (2i+1)/2^10 reaches
    e["line_mass2d"] =
        entry({mid2([](double x, double y) { return x + y + (x == 0.5 ? 1000.0 : 0.0); })}, "midpoint", n2);
    e["grid_null2d"] =
        entry({mid2([](double x, double y) { return (x == 0.5 || y == 0.5) ? 1.0 : 0.0; })}, "midpoint", n2);

    long long pts = 0;
    const double x_min1 = 1e-3;
    const double g1 = phase_graded(x_min1, 32, pts);
    e["hk1d_cos"] = entry({g1}, "Simpson on a phase-graded grid over [1e-3, 1]", pts);
    e["hk1d_cos"]["tail_bound"] = x_min1 * x_min1;  // |F(x_min)| <= x_min^2

    const double x_min2 = 0.005;
    const double g2 = phase_graded(x_min2, 32, pts);
    Kahan ky;
    for (int j = 0; j < kGrid2; ++j) ky.add(std::exp(-(j + 0.5) / kGrid2));
    const double ey = ky.s / kGrid2;
    e["hk2d_product"] = entry({g2 * ey}, "Simpson on a phase-graded x grid over [0.005, 1] times midpoint y grid",
                              pts * static_cast<long long>(kGrid2));
    e["hk2d_product"]["tail_bound"] = x_min2 * x_min2;

    std::ofstream os(argv[1]);
    if (!os) {
        std::cerr << "cannot write " << argv[1] << "\n";
        return 1;
    }
    os << out.dump(2) << "\n";
    return 0;
}
