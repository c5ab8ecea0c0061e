#include "gint/vector_value.hpp"

#include <algorithm>
#include <cmath>

namespace gint {

std::string to_string(Norm n) {
    switch (n) {
        case Norm::euclid: return "euclid";
        case Norm::max: return "max";
        case Norm::sum: return "sum";
    }
    return "euclid";
}

Norm parse_norm(const std::string& s) {
    if (s == "euclid") return Norm::euclid;
    if (s == "max") return Norm::max;
    if (s == "sum") return Norm::sum;
    throw std::invalid_argument("unknown norm '" + s + "' (expected euclid|max|sum)");
}

double Vec::norm(Norm n) const {
    double acc = 0.0;
    switch (n) {
        case Norm::euclid: {
            // hypot-style scaling is not needed at the magnitudes seen here
            for (int i = 0; i < d_; ++i) acc += (*this)[i] * (*this)[i];
            return std::sqrt(acc);
        }
        case Norm::max:
            for (int i = 0; i < d_; ++i) acc = std::max(acc, std::abs((*this)[i]));
            return acc;
        case Norm::sum:
            for (int i = 0; i < d_; ++i) acc += std::abs((*this)[i]);
            return acc;
    }
    return acc;
}

void Vec::dimension_error() { throw std::invalid_argument("vector dimension out of range or mismatched"); }

bool Vec::is_zero() const {
    for (int i = 0; i < d_; ++i)
        if ((*this)[i] != 0.0) return false;
    return true;
}

bool operator==(const Vec& a, const Vec& b) {
    if (a.d_ != b.d_) return false;
    for (int i = 0; i < a.d_; ++i)
        if (a[i] != b[i]) return false;
    return true;
}

double distance(const Vec& a, const Vec& b, Norm n) { return (a - b).norm(n); }

}  // namespace gint
