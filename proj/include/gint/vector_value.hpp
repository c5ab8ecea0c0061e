#pragma once

// Finite-dimensional values with a selectable norm.

#include <array>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace gint {

enum class Norm { euclid, max, sum };

std::string to_string(Norm n);
Norm parse_norm(const std::string& s);

/// A vector in R^d, d <= kMaxDim. Value semantics, no allocation.
class Vec {
public:
    static constexpr int kMaxDim = 4;

    Vec() = default;
    explicit Vec(int d) : d_(d) {
        if (d < 1 || d > kMaxDim) dimension_error();
    }
    Vec(std::initializer_list<double> xs) : d_(static_cast<int>(xs.size())) {
        if (d_ < 1 || d_ > kMaxDim) dimension_error();
        std::size_t i = 0;
        for (double x : xs) v_[i++] = x;
    }

    static Vec zero(int d) { return Vec(d); }
    static Vec scalar(double x) { return Vec{x}; }

    int dim() const { return d_; }
    double operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return v_[static_cast<std::size_t>(i)]; }

    double norm(Norm n = Norm::euclid) const;
    bool is_zero() const;

    Vec& operator+=(const Vec& o) {
        if (o.d_ != d_) dimension_error();
        for (int i = 0; i < d_; ++i) (*this)[i] += o[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        if (o.d_ != d_) dimension_error();
        for (int i = 0; i < d_; ++i) (*this)[i] -= o[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int i = 0; i < d_; ++i) (*this)[i] *= s;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(Vec a, double s) { return a *= s; }
    friend Vec operator*(double s, Vec a) { return a *= s; }

    friend bool operator==(const Vec& a, const Vec& b);

private:
    [[noreturn]] static void dimension_error();

    std::array<double, kMaxDim> v_{};
    int d_ = 1;
};

/// ||a - b||.
double distance(const Vec& a, const Vec& b, Norm n = Norm::euclid);

}  // namespace gint
