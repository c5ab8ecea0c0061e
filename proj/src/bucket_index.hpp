#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "gint/geometry.hpp"

namespace gint::detail {

/// Uniform bucket grid over a domain for finding overlapping cells.
class BucketIndex {
public:
    BucketIndex(const Box& domain, std::size_t n_cells) : domain_(domain) {
        const double target = domain.dim() == 1 ? static_cast<double>(n_cells)
                                                : std::sqrt(static_cast<double>(n_cells));
        n_ = std::clamp(static_cast<int>(target), 1, 4096);
        buckets_.resize(static_cast<std::size_t>(n_) * static_cast<std::size_t>(domain.dim() == 2 ? n_ : 1));
    }

    void insert(std::size_t id, const Box& cell) {
        for_buckets(cell, [&](std::size_t b) { buckets_[b].push_back(id); });
    }

    template <class F>
    void for_buckets(const Box& cell, F&& f) const {
        int lo[2] = {0, 0}, hi[2] = {0, 0};
        for (int a = 0; a < domain_.dim(); ++a) range(cell.axis(a), domain_.axis(a), lo[a], hi[a]);
        for (int i = lo[0]; i <= hi[0]; ++i)
            for (int j = lo[1]; j <= hi[1]; ++j)
                f(static_cast<std::size_t>(i) * static_cast<std::size_t>(domain_.dim() == 2 ? n_ : 1) +
                  static_cast<std::size_t>(j));
    }

    const std::vector<std::size_t>& bucket(std::size_t b) const { return buckets_[b]; }

private:
    // buckets meeting the interior of iv; a cell outside the domain is clamped
    void range(const Interval1& iv, const Interval1& dom, int& lo, int& hi) const {
        const double scale = n_ / dom.length();
        auto idx = [&](double v) { return std::clamp(static_cast<int>(std::floor((v - dom.lo()) * scale)), 0, n_ - 1); };
        lo = idx(iv.lo());
        hi = idx(std::nextafter(iv.hi(), -std::numeric_limits<double>::infinity()));
        hi = std::max(hi, lo);
    }

    Box domain_;
    int n_ = 1;
    std::vector<std::vector<std::size_t>> buckets_;
};

}  // namespace gint::detail
