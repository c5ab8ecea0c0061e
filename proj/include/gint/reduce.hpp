#pragma once

// Deterministic pairwise summation.
//
// Values are combined like a binary counter: the k-th partial sum at level L
// covers items [k*2^L, (k+1)*2^L). The result depends only on item order, so a
// caller may sum aligned blocks of 2^L items elsewhere (another thread) and feed
// them back with push_at_level without changing a single bit of the total.

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gint {

template <class T>
class PairwiseSum {
public:
    PairwiseSum() = default;
    explicit PairwiseSum(T zero) : zero_(std::move(zero)) {}

    void push(const T& v) { push_at_level(0, v); }

    /// Push the sum of a full aligned block of 2^level items.
    void push_at_level(int level, T v) {
        if (!stack_.empty() && stack_.back().level < level)
            throw std::logic_error("PairwiseSum: unaligned block push");
        items_ += std::size_t{1} << static_cast<unsigned>(level);
        while (!stack_.empty() && stack_.back().level == level) {
            v = stack_.back().value + v;
            stack_.pop_back();
            ++level;
        }
        stack_.push_back({level, std::move(v)});
    }

    /// Number of items represented, counting a block as 2^level items.
    std::size_t count() const { return items_; }

    T total() const {
        if (stack_.empty()) return zero_;
        T acc = stack_.back().value;
        for (std::size_t i = stack_.size() - 1; i-- > 0;) acc = stack_[i].value + acc;
        return acc;
    }

    bool empty() const { return stack_.empty(); }

private:
    struct Entry {
        int level;
        T value;
    };
    std::vector<Entry> stack_;
    T zero_{};
    std::size_t items_ = 0;
};

/// Pairwise sum of a whole sequence.
template <class It, class T>
T pairwise_total(It first, It last, T zero) {
    PairwiseSum<T> s(zero);
    for (; first != last; ++first) s.push(*first);
    return s.total();
}

}  // namespace gint
