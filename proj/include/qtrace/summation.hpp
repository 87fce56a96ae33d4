#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qtrace {

/**
 * Streaming pairwise summation.
 *
 * Values are merged like a binary counter: partial sums of 2^k consecutive
 * terms are combined only with partial sums of the same size. The reduction
 * tree depends on nothing but the number of terms, so the result is
 * bit-identical for a given input sequence, and the rounding error grows as
 * O(log n) instead of O(n).
 */
template <class T = double>
class PairwiseSum {
  public:
    void add(T value) {
        std::size_t n = count_;
        while (n & 1u) {
            value = stack_.back() + value;
            stack_.pop_back();
            n >>= 1u;
        }
        stack_.push_back(value);
        ++count_;
    }

    T result() const {
        T total{};
        // Fold smallest blocks first.
        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it)
            total = *it + total;
        return total;
    }

    std::size_t count() const { return count_; }

  private:
    std::vector<T> stack_;
    std::size_t count_ = 0;
};

template <class T>
T pairwise_sum(std::span<const T> values) {
    PairwiseSum<T> acc;
    for (const T& v : values)
        acc.add(v);
    return acc.result();
}

} // namespace qtrace
