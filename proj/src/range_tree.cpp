// SPDX-License-Identifier: Apache-2.0
#include "mpm/range_tree.hpp"

#include "mpm/errors.hpp"

namespace mpm {

RangeChminTree::RangeChminTree(std::size_t n, ExtInt init) : n_(n), tag_(2 * n, ExtInt::inf()) {
    if (n == 0) throw PreconditionError("RangeChminTree: size must be positive");
    for (std::size_t i = 0; i < n; ++i) tag_[n + i] = init;
}

void RangeChminTree::range_chmin(std::size_t l, std::size_t r, ExtInt v) {
    if (l < 1 || l > r || r > n_) throw PreconditionError("RangeChminTree::range_chmin: interval out of range");
    for (std::size_t lo = l - 1 + n_, hi = r + n_; lo < hi; lo >>= 1, hi >>= 1) {
        if (lo & 1) {
            tag_[lo] = min(tag_[lo], v);
            ++lo;
        }
        if (hi & 1) {
            --hi;
            tag_[hi] = min(tag_[hi], v);
        }
    }
}

ExtInt RangeChminTree::point_query(std::size_t i) const {
    if (i < 1 || i > n_) throw PreconditionError("RangeChminTree::point_query: index out of range");
    ExtInt best = ExtInt::inf();
    for (std::size_t node = i - 1 + n_; node >= 1; node >>= 1) best = min(best, tag_[node]);
    return best;
}

std::vector<ExtInt> RangeChminTree::snapshot() const {
    // Push tags top-down into a scratch copy.
    std::vector<ExtInt> acc(tag_);
    for (std::size_t node = 2; node < 2 * n_; ++node) acc[node] = min(acc[node], acc[node >> 1]);
    return {acc.begin() + static_cast<std::ptrdiff_t>(n_), acc.end()};
}

} // namespace mpm
