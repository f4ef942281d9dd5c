// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "mpm/ext_int.hpp"

namespace mpm {

/// Interval chmin updates and point queries over N positions, 1-based.
/// Tags are never pushed down: a point query takes the minimum along the
/// leaf-to-root path.
class RangeChminTree {
  public:
    RangeChminTree(std::size_t n, ExtInt init);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }

    /// x_i <- min(x_i, v) for l <= i <= r.
    void range_chmin(std::size_t l, std::size_t r, ExtInt v);
    [[nodiscard]] ExtInt point_query(std::size_t i) const;
    /// All N values in index order, in O(N).
    [[nodiscard]] std::vector<ExtInt> snapshot() const;

  private:
    std::size_t n_;
    std::vector<ExtInt> tag_; // size 2n, leaves at [n, 2n)
};

} // namespace mpm
