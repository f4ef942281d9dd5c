// SPDX-License-Identifier: Apache-2.0
//
// Products of monomial-entry polynomial matrices (and sequences) when only a
// few y-degree slices of each output entry are needed.
#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "mpm/poly.hpp"

namespace mpm {

/// Matrix whose entries are 0 or a single monomial x^x y^y with coefficient 1.
struct MonomialMatrix {
    std::size_t n = 0;
    std::vector<std::int32_t> x, y;
    std::vector<std::uint8_t> present;

    explicit MonomialMatrix(std::size_t size = 0) : n(size), x(size * size, 0), y(size * size, 0), present(size * size, 0) {}
    void set(std::size_t i, std::size_t j, std::int64_t xd, std::int64_t yd) {
        x[i * n + j] = static_cast<std::int32_t>(xd);
        y[i * n + j] = static_cast<std::int32_t>(yd);
        present[i * n + j] = 1;
    }
    [[nodiscard]] BiPolyMatrix to_poly() const;
};

/// Sequence counterpart; entry i carries z^i implicitly.
struct MonomialSeq {
    std::vector<std::int32_t> x, y;
    std::vector<std::uint8_t> present;

    explicit MonomialSeq(std::size_t size = 0) : x(size, 0), y(size, 0), present(size, 0) {}
    [[nodiscard]] std::size_t size() const noexcept { return present.size(); }
    void set(std::size_t i, std::int64_t xd, std::int64_t yd) {
        x[i] = static_cast<std::int32_t>(xd);
        y[i] = static_cast<std::int32_t>(yd);
        present[i] = 1;
    }
    [[nodiscard]] TriPoly to_poly() const;
};

inline constexpr std::int64_t kNoSlice = std::numeric_limits<std::int64_t>::min();

/// For output o, slice offset b in [b_lo, b_hi] and x-degree x_lo + t with
/// 0 <= t < x_width, request the coefficient of x^(x_lo+t) y^d where
/// d = base[o] + b, or d = base[o] + b (mod modulus) when modulus > 0.
/// Outputs with base == kNoSlice are skipped.
struct SliceQuery {
    std::vector<std::int64_t> base;
    std::int64_t b_lo = 0;
    std::int64_t b_hi = 0;
    std::int64_t x_lo = 0;
    std::int64_t x_width = 1;
    std::int64_t modulus = 0;

    [[nodiscard]] std::int64_t b_count() const noexcept { return b_hi - b_lo + 1; }
};

/// counts[(o * b_count + (b - b_lo)) * x_width + t].
struct SliceCounts {
    std::int64_t b_count = 0;
    std::int64_t x_width = 0;
    std::vector<std::int32_t> counts;

    [[nodiscard]] std::int32_t at(std::size_t o, std::int64_t b_index, std::int64_t t) const noexcept {
        return counts[(static_cast<std::size_t>(b_index) + o * static_cast<std::size_t>(b_count)) *
                          static_cast<std::size_t>(x_width) +
                      static_cast<std::size_t>(t)];
    }
};

enum class ProductBackend {
    /// Enumerate term pairs and keep those landing in a requested slice.
    scatter,
    /// Full symbolic product (Kronecker packing + dense backend, or NTT for sequences).
    symbolic,
};

/// Matrix outputs are o = i * n + j.
SliceCounts windowed_product(const MonomialMatrix& a, const MonomialMatrix& b, const SliceQuery& q,
                             ProductBackend backend = ProductBackend::scatter);
/// Convolution outputs are o = i + j (0-based), 2n - 1 of them.
SliceCounts windowed_conv(const MonomialSeq& a, const MonomialSeq& b, const SliceQuery& q,
                          ProductBackend backend = ProductBackend::scatter);

} // namespace mpm
