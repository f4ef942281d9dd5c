// SPDX-License-Identifier: Apache-2.0
//
// Brute-force enumeration of the erroneous-term sets from their definition,
// for comparison against the segment representation.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mpm/monotone_conv.hpp"
#include "mpm/monotone_mm.hpp"

namespace mpm {

/// Matrix elements are (i, k, j); sequence elements are (t, i, 0).
using IndexTriple = std::array<std::uint32_t, 3>;

/// Sorted elements covered by bucket b.
std::vector<IndexTriple> expand_bucket(const TripleSets& ts, std::int64_t b);

/// Triples (i, k, j) with A_ik, B_kj, C*_ij finite, A*_ik + B*_kj != C*_ij and
/// A^(l)_ik + B^(l)_kj = C^(l)_ij + b, using the C^(l) of the view. Sorted.
std::vector<IndexTriple> brute_level_triples(const LevelView& v, std::int64_t b);

/// Pairs (t, i) with A_i, B_{t-i}, C*_t finite, A*_i + B*_{t-i} != C*_t and
/// A^(l)_i + B^(l)_{t-i} = C^(l)_t + b. Sorted.
std::vector<IndexTriple> brute_level_pairs(const ConvLevelView& v, std::int64_t b);

} // namespace mpm
