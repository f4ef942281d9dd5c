// SPDX-License-Identifier: Apache-2.0
//
// Seeded instance families. All draws go through uniform_below, so a seed
// produces the same instance on every platform.
#pragma once

#include <cstdint>
#include <random>

#include "mpm/matrix.hpp"

namespace mpm {

/// Uniform integer in [lo, hi].
std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi);

/// Rows sorted, entries uniform in [0, c*n].
SquareMatrix gen_row_monotone(std::size_t n, std::int64_t c, std::mt19937_64& rng);
/// Columns sorted, entries uniform in [0, c*n].
SquareMatrix gen_column_monotone(std::size_t n, std::int64_t c, std::mt19937_64& rng);
/// Two-dimensional random walk: every entry is drawn uniformly from the
/// values within delta of both its left and its upper neighbour.
SquareMatrix gen_bounded_difference(std::size_t n, std::int64_t delta, std::mt19937_64& rng);
/// Entries uniform in [0, 2*c*n]; each entry is +inf with probability inf_percent / 100.
SquareMatrix gen_arbitrary(std::size_t n, std::int64_t c, std::mt19937_64& rng, int inf_percent = 0);
/// Sorted, entries uniform in [0, c*n].
Seq gen_monotone_seq(std::size_t n, std::int64_t c, std::mt19937_64& rng);
/// Non-decreasing path through [0, c*n] made of `pieces` stretches with
/// random slopes, plus unit jitter. Sums A_i + B_{t-i} then spread over
/// many multiples of a prime near sqrt(n), unlike sorted uniform draws.
Seq gen_monotone_seq_bends(std::size_t n, std::int64_t c, std::size_t pieces, std::mt19937_64& rng);

} // namespace mpm
