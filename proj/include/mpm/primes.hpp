// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mpm {

/// Every prime in [lo, hi], ascending. Immutable after construction.
struct PrimePool {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    std::vector<std::uint64_t> primes;

    [[nodiscard]] bool empty() const noexcept { return primes.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return primes.size(); }
};

/// Segmented sieve. Requires 2 <= lo <= hi <= 2^32.
PrimePool primes_in(std::uint64_t lo, std::uint64_t hi);

/// Uniform integer in [0, bound) from a 64-bit engine; bound > 0.
/// Rejection sampling, so the draw sequence is identical across standard libraries.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// Uniform element of the pool. Throws PreconditionError on an empty pool.
std::uint64_t sample(const PrimePool& pool, std::mt19937_64& rng);

/// Pool for [lo, hi] where hi is doubled until the pool is nonempty.
/// `widenings` receives the number of doublings.
PrimePool widened_pool(std::uint64_t lo, std::uint64_t hi, int& widenings);

/// [max(2, ceil(f * n^a)), floor(g * n^a)] with integer rounding done on
/// doubles; callers pass (f, g) = (1, 2) or (40, 80).
struct PrimeInterval {
    std::uint64_t lo;
    std::uint64_t hi;
};
PrimeInterval prime_interval(std::size_t n, double exponent, double f, double g);

} // namespace mpm
