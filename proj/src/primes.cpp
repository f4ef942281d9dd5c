// SPDX-License-Identifier: Apache-2.0
#include "mpm/primes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpm/errors.hpp"

namespace mpm {

namespace {

constexpr std::uint64_t kSieveLimit = std::uint64_t{1} << 32;

std::vector<std::uint32_t> small_primes(std::uint64_t limit) {
    std::vector<bool> composite(limit + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

} // namespace

PrimePool primes_in(std::uint64_t lo, std::uint64_t hi) {
    if (lo < 2 || lo > hi || hi > kSieveLimit) throw PreconditionError("primes_in: need 2 <= lo <= hi <= 2^32");
    auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi)));
    while (root * root > hi) --root;
    while ((root + 1) * (root + 1) <= hi) ++root;
    const auto base = small_primes(root);

    PrimePool pool{lo, hi, {}};
    constexpr std::uint64_t kBlock = std::uint64_t{1} << 18;
    std::vector<bool> composite;
    for (std::uint64_t start = lo; start <= hi; start += kBlock) {
        const std::uint64_t stop = std::min(hi, start + kBlock - 1);
        composite.assign(stop - start + 1, false);
        for (std::uint64_t q : base) {
            std::uint64_t first = std::max(q * q, (start + q - 1) / q * q);
            for (std::uint64_t m = first; m <= stop; m += q) composite[m - start] = true;
        }
        for (std::uint64_t v = start; v <= stop; ++v)
            if (!composite[v - start]) pool.primes.push_back(v);
        if (stop == hi) break;
    }
    return pool;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == 0) throw PreconditionError("uniform_below: bound must be positive");
    // Accept draws below the largest multiple of bound.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

std::uint64_t sample(const PrimePool& pool, std::mt19937_64& rng) {
    if (pool.empty()) throw PreconditionError("sample: empty prime pool");
    return pool.primes[uniform_below(rng, pool.primes.size())];
}

PrimePool widened_pool(std::uint64_t lo, std::uint64_t hi, int& widenings) {
    widenings = 0;
    hi = std::max(hi, lo);
    PrimePool pool = primes_in(lo, hi);
    while (pool.empty()) {
        hi *= 2;
        ++widenings;
        pool = primes_in(lo, hi);
    }
    return pool;
}

PrimeInterval prime_interval(std::size_t n, double exponent, double f, double g) {
    const double base = std::pow(static_cast<double>(std::max<std::size_t>(n, 1)), exponent);
    // Guard against 40 * 4^0.5 landing on 79.99999.
    const auto lo = static_cast<std::uint64_t>(std::ceil(f * base - 1e-9));
    const auto hi = static_cast<std::uint64_t>(std::floor(g * base + 1e-9));
    return {std::max<std::uint64_t>(lo, 2), std::max<std::uint64_t>(hi, 2)};
}

} // namespace mpm
