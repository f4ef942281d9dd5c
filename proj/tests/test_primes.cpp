// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "mpm/errors.hpp"
#include "mpm/primes.hpp"

using namespace mpm;

namespace {

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    b %= m;
    for (; e; e >>= 1, b = b * b % m)
        if (e & 1) r = r * b % m;
    return r;
}

// Deterministic for n < 4759123141 with bases 2, 7, 61.
bool miller_rabin(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2, 3, 5, 7, 11, 13})
        if (n % q == 0) return n == q;
    std::uint64_t d = n - 1;
    int s = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++s;
    }
    for (std::uint64_t a : {2, 7, 61}) {
        if (a % n == 0) continue;
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int r = 1; r < s && comp; ++r) {
            x = x * x % n;
            if (x == n - 1) comp = false;
        }
        if (comp) return false;
    }
    return true;
}

} // namespace

TEST_CASE("primes_in examples") {
    CHECK(primes_in(40, 80).primes == std::vector<std::uint64_t>{41, 43, 47, 53, 59, 61, 67, 71, 73, 79});
    CHECK(primes_in(2, 2).primes == std::vector<std::uint64_t>{2});
    const PrimePool empty = primes_in(24, 28);
    CHECK(empty.empty());
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(sample(empty, rng), PreconditionError);
}

TEST_CASE("sieve agrees with Miller-Rabin") {
    for (auto [lo, hi] : {std::pair<std::uint64_t, std::uint64_t>{2, 5000}, {1000000, 1010000}, {4294900000ULL, 4294967295ULL}}) {
        const PrimePool pool = primes_in(lo, hi);
        std::size_t t = 0;
        for (std::uint64_t v = lo; v <= hi; ++v)
            if (miller_rabin(v)) {
                REQUIRE(t < pool.size());
                CHECK(pool.primes[t++] == v);
            }
        CHECK(t == pool.size());
    }
}

TEST_CASE("sample is in range, prime and reproducible") {
    const PrimePool pool = primes_in(41, 79);
    std::mt19937_64 r1(5), r2(5);
    for (int t = 0; t < 200; ++t) {
        const std::uint64_t p = sample(pool, r1);
        CHECK(p >= 41);
        CHECK(p <= 79);
        CHECK(miller_rabin(p));
        CHECK(p == sample(pool, r2));
    }
    const PrimePool single = primes_in(97, 100);
    std::mt19937_64 r3(8);
    for (int t = 0; t < 10; ++t) CHECK(sample(single, r3) == 97);
}

TEST_CASE("widened_pool doubles until nonempty") {
    int w = 0;
    const PrimePool pool = widened_pool(24, 28, w);
    CHECK_FALSE(pool.empty());
    CHECK(w >= 1);
    CHECK(pool.primes.front() == 29);
    const PrimeInterval iv = prime_interval(64, 0.5, 40, 80);
    CHECK(iv.lo == 320);
    CHECK(iv.hi == 640);
}
