// SPDX-License-Identifier: Apache-2.0
//
// Helpers shared by the matrix and sequence algorithms.
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "mpm/errors.hpp"
#include "mpm/ext_int.hpp"
#include "mpm/primes.hpp"

namespace mpm::detail {

/// Zero-filled int32 buffer drawn from a per-thread pool. Level scratch is
/// tens of megabytes; reusing it avoids faulting fresh pages every level.
inline std::vector<std::vector<std::int32_t>>& i32_pool() {
    thread_local std::vector<std::vector<std::int32_t>> pool;
    return pool;
}

inline std::vector<std::int32_t> take_i32(std::size_t size) {
    auto& pool = i32_pool();
    std::vector<std::int32_t> v;
    if (!pool.empty()) {
        v = std::move(pool.back());
        pool.pop_back();
    }
    v.assign(size, 0);
    return v;
}

inline void recycle_i32(std::vector<std::int32_t>&& v) {
    auto& pool = i32_pool();
    if (pool.size() < 4 && v.capacity() > 0) pool.push_back(std::move(v));
    v = {};
}

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    [[nodiscard]] double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

/// Adds the elapsed time to `*sink` on destruction.
class ScopedTimer {
  public:
    explicit ScopedTimer(double* sink) : sink_(sink) {}
    ~ScopedTimer() {
        if (sink_) *sink_ += watch_.ms();
    }
    ScopedTimer(const ScopedTimer&) = delete;
    ScopedTimer& operator=(const ScopedTimer&) = delete;

  private:
    double* sink_;
    Stopwatch watch_;
};

/// max(1, floor(n^alpha)).
inline std::int64_t scale_for(std::size_t n, double alpha) {
    const double v = std::floor(std::pow(static_cast<double>(std::max<std::size_t>(n, 1)), alpha) + 1e-9);
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(v));
}

/// G * n^exponent * log2(n)^2 with n clamped to 2.
inline double guard_limit(std::size_t n, double exponent, double g) {
    const double nn = static_cast<double>(std::max<std::size_t>(n, 2));
    const double lg = std::log2(nn);
    return g * std::pow(nn, exponent) * lg * lg;
}

/// Draw p from [max(min_lo, ceil(f n^a)), floor(g n^a)], widening hi when empty.
inline std::uint64_t draw_prime(std::size_t n, double a, double f, double g, std::uint64_t min_lo,
                                std::mt19937_64& rng, int& widenings) {
    PrimeInterval iv = prime_interval(n, a, f, g);
    iv.lo = std::max(iv.lo, min_lo);
    iv.hi = std::max(iv.hi, iv.lo);
    int w = 0;
    const PrimePool pool = widened_pool(iv.lo, iv.hi, w);
    widenings += w;
    return sample(pool, rng);
}

/// Smallest candidate 2(base + b) + x over slots laid out [b][x] whose
/// remaining count is positive; +inf if none.
inline ExtInt pick_level_candidate(const std::int32_t* slots, std::int64_t base, int buckets, int x_width,
                                   std::int64_t b_lo) {
    ExtInt best = ExtInt::inf();
    for (int bi = 0; bi < buckets; ++bi)
        for (int x = 0; x < x_width; ++x) {
            const std::int32_t c = slots[bi * x_width + x];
            if (c < 0) throw InvariantError("negative witness count after subtracting erroneous terms");
            if (c > 0) {
                best = min(best, ExtInt(2 * (base + bi + b_lo) + x));
                break;
            }
        }
    return best;
}

/// end[t] = last index of the maximal constant run of `v` containing t,
/// for t in [0, len). Values are compared as raw int64 so +inf runs count.
template <class Get>
std::vector<std::uint32_t> run_ends(std::size_t len, Get get) {
    std::vector<std::uint32_t> end(len);
    for (std::size_t t = len; t-- > 0;)
        end[t] = (t + 1 < len && get(t) == get(t + 1)) ? end[t + 1] : static_cast<std::uint32_t>(t);
    return end;
}

/// First index in [lo, hi] where pred holds, assuming pred is monotone
/// false..true on the range; hi + 1 if none.
template <class Pred>
std::size_t first_true(std::size_t lo, std::size_t hi, Pred pred) {
    std::size_t a = lo, b = hi + 1;
    while (a < b) {
        const std::size_t mid = a + (b - a) / 2;
        if (pred(mid)) b = mid;
        else a = mid + 1;
    }
    return a;
}

} // namespace mpm::detail
