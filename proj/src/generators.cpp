// SPDX-License-Identifier: Apache-2.0
#include "mpm/generators.hpp"

#include <algorithm>
#include <limits>

#include "mpm/errors.hpp"
#include "mpm/primes.hpp"

namespace mpm {

std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw PreconditionError("uniform_int: empty range");
    return lo + static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

namespace {

void check_c(std::int64_t c) {
    if (c < 1) throw PreconditionError("generator: c must be >= 1");
}

} // namespace

SquareMatrix gen_row_monotone(std::size_t n, std::int64_t c, std::mt19937_64& rng) {
    check_c(c);
    const std::int64_t cap = c * static_cast<std::int64_t>(n);
    std::vector<std::int64_t> raw(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = raw.begin() + static_cast<std::ptrdiff_t>(i * n);
        for (std::size_t j = 0; j < n; ++j) row[static_cast<std::ptrdiff_t>(j)] = uniform_int(rng, 0, cap);
        std::sort(row, row + static_cast<std::ptrdiff_t>(n));
    }
    return SquareMatrix::from_raw(n, std::move(raw));
}

SquareMatrix gen_column_monotone(std::size_t n, std::int64_t c, std::mt19937_64& rng) {
    return gen_row_monotone(n, c, rng).transposed();
}

SquareMatrix gen_bounded_difference(std::size_t n, std::int64_t delta, std::mt19937_64& rng) {
    if (delta < 0) throw PreconditionError("gen_bounded_difference: delta must be >= 0");
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::int64_t lo = std::numeric_limits<std::int64_t>::min() / 4, hi = std::numeric_limits<std::int64_t>::max() / 4;
            if (i == 0 && j == 0) lo = hi = 0;
            if (j > 0) {
                lo = std::max(lo, m(i, j - 1).raw() - delta);
                hi = std::min(hi, m(i, j - 1).raw() + delta);
            }
            if (i > 0) {
                lo = std::max(lo, m(i - 1, j).raw() - delta);
                hi = std::min(hi, m(i - 1, j).raw() + delta);
            }
            m(i, j) = ExtInt(uniform_int(rng, lo, hi));
        }
    return m;
}

SquareMatrix gen_arbitrary(std::size_t n, std::int64_t c, std::mt19937_64& rng, int inf_percent) {
    check_c(c);
    if (inf_percent < 0 || inf_percent > 100) throw PreconditionError("gen_arbitrary: inf_percent outside [0, 100]");
    const std::int64_t cap = 2 * c * static_cast<std::int64_t>(n);
    SquareMatrix m(n);
    for (ExtInt& v : m.data()) {
        const bool inf = inf_percent > 0 && uniform_int(rng, 0, 99) < inf_percent;
        v = inf ? ExtInt::inf() : ExtInt(uniform_int(rng, 0, cap));
    }
    return m;
}

Seq gen_monotone_seq(std::size_t n, std::int64_t c, std::mt19937_64& rng) {
    check_c(c);
    const std::int64_t cap = c * static_cast<std::int64_t>(n);
    std::vector<std::int64_t> raw(n);
    for (auto& v : raw) v = uniform_int(rng, 0, cap);
    std::sort(raw.begin(), raw.end());
    return Seq::from_raw(std::move(raw));
}

Seq gen_monotone_seq_bends(std::size_t n, std::int64_t c, std::size_t pieces, std::mt19937_64& rng) {
    check_c(c);
    if (pieces == 0) throw PreconditionError("gen_monotone_seq_bends: pieces must be positive");
    if (n == 0) return {};
    const std::int64_t cap = c * static_cast<std::int64_t>(n);
    std::vector<std::int64_t> cuts;
    for (std::size_t q = 1; q < pieces; ++q) cuts.push_back(uniform_int(rng, 0, static_cast<std::int64_t>(n)));
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(static_cast<std::int64_t>(n));
    // Cumulative weight; each index adds its stretch's slope plus jitter.
    std::vector<std::int64_t> cum(n);
    std::int64_t total = 0, slope = uniform_int(rng, 0, 1000);
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (static_cast<std::int64_t>(i) >= cuts[next]) {
            ++next;
            slope = uniform_int(rng, 0, 1000);
        }
        total += slope + uniform_int(rng, 0, 10);
        cum[i] = total;
    }
    std::vector<std::int64_t> raw(n);
    const std::int64_t offset = uniform_int(rng, 0, cap / 8);
    const std::int64_t span = cap - offset;
    total = std::max<std::int64_t>(total, 1);
    if (span > std::numeric_limits<std::int64_t>::max() / total) throw PreconditionError("gen_monotone_seq_bends: n * c too large");
    for (std::size_t i = 0; i < n; ++i) raw[i] = offset + span * cum[i] / total;
    return Seq::from_raw(std::move(raw));
}

} // namespace mpm
