// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>

#include "mpm/matrix.hpp"

namespace mpm::test {

inline SquareMatrix mat(std::initializer_list<std::initializer_list<ExtInt>> rows) { return SquareMatrix(rows); }

/// Matrix with a few +inf entries and values in [0, hi].
inline SquareMatrix random_matrix(std::size_t n, std::int64_t hi, std::mt19937_64& rng, int inf_percent = 0) {
    SquareMatrix m(n);
    std::uniform_int_distribution<std::int64_t> v(0, hi);
    std::uniform_int_distribution<int> pct(0, 99);
    for (ExtInt& e : m.data()) e = pct(rng) < inf_percent ? ExtInt::inf() : ExtInt(v(rng));
    return m;
}

} // namespace mpm::test
