// SPDX-License-Identifier: Apache-2.0
#include "mpm/oracle.hpp"

#include <algorithm>
#include <vector>

#include "mpm/errors.hpp"

namespace mpm {

SquareMatrix minplus_oracle(const SquareMatrix& a, const SquareMatrix& b) {
    if (a.size() != b.size()) throw DimensionError("minplus_oracle: dimension mismatch");
    const std::size_t n = a.size();
    const auto ar = a.raw();
    const auto br = b.raw();
    std::vector<std::int64_t> c(n * n, kInf);
    // i-k-j order keeps the inner loop contiguous in both B and C.
    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t* crow = c.data() + i * n;
        for (std::size_t k = 0; k < n; ++k) {
            const std::int64_t aik = ar[i * n + k];
            if (aik == kInf) continue;
            const std::int64_t* brow = br.data() + k * n;
            for (std::size_t j = 0; j < n; ++j) {
                const std::int64_t bkj = brow[j];
                const std::int64_t s = bkj == kInf ? kInf : aik + bkj;
                crow[j] = std::min(crow[j], s);
            }
        }
    }
    return SquareMatrix::from_raw(n, std::move(c));
}

Seq minplus_conv_oracle(const Seq& a, const Seq& b) {
    if (a.size() != b.size()) throw DimensionError("minplus_conv_oracle: length mismatch");
    const std::size_t n = a.size();
    if (n == 0) return Seq{};
    std::vector<std::int64_t> c(2 * n - 1, kInf);
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].is_inf()) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (b[j].is_inf()) continue;
            c[i + j] = std::min(c[i + j], a[i].raw() + b[j].raw());
        }
    }
    return Seq::from_raw(std::move(c));
}

} // namespace mpm
