// SPDX-License-Identifier: Apache-2.0
#include "mpm/brute.hpp"

#include <algorithm>

namespace mpm {

std::vector<IndexTriple> expand_bucket(const TripleSets& ts, std::int64_t b) {
    std::vector<IndexTriple> out;
    for (const Segment& g : ts.bucket(b))
        for (std::uint32_t x = g.lo; x <= g.hi; ++x) {
            switch (ts.kind) {
            case SegmentKind::row_j: out.push_back({g.r, g.s, x}); break;
            case SegmentKind::col_k: out.push_back({g.r, x, g.s}); break;
            case SegmentKind::conv_i: out.push_back({g.r, x, 0}); break;
            }
        }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::int64_t level_of(ExtInt v, std::int64_t p, int l) { return floor_mod(v.raw(), p) >> l; }

} // namespace

std::vector<IndexTriple> brute_level_triples(const LevelView& v, std::int64_t b) {
    const std::size_t n = v.a.size();
    const auto p = static_cast<std::int64_t>(v.p);
    std::vector<IndexTriple> out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (v.a(i, k).is_inf()) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (v.b(k, j).is_inf() || v.star.c_star(i, j).is_inf()) continue;
                if (v.star.a_star(i, k) + v.star.b_star(k, j) == v.star.c_star(i, j)) continue;
                const std::int64_t lhs = level_of(v.a(i, k), p, v.level) + level_of(v.b(k, j), p, v.level);
                if (lhs == v.c_level(i, j).raw() + b)
                    out.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(j)});
            }
        }
    return out;
}

std::vector<IndexTriple> brute_level_pairs(const ConvLevelView& v, std::int64_t b) {
    const std::size_t n = v.a.size();
    const auto p = static_cast<std::int64_t>(v.p);
    std::vector<IndexTriple> out;
    for (std::size_t t = 0; t + 1 < 2 * n; ++t) {
        if (v.star.c_star[t].is_inf()) continue;
        for (std::size_t i = t >= n ? t - (n - 1) : 0; i <= std::min(t, n - 1); ++i) {
            const std::size_t j = t - i;
            if (v.a[i].is_inf() || v.b[j].is_inf()) continue;
            if (v.star.a_star[i] + v.star.b_star[j] == v.star.c_star[t]) continue;
            if (level_of(v.a[i], p, v.level) + level_of(v.b[j], p, v.level) == v.c_level[t].raw() + b)
                out.push_back({static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(i), 0});
        }
    }
    return out;
}

} // namespace mpm
