// SPDX-License-Identifier: Apache-2.0
#include "mpm/slice_product.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <limits>

#include "mpm/errors.hpp"
#include "mpm/ext_int.hpp"
#include "internal.hpp"

namespace mpm {

namespace {

template <class V>
std::pair<Window, Window> degree_windows(const V& m) {
    Window x, y;
    for (std::size_t t = 0; t < m.present.size(); ++t) {
        if (!m.present[t]) continue;
        if (x.empty()) {
            x = {m.x[t], m.x[t]};
            y = {m.y[t], m.y[t]};
        }
        x = {std::min<std::int64_t>(x.lo, m.x[t]), std::max<std::int64_t>(x.hi, m.x[t])};
        y = {std::min<std::int64_t>(y.lo, m.y[t]), std::max<std::int64_t>(y.hi, m.y[t])};
    }
    return {x, y};
}

SliceCounts make_counts(std::size_t outputs, const SliceQuery& q) {
    if (q.b_hi < q.b_lo || q.x_width < 1 || q.modulus < 0) throw PreconditionError("SliceQuery: empty window");
    if (q.base.size() != outputs) throw DimensionError("SliceQuery: base has the wrong length");
    SliceCounts c{q.b_count(), q.x_width, {}};
    c.counts = detail::take_i32(outputs * static_cast<std::size_t>(q.b_count() * q.x_width));
    return c;
}

// Adds `coef` at every requested (b, x) slot matched by a term x^xd y^yd of output o.
inline void deposit(SliceCounts& c, const SliceQuery& q, std::size_t o, std::int64_t xd, std::int64_t yd,
                    std::int64_t coef) {
    const std::int64_t t = xd - q.x_lo;
    if (q.base[o] == kNoSlice || t < 0 || t >= q.x_width) return;
    const std::int64_t d = yd - q.base[o];
    auto slot = [&](std::int64_t bi) {
        return (static_cast<std::size_t>(bi) + o * static_cast<std::size_t>(c.b_count)) *
                   static_cast<std::size_t>(c.x_width) +
               static_cast<std::size_t>(t);
    };
    if (q.modulus == 0) {
        if (d >= q.b_lo && d <= q.b_hi) c.counts[slot(d - q.b_lo)] += static_cast<std::int32_t>(coef);
        return;
    }
    for (std::int64_t b = q.b_lo; b <= q.b_hi; ++b)
        if (floor_mod(d - b, q.modulus) == 0) c.counts[slot(b - q.b_lo)] += static_cast<std::int32_t>(coef);
}

#if defined(__GNUC__) && defined(__x86_64__) && !defined(__clang__)
#define MPM_VECTOR_CLONES __attribute__((target_clones("avx2", "default")))
#else
#define MPM_VECTOR_CLONES
#endif

// hit[j] = 1 iff term pair j lands inside the (b, x) window of its output.
MPM_VECTOR_CLONES
void flag_hits(std::size_t len, std::int32_t ay, std::int32_t ax, const std::int32_t* by, const std::int32_t* bx,
               const std::int32_t* rel, std::uint32_t bc, std::uint32_t xwid, std::uint8_t* hit) {
    for (std::size_t j = 0; j < len; ++j) {
        const auto d = static_cast<std::uint32_t>(ay + by[j] - rel[j]);
        const auto t = static_cast<std::uint32_t>(ax + bx[j]);
        hit[j] = static_cast<std::uint8_t>((d < bc) & (t < xwid));
    }
}

} // namespace

BiPolyMatrix MonomialMatrix::to_poly() const {
    const auto [xw, yw] = degree_windows(*this);
    BiPolyMatrix m(n, xw, yw);
    for (std::size_t t = 0; t < present.size(); ++t)
        if (present[t]) m.add_term(t / n, t % n, 1, x[t], y[t]);
    return m;
}

TriPoly MonomialSeq::to_poly() const {
    const auto [xw, yw] = degree_windows(*this);
    TriPoly p(xw, yw, {0, static_cast<std::int64_t>(size()) - 1});
    for (std::size_t t = 0; t < size(); ++t)
        if (present[t]) p.add_term(1, x[t], y[t], static_cast<std::int64_t>(t));
    return p;
}

SliceCounts windowed_product(const MonomialMatrix& a, const MonomialMatrix& b, const SliceQuery& q,
                             ProductBackend backend) {
    if (a.n != b.n) throw DimensionError("windowed_product: dimension mismatch");
    const std::size_t n = a.n;
    SliceCounts c = make_counts(n * n, q);
    if (backend == ProductBackend::symbolic) {
        const BiPolyMatrix pc = polymat_mul(a.to_poly(), b.to_poly());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (const Term& t : pc(i, j).terms()) deposit(c, q, i * n + j, t.x, t.y, t.coef);
        return c;
    }

    if (q.modulus != 0) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                if (!a.present[i * n + k]) continue;
                const std::int64_t ax = a.x[i * n + k], ay = a.y[i * n + k];
                for (std::size_t j = 0; j < n; ++j)
                    if (b.present[k * n + j]) deposit(c, q, i * n + j, ax + b.x[k * n + j], ay + b.y[k * n + j], 1);
            }
        return c;
    }

    // Exact slices. Offsets are kept in 32 bits; a vectorizable pass flags
    // the hits of one (i, k) row and only those are scattered.
    const auto bc = static_cast<std::uint32_t>(q.b_count());
    const auto xwid = static_cast<std::uint32_t>(q.x_width);
    const std::size_t per = static_cast<std::size_t>(bc) * xwid;
    constexpr std::int32_t kFar = std::numeric_limits<std::int32_t>::min() / 4;
    std::int64_t lo_y = 0, hi_y = 0;
    for (std::size_t t = 0; t < n * n; ++t) {
        lo_y = std::min<std::int64_t>({lo_y, a.y[t], b.y[t]});
        hi_y = std::max<std::int64_t>({hi_y, a.y[t], b.y[t]});
    }
    for (const std::int64_t base : q.base)
        if (base != kNoSlice) {
            lo_y = std::min(lo_y, base + q.b_lo);
            hi_y = std::max(hi_y, base + q.b_lo);
        }
    if (hi_y - lo_y > (std::int64_t{1} << 28)) throw PreconditionError("windowed_product: degrees exceed 32-bit range");

    constexpr std::size_t kChunk = 32;
    const std::size_t padded = (n + kChunk - 1) / kChunk * kChunk;
    std::vector<std::int32_t> rel(padded, kFar);
    std::vector<std::uint8_t> hit(padded, 0);
    // B rows with absent entries pushed out of every window.
    std::vector<std::int32_t> by(n * padded, -kFar), bx(n * padded, 0);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
            if (b.present[k * n + j]) {
                by[k * padded + j] = b.y[k * n + j];
                bx[k * padded + j] = b.x[k * n + j];
            }
    for (std::size_t i = 0; i < n; ++i) {
        std::int32_t* crow = c.counts.data() + i * n * per;
        for (std::size_t j = 0; j < n; ++j) {
            const std::int64_t base = q.base[i * n + j];
            rel[j] = base == kNoSlice ? kFar : static_cast<std::int32_t>(base + q.b_lo);
        }
        for (std::size_t k = 0; k < n; ++k) {
            if (!a.present[i * n + k]) continue;
            const std::int32_t ay = a.y[i * n + k];
            const std::int32_t ax = static_cast<std::int32_t>(a.x[i * n + k] - q.x_lo);
            const std::int32_t* yk = by.data() + k * padded;
            const std::int32_t* xk = bx.data() + k * padded;
            flag_hits(padded, ay, ax, yk, xk, rel.data(), bc, xwid, hit.data());
            for (std::size_t j0 = 0; j0 < padded; j0 += 8) {
                std::uint64_t word;
                std::memcpy(&word, hit.data() + j0, 8);
                for (; word != 0; word &= word - 1) {
                    const std::size_t j = j0 + static_cast<std::size_t>(std::countr_zero(word)) / 8;
                    const auto d = static_cast<std::uint32_t>(ay + yk[j] - rel[j]);
                    const auto t = static_cast<std::uint32_t>(ax + xk[j]);
                    ++crow[j * per + d * xwid + t];
                }
            }
        }
    }
    return c;
}

SliceCounts windowed_conv(const MonomialSeq& a, const MonomialSeq& b, const SliceQuery& q, ProductBackend backend) {
    if (a.size() != b.size()) throw DimensionError("windowed_conv: length mismatch");
    const std::size_t n = a.size();
    if (n == 0) return make_counts(0, q);
    SliceCounts c = make_counts(2 * n - 1, q);
    if (backend == ProductBackend::symbolic) {
        const TriPoly pa = a.to_poly(), pb = b.to_poly();
        if (pa.x_window().empty() || pb.x_window().empty()) return c;
        const TriPoly pc = seq_poly_mul(pa, pb);
        const Window xw = pc.x_window(), yw = pc.y_window();
        for (std::size_t o = 0; o < 2 * n - 1; ++o)
            for (std::int64_t y = yw.lo; y <= yw.hi; ++y)
                for (std::int64_t x = xw.lo; x <= xw.hi; ++x)
                    if (const std::int64_t v = pc.coeff(x, y, static_cast<std::int64_t>(o))) deposit(c, q, o, x, y, v);
        return c;
    }

    if (q.modulus != 0) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!a.present[i]) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (b.present[j]) deposit(c, q, i + j, a.x[i] + b.x[j], a.y[i] + b.y[j], 1);
        }
        return c;
    }

    const auto bc = static_cast<std::uint32_t>(q.b_count());
    const auto xwid = static_cast<std::uint32_t>(q.x_width);
    const std::size_t per = static_cast<std::size_t>(bc) * xwid;
    constexpr std::int32_t kFar = std::numeric_limits<std::int32_t>::min() / 4;
    std::int64_t lo_y = 0, hi_y = 0;
    for (std::size_t t = 0; t < n; ++t) {
        lo_y = std::min<std::int64_t>({lo_y, a.y[t], b.y[t]});
        hi_y = std::max<std::int64_t>({hi_y, a.y[t], b.y[t]});
    }
    for (const std::int64_t base : q.base)
        if (base != kNoSlice) {
            lo_y = std::min(lo_y, base + q.b_lo);
            hi_y = std::max(hi_y, base + q.b_lo);
        }
    if (hi_y - lo_y > (std::int64_t{1} << 28)) throw PreconditionError("windowed_conv: degrees exceed 32-bit range");

    const std::size_t padded = (n + 31) / 32 * 32;
    // rel is indexed by output i + j, so it is padded past 2n - 1.
    std::vector<std::int32_t> rel(n + padded, kFar);
    for (std::size_t o = 0; o < 2 * n - 1; ++o)
        if (q.base[o] != kNoSlice) rel[o] = static_cast<std::int32_t>(q.base[o] + q.b_lo);
    std::vector<std::int32_t> by(padded, -kFar), bx(padded, 0);
    for (std::size_t j = 0; j < n; ++j)
        if (b.present[j]) {
            by[j] = b.y[j];
            bx[j] = b.x[j];
        }
    std::vector<std::uint8_t> hit(padded, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!a.present[i]) continue;
        const std::int32_t ay = a.y[i];
        const auto ax = static_cast<std::int32_t>(a.x[i] - q.x_lo);
        const std::int32_t* r = rel.data() + i;
        std::int32_t* crow = c.counts.data() + i * per;
        flag_hits(padded, ay, ax, by.data(), bx.data(), r, bc, xwid, hit.data());
        for (std::size_t j0 = 0; j0 < padded; j0 += 8) {
            std::uint64_t word;
            std::memcpy(&word, hit.data() + j0, 8);
            for (; word != 0; word &= word - 1) {
                const std::size_t j = j0 + static_cast<std::size_t>(std::countr_zero(word)) / 8;
                const auto d = static_cast<std::uint32_t>(ay + by[j] - r[j]);
                const auto t = static_cast<std::uint32_t>(ax + bx[j]);
                ++crow[j * per + d * xwid + t];
            }
        }
    }
    return c;
}

} // namespace mpm
