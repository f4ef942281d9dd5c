// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "mpm/ext_int.hpp"
#include "mpm/poly.hpp"
#include "mpm/slice_product.hpp"

using namespace mpm;

namespace {

BiPoly random_bipoly(std::mt19937_64& rng, Window x, Window y, int terms) {
    BiPoly p(x, y);
    for (int t = 0; t < terms; ++t)
        p.add_term(static_cast<std::int64_t>(rng() % 5),
                   x.lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(x.width())),
                   y.lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(y.width())));
    return p;
}

BiPolyMatrix random_polymat(std::mt19937_64& rng, std::size_t n, Window x, Window y) {
    BiPolyMatrix m(n, x, y);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (rng() % 4) m.set(i, j, random_bipoly(rng, x, y, 1 + static_cast<int>(rng() % 3)));
    return m;
}

} // namespace

TEST_CASE("bipoly arithmetic") {
    const BiPoly p = BiPoly::monomial(1, 1, 2) * BiPoly::monomial(1, 0, 3);
    CHECK(p.terms() == std::vector<Term>{{1, 1, 5}});
    BiPoly s({0, 3}, {1, 1});
    s.add_term(2, 0, 1);
    s.add_term(1, 3, 1);
    CHECK(s.min_x_degree(1) == 0);
    CHECK_FALSE(s.min_x_degree(2).has_value());
    CHECK_FALSE(BiPoly({0, 3}, {0, 3}).min_x_degree(1).has_value());
    BiPoly neg = BiPoly::monomial(3, -4, 2);
    CHECK(neg.coeff(-4, 2) == 3);
    CHECK((neg - neg).is_zero());
}

TEST_CASE("bipoly ring axioms on samples") {
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 50; ++rep) {
        const BiPoly a = random_bipoly(rng, {-2, 3}, {0, 4}, 4), b = random_bipoly(rng, {0, 2}, {-1, 2}, 4),
                     c = random_bipoly(rng, {1, 2}, {0, 1}, 3);
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * b == b * a);
    }
}

TEST_CASE("random slice min_x_degree matches a linear scan") {
    std::mt19937_64 rng(2);
    for (int rep = 0; rep < 50; ++rep) {
        const BiPoly p = random_bipoly(rng, {-3, 6}, {0, 3}, 6);
        for (std::int64_t d = 0; d <= 3; ++d) {
            std::optional<std::int64_t> want;
            for (std::int64_t x = -3; x <= 6 && !want; ++x)
                if (p.coeff(x, d) != 0) want = x;
            CHECK(p.min_x_degree(d) == want);
        }
    }
}

TEST_CASE("polymat_mul matches the schoolbook product") {
    std::mt19937_64 rng(200);
    CHECK(polymat_mul(BiPolyMatrix(1, {0, 1}, {0, 2}), random_polymat(rng, 1, {0, 1}, {0, 2})) ==
          BiPolyMatrix(1, {0, 2}, {0, 4}));
    BiPolyMatrix a(1, {1, 1}, {2, 2}), b(1, {0, 0}, {3, 3});
    a.add_term(0, 0, 1, 1, 2);
    b.add_term(0, 0, 1, 0, 3);
    CHECK(polymat_mul(a, b)(0, 0).terms() == std::vector<Term>{{1, 1, 5}});
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 1 + rng() % 6;
        const Window x{-static_cast<std::int64_t>(rng() % 3), static_cast<std::int64_t>(rng() % 4)};
        const Window y{0, static_cast<std::int64_t>(rng() % 5)};
        const BiPolyMatrix l = random_polymat(rng, n, x, y), r = random_polymat(rng, n, x, y);
        CHECK(polymat_mul(l, r) == polymat_mul_schoolbook(l, r));
        CHECK(polymat_mul(l, r, BlockedCubicMatMul(2)) == polymat_mul_schoolbook(l, r));
    }
}

TEST_CASE("pack round trip") {
    BiPolyMatrix m(1, {0, 1}, {0, 1});
    m.add_term(0, 0, 1, 1, 1);
    const PackedPolyMatrix pk = pack(m, 10);
    CHECK(pk.layers.size() > 11);
    CHECK(pk.layers[11][0] == 1);
    CHECK(unpack(pk) == m);
    std::mt19937_64 rng(6);
    for (int rep = 0; rep < 30; ++rep) {
        const BiPolyMatrix r = random_polymat(rng, 3, {0, 1}, {0, 7});
        CHECK(unpack(pack(r, 2 + static_cast<std::int64_t>(rep % 3))) == r);
    }
}

TEST_CASE("seq_poly_mul matches schoolbook") {
    TriPoly a({1, 1}, {1, 1}, {1, 1});
    a.add_term(1, 1, 1, 1);
    const TriPoly sq = seq_poly_mul(a, a);
    CHECK(sq.coeff(2, 2, 2) == 1);
    CHECK(sq == seq_poly_mul_schoolbook(a, a));

    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 40; ++rep) {
        TriPoly l({-1, 2}, {0, 3}, {0, 9}), r({0, 1}, {0, 4}, {0, 9});
        for (int t = 0; t < 12; ++t) {
            l.add_term(1 + static_cast<std::int64_t>(rng() % 3), -1 + static_cast<std::int64_t>(rng() % 4),
                       static_cast<std::int64_t>(rng() % 4), static_cast<std::int64_t>(rng() % 10));
            r.add_term(1, static_cast<std::int64_t>(rng() % 2), static_cast<std::int64_t>(rng() % 5),
                       static_cast<std::int64_t>(rng() % 10));
        }
        CHECK(seq_poly_mul(l, r) == seq_poly_mul_schoolbook(l, r));
    }
    TriPoly one({2, 2}, {1, 1}, {3, 3});
    one.add_term(1, 2, 1, 3);
    TriPoly b({0, 1}, {0, 2}, {0, 4});
    b.add_term(4, 1, 2, 0);
    b.add_term(1, 0, 0, 4);
    const TriPoly shifted = seq_poly_mul(one, b);
    CHECK(shifted.coeff(3, 3, 3) == 4);
    CHECK(shifted.coeff(2, 1, 7) == 1);
}

TEST_CASE("ntt_convolve is exact") {
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<std::int64_t> a(1 + rng() % 300), b(1 + rng() % 300);
        for (auto& v : a) v = static_cast<std::int64_t>(rng() % 100000);
        for (auto& v : b) v = static_cast<std::int64_t>(rng() % 100000);
        std::vector<std::int64_t> want(a.size() + b.size() - 1, 0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) want[i + j] += a[i] * b[j];
        CHECK(ntt_convolve(a, b) == want);
    }
}

TEST_CASE("windowed products agree across backends and with the full product") {
    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 1 + rng() % 9;
        MonomialMatrix a(n), b(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (rng() % 5) a.set(i, j, static_cast<std::int64_t>(rng() % 2), static_cast<std::int64_t>(rng() % 6));
                if (rng() % 5) b.set(i, j, static_cast<std::int64_t>(rng() % 2), static_cast<std::int64_t>(rng() % 6));
            }
        SliceQuery q;
        q.b_lo = -2;
        q.b_hi = 2;
        q.x_lo = 0;
        q.x_width = 3;
        q.modulus = rep % 2 ? 7 : 0;
        q.base.resize(n * n);
        for (auto& v : q.base) v = rng() % 7 == 0 ? kNoSlice : static_cast<std::int64_t>(rng() % 10);
        const SliceCounts s = windowed_product(a, b, q, ProductBackend::scatter);
        const SliceCounts y = windowed_product(a, b, q, ProductBackend::symbolic);
        const BiPolyMatrix full = polymat_mul_schoolbook(a.to_poly(), b.to_poly());
        for (std::size_t o = 0; o < n * n; ++o) {
            if (q.base[o] == kNoSlice) continue;
            for (std::int64_t bi = 0; bi < q.b_count(); ++bi)
                for (std::int64_t t = 0; t < q.x_width; ++t) {
                    std::int64_t want = 0;
                    const std::int64_t d = q.base[o] + q.b_lo + bi;
                    for (std::int64_t yy = 0; yy <= 10; ++yy)
                        if (q.modulus ? floor_mod(yy - d, q.modulus) == 0 : yy == d)
                            want += full(o / n, o % n).coeff(t, yy);
                    CHECK(s.at(o, bi, t) == want);
                    CHECK(y.at(o, bi, t) == want);
                }
        }
    }
}

TEST_CASE("windowed_conv agrees across backends") {
    std::mt19937_64 rng(81);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 1 + rng() % 40;
        MonomialSeq a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (rng() % 4) a.set(i, static_cast<std::int64_t>(rng() % 3), static_cast<std::int64_t>(rng() % 9));
            if (rng() % 4) b.set(i, static_cast<std::int64_t>(rng() % 3), static_cast<std::int64_t>(rng() % 9));
        }
        SliceQuery q;
        q.b_lo = -3;
        q.b_hi = 3;
        q.x_width = 5;
        q.modulus = rep % 2 ? 11 : 0;
        q.base.resize(2 * n - 1);
        for (auto& v : q.base) v = static_cast<std::int64_t>(rng() % 16);
        const SliceCounts s = windowed_conv(a, b, q, ProductBackend::scatter);
        const SliceCounts y = windowed_conv(a, b, q, ProductBackend::symbolic);
        CHECK(s.counts == y.counts);
        const TriPoly full = seq_poly_mul_schoolbook(a.to_poly(), b.to_poly());
        for (std::size_t o = 0; o < 2 * n - 1; ++o)
            for (std::int64_t bi = 0; bi < q.b_count(); ++bi)
                for (std::int64_t t = 0; t < q.x_width; ++t) {
                    std::int64_t want = 0;
                    const std::int64_t d = q.base[o] + q.b_lo + bi;
                    for (std::int64_t yy = 0; yy <= 16; ++yy)
                        if (q.modulus ? floor_mod(yy - d, q.modulus) == 0 : yy == d)
                            want += full.coeff(t, yy, static_cast<std::int64_t>(o));
                    CHECK(s.at(o, bi, t) == want);
                }
    }
}
