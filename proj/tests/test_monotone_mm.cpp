// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <limits>

#include "helpers.hpp"
#include "mpm/brute.hpp"
#include "mpm/errors.hpp"
#include "mpm/generators.hpp"
#include "mpm/monotone_mm.hpp"
#include "mpm/oracle.hpp"
#include "mpm/primes.hpp"
#include "mpm/reductions.hpp"

using namespace mpm;
using mpm::test::mat;

TEST_CASE("single-entry instances") {
    std::mt19937_64 rng(1);
    CHECK(basic_monotone_minplus(mat({{3}}), mat({{4}}), rng) == mat({{7}}));
    CHECK(recursive_monotone_minplus(mat({{3}}), mat({{4}}), rng) == mat({{7}}));
    CHECK(column_monotone_minplus(mat({{3}}), mat({{4}}), rng) == mat({{7}}));
    CHECK(recursive_monotone_minplus(mat({{ExtInt::inf()}}), mat({{4}}), rng)(0, 0).is_inf());
}

TEST_CASE("approx_minplus_compressed") {
    CHECK(approx_minplus_compressed(mat({{2}}), mat({{5}})) == mat({{7}}));
    const SquareMatrix a = mat({{4, 1, 9}, {3, 3, 3}, {0, 8, 2}});
    const SquareMatrix b = mat({{2, 2, 2}, {5, 5, 5}, {0, 0, 0}});
    const SquareMatrix c = approx_minplus_compressed(a, b);
    CHECK(c == minplus_oracle(a, b));
    std::mt19937_64 rng(2);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t n = 1 + rng() % 20;
        const SquareMatrix x = gen_arbitrary(n, 3, rng, 15), y = gen_row_monotone(n, 3, rng);
        CHECK(approx_minplus_compressed(x, y) == minplus_oracle(x, y));
    }
}

TEST_CASE("compute_Tb_basic against its definition") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 10; ++rep) {
        const SquareMatrix a = gen_arbitrary(12, 4, rng, 10), b = gen_row_monotone(12, 4, rng);
        const ApproxPair ap = make_approx_pair(a, b, 2);
        CHECK(compute_Tb_basic(ap, 1000003, 0).empty());
        for (std::uint64_t p : {2, 3, 5}) {
            for (std::int64_t off = kBasicBMin; off <= kBasicBMax; ++off) {
                std::vector<std::array<std::uint32_t, 3>> got, want;
                for (const Segment& g : compute_Tb_basic(ap, p, off))
                    for (std::uint32_t j = g.lo; j <= g.hi; ++j) got.push_back({g.r, g.s, j});
                for (std::uint32_t i = 0; i < 12; ++i)
                    for (std::uint32_t k = 0; k < 12; ++k)
                        for (std::uint32_t j = 0; j < 12; ++j) {
                            const ExtInt s = ap.a_tilde(i, k) + ap.b_tilde(k, j);
                            if (s.is_inf() || ap.c_tilde(i, j).is_inf()) continue;
                            const std::int64_t d = s.raw() - ap.c_tilde(i, j).raw() - off;
                            if (d != 0 && floor_mod(d, static_cast<std::int64_t>(p)) == 0) want.push_back({i, k, j});
                        }
                std::sort(got.begin(), got.end());
                CHECK(got == want);
            }
        }
    }
    // A single pair whose scaled sum exceeds C~ by exactly p.
    const ApproxPair ap{mat({{0, 7}, {9, 9}}), mat({{0, 0}, {0, 0}}), mat({{0, 0}, {0, 0}}), 1};
    const auto t = compute_Tb_basic(ap, 7, 0);
    REQUIRE(t.size() == 1);
    CHECK(t[0] == Segment{0, 1, 0, 1});
}

TEST_CASE("level_matrix and star_product") {
    CHECK(level_matrix(mat({{13}}), 11, 1) == mat({{1}}));
    CHECK(level_matrix(mat({{13, 40}, {0, 11}}), 11, 0) == mat({{2, 7}, {0, 0}}));
    const int h = level_count(11);
    CHECK(h == 4);
    CHECK(level_matrix(mat({{13, 40}, {0, 11}}), 11, h) == SquareMatrix(2));
    CHECK(level_matrix(mat({{ExtInt::inf()}}), 11, 1)(0, 0).is_inf());
    const StarTriple small = star_product(mat({{1, 2}, {3, 4}}), mat({{0, 1}, {2, 5}}), 7);
    CHECK(small.c_star == SquareMatrix(2));
    const StarTriple st = star_product(mat({{ExtInt::inf(), ExtInt::inf()}, {20, 1}}), mat({{0, 8}, {15, 30}}), 7);
    CHECK(st.c_star(0, 0).is_inf());
    CHECK(st.c_star(0, 1).is_inf());
    CHECK(st.c_star(1, 1) == ExtInt(3)); // min(2 + 1, 0 + 4)
}

TEST_CASE("init_top_level") {
    const SquareMatrix a = mat({{1, 2}, {0, 1}});
    const SquareMatrix b = mat({{0, 1}, {2, 2}});
    CHECK(init_top_level(a, star_product(a, b, 7)).segment_count() == 0);
    // Row 0 of A: k = 1 has A* = 1 while C* = 0 everywhere.
    const SquareMatrix a2 = mat({{0, 7}, {0, 0}});
    const TripleSets t = init_top_level(a2, star_product(a2, mat({{0, 0}, {0, 0}}), 7));
    REQUIRE(t.bucket(0).size() == 1);
    CHECK(t.bucket(0)[0] == Segment{0, 1, 0, 1});
}

TEST_CASE("basic and recursive products equal the oracle") {
    std::mt19937_64 rng(40);
    for (std::size_t n : {8, 16, 32})
        for (int seed = 0; seed < 20; ++seed) {
            const SquareMatrix a = gen_arbitrary(n, 2, rng, seed % 3 == 0 ? 20 : 0);
            const SquareMatrix b = gen_row_monotone(n, 2, rng);
            const SquareMatrix want = minplus_oracle(a, b);
            CHECK(basic_monotone_minplus(a, b, rng) == want);
            CHECK(recursive_monotone_minplus(a, b, rng) == want);
            MmOptions sym;
            sym.backend = ProductBackend::symbolic;
            CHECK(recursive_monotone_minplus(a, b, rng, sym) == want);
        }
}

TEST_CASE("column-monotone product equals the oracle") {
    std::mt19937_64 rng(41);
    for (int seed = 0; seed < 20; ++seed) {
        const SquareMatrix a = gen_arbitrary(16, 2, rng, 10), b = gen_column_monotone(16, 2, rng);
        CHECK(column_monotone_minplus(a, b, rng) == minplus_oracle(a, b));
        CHECK(minplus_oracle(make_rows_nonincreasing(a), b) == minplus_oracle(a, b));
    }
}

TEST_CASE("every prime in the pool gives the exact product at n = 8") {
    std::mt19937_64 rng(42);
    const SquareMatrix a = gen_arbitrary(8, 3, rng, 10), b = gen_row_monotone(8, 3, rng);
    const SquareMatrix want = minplus_oracle(a, b);
    int w = 0;
    for (std::uint64_t p : widened_pool(prime_interval(8, 1.0 / 3.0, 1, 2).lo, prime_interval(8, 1.0 / 3.0, 1, 2).hi, w).primes) {
        MmOptions o = MmOptions::basic_defaults();
        o.fixed_prime = p;
        CHECK(basic_monotone_minplus(a, b, rng, o) == want);
    }
    const PrimeInterval iv = prime_interval(8, 0.5, 40, 80);
    for (std::uint64_t p : primes_in(iv.lo, iv.hi).primes) {
        MmOptions o;
        o.fixed_prime = p;
        CHECK(recursive_monotone_minplus(a, b, rng, o) == want);
    }
}

TEST_CASE("levels of a random instance stay inside the property windows") {
    std::mt19937_64 rng(43);
    const SquareMatrix a = gen_arbitrary(8, 4, rng), b = gen_row_monotone(8, 4, rng);
    MmOptions o;
    o.fixed_prime = 7;
    std::size_t checked = 0;
    recursive_monotone_minplus(a, b, rng, o, nullptr, [&](const LevelView& v) {
        const SquareMatrix exact = minplus_oracle(v.a, v.b);
        const std::int64_t w = std::int64_t{1} << v.level;
        for (std::size_t t = 0; t < exact.data().size(); ++t) {
            if (exact.data()[t].is_inf()) continue;
            const std::int64_t r = floor_mod(exact.data()[t].raw(), 7);
            const std::int64_t c = v.c_level.data()[t].raw();
            CHECK(c >= floor_div(r - 2 * (w - 1), w));
            CHECK(c <= floor_div(r + 2 * (w - 1), w));
            ++checked;
        }
        for (std::int64_t off = kLevelBMin; off <= kLevelBMax; ++off)
            CHECK(expand_bucket(v.triples, off) == brute_level_triples(v, off));
    });
    CHECK(checked > 0);
}

TEST_CASE("refine_segments drops segments that leave the window") {
    // One (i, k) pair whose level sum sits far above C^(l): nothing survives.
    const SquareMatrix a = mat({{0, 7}, {0, 0}});
    const SquareMatrix b = mat({{0, 0}, {0, 0}});
    const StarTriple st = star_product(a, b, 7);
    TripleSets t = init_top_level(a, st);
    t.level = 3;
    const LevelInputs in{a, b, st, 7};
    const SquareMatrix far = mat({{-100, -100}, {-100, -100}});
    CHECK(refine_segments(in, 2, t, far).segment_count() == 0);
}

TEST_CASE("precondition errors") {
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(recursive_monotone_minplus(mat({{1, 2}, {3, 4}}), mat({{2, 1}, {0, 0}}), rng), PreconditionError);
    CHECK_THROWS_AS(basic_monotone_minplus(mat({{1}}), SquareMatrix(2), rng), PreconditionError);
    CHECK_THROWS_AS(column_monotone_minplus(mat({{1, 2}, {3, 4}}), mat({{2, 1}, {0, 0}}), rng), PreconditionError);
}

TEST_CASE("guard restarts keep the result exact") {
    std::mt19937_64 rng(44);
    const SquareMatrix a = gen_arbitrary(32, 16, rng), b = gen_row_monotone(32, 16, rng);
    MmOptions o;
    o.guard = 1e-6;
    o.max_restarts = 2;
    RunMetadata md;
    CHECK(recursive_monotone_minplus(a, b, rng, o, &md) == minplus_oracle(a, b));
    CHECK(md.restarts == 2);
}

TEST_CASE("oracle cutoff falls through") {
    std::mt19937_64 rng(45);
    const SquareMatrix a = gen_arbitrary(8, 2, rng), b = gen_row_monotone(8, 2, rng);
    MmOptions o;
    o.oracle_cutoff = 64;
    RunMetadata md;
    CHECK(recursive_monotone_minplus(a, b, rng, o, &md) == minplus_oracle(a, b));
    CHECK(md.oracle_fallthrough);
}
