// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "helpers.hpp"
#include "mpm/errors.hpp"
#include "mpm/generators.hpp"
#include "mpm/oracle.hpp"
#include "mpm/reductions.hpp"

using namespace mpm;
using mpm::test::mat;

namespace {
const ExtInt inf = ExtInt::inf();
}

TEST_CASE("ext_int saturates at inf and orders it last") {
    CHECK((ExtInt(3) + ExtInt(4)) == ExtInt(7));
    CHECK((inf + ExtInt(4)).is_inf());
    CHECK(ExtInt(kMagnitudeCap) < inf);
    CHECK(min(inf, ExtInt(-2)) == ExtInt(-2));
    CHECK(floor_div(-7, 3) == -3);
    CHECK(floor_mod(-7, 3) == 2);
}

TEST_CASE("minplus_oracle small cases") {
    CHECK(minplus_oracle(mat({{3}}), mat({{4}})) == mat({{7}}));
    CHECK(minplus_oracle(SquareMatrix(4), SquareMatrix(4)) == SquareMatrix(4));
    CHECK(minplus_oracle(mat({{1, 5}, {2, 0}}), mat({{0, 3}, {1, 1}})) == mat({{1, 4}, {1, 1}}));
    CHECK_THROWS_AS(minplus_oracle(SquareMatrix(2), SquareMatrix(3)), DimensionError);
}

TEST_CASE("minplus_conv_oracle small cases") {
    CHECK(minplus_conv_oracle(Seq{0, 2}, Seq{1, 3}) == Seq{1, 3, 5});
    CHECK(minplus_conv_oracle(Seq{0}, Seq{0}) == Seq{0});
    CHECK(minplus_conv_oracle(Seq{inf, 1}, Seq{2, 2}) == Seq{inf, 3, 3});
}

TEST_CASE("validate reports the first violation 1-based") {
    CHECK(validate(mat({{0, 1, 1}, {2, 2, 3}, {0, 5, 9}}), MonotoneProfile::row_monotone(3)).ok);
    const auto r = validate(mat({{0, 2, 1}, {0, 0, 0}, {0, 0, 0}}), MonotoneProfile::row_monotone(3));
    CHECK_FALSE(r.ok);
    CHECK(r.row == 1);
    CHECK(r.col == 3);
    const auto bd = validate(mat({{0, 2}, {0, 0}}), MonotoneProfile::bounded_difference(1));
    CHECK_FALSE(bd.ok);
    CHECK(bd.row == 1);
    CHECK(bd.col == 2);
    CHECK_FALSE(validate(mat({{0, 7}, {0, 0}}), MonotoneProfile::row_monotone(3)).ok); // 7 > c n
    CHECK(validate(Seq{0, 1, 1, 4}, MonotoneProfile::sequence(1)).ok);
    CHECK_FALSE(validate(Seq{0, 2, 1, 4}, MonotoneProfile::sequence(1)).ok);
}

TEST_CASE("reduce_bd_to_monotone adds j*delta per column") {
    const Reduced r = reduce_bd_to_monotone(mat({{3, 2}, {4, 4}}), 1, Axis::row);
    CHECK(r.matrix == mat({{4, 4}, {5, 6}}));
    const SquareMatrix b = mat({{3, 3}, {4, 4}});
    const Reduced z = reduce_bd_to_monotone(b, 0, Axis::row);
    CHECK(z.matrix == b);
    CHECK_THROWS_AS(reduce_bd_to_monotone(mat({{0, 5}, {0, 0}}), 1, Axis::row), PreconditionError);
}

TEST_CASE("reductions undo to the original product") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 2 + rep % 7;
        const SquareMatrix a = gen_arbitrary(n, 3, rng, 10);
        const SquareMatrix b = gen_bounded_difference(n, 2, rng);
        const SquareMatrix want = minplus_oracle(a, b);
        const Reduced row = reduce_bd_to_monotone(b, 2, Axis::row);
        CHECK(validate(row.matrix, MonotoneProfile::row_monotone(1 << 20)).ok);
        CHECK(row.undo.undo(minplus_oracle(a, row.matrix)) == want);
        const Reduced col = reduce_bd_to_monotone(b, 2, Axis::column);
        CHECK(validate(col.matrix, MonotoneProfile::column_monotone(1 << 20)).ok);
        CHECK(col.undo.undo(minplus_oracle(col.undo.adjust_left(a), col.matrix)) == want);
        const SquareMatrix m = gen_row_monotone(n, 2, rng);
        const Reduced na = normalize_A_range(a, 2 * static_cast<std::int64_t>(n));
        CHECK(na.undo.undo(minplus_oracle(na.matrix, m)) == minplus_oracle(a, m));
    }
}

TEST_CASE("normalize_A_range shifts each row to the bound") {
    const Reduced r = normalize_A_range(mat({{5, 7, 6}, {10, 11, 12}, {inf, inf, inf}}), 10);
    CHECK(r.matrix(0, 0) == ExtInt(10));
    CHECK(r.matrix(0, 1) == ExtInt(12));
    CHECK(r.matrix(0, 2) == ExtInt(11));
    CHECK(r.matrix(1, 0) == ExtInt(10));
    CHECK(r.matrix(1, 2) == ExtInt(12));
    CHECK(r.matrix(2, 1).is_inf());
}

TEST_CASE("split_by_residue follows the three case rules") {
    const std::int64_t p = 7;
    // B entry 8: classes give 8, 7 + ceil(7/3) = 10, 7 + ceil(14/3) = 12.
    const ResidueSplit s = split_by_residue(mat({{1, 3}, {5, 9}}), mat({{8, 8}, {8, 8}}), p);
    for (int x = 0; x < 3; ++x) CHECK(s.b_parts[x](0, 0).raw() + s.b_shift[x] == std::array{8, 10, 12}[x]);
    // A entry 3 has 3*3 >= 7 and 3*3 < 14: only the middle part keeps it.
    CHECK(s.a_parts[0](0, 1).is_inf());
    CHECK(s.a_parts[1](0, 1).raw() + s.a_shift[1] == 3);
    CHECK(s.a_parts[2](0, 1).is_inf());
    CHECK_THROWS_AS(split_by_residue(mat({{1}}), mat({{1}}), 5), PreconditionError);
}

TEST_CASE("split_by_residue recombines to the oracle") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 10; ++rep) {
        const SquareMatrix a = gen_arbitrary(8, 4, rng, 10);
        const SquareMatrix b = gen_row_monotone(8, 4, rng);
        const ResidueSplit s = split_by_residue(a, b, 41);
        std::array<std::array<SquareMatrix, 3>, 3> prods;
        for (int x = 0; x < 3; ++x)
            for (int y = 0; y < 3; ++y) {
                for (ExtInt v : s.a_parts[x].data()) CHECK((v.is_inf() || 3 * floor_mod(v.raw(), 41) < 41));
                for (ExtInt v : s.b_parts[y].data()) CHECK(3 * floor_mod(v.raw(), 41) < 41);
                CHECK(validate(s.b_parts[y], MonotoneProfile::row_monotone(1000)).ok);
                prods[x][y] = minplus_oracle(s.a_parts[x], s.b_parts[y]);
            }
        CHECK(s.recombine(prods) == minplus_oracle(a, b));
    }
}

TEST_CASE("split_seq_by_residue") {
    const SeqResidueSplit s = split_seq_by_residue(Seq{1, 2, 3, 9, 10}, Seq{0, 0, 0, 0, 0}, 7);
    CHECK(s.a_parts[0][0].raw() + s.a_shift[0] == 1);
    CHECK(s.a_parts[0][1].raw() + s.a_shift[0] == 2);
    CHECK(s.a_parts[0][2].is_inf());
    CHECK(s.a_parts[0][3].raw() + s.a_shift[0] == 9);
    // 10 mod 7 = 3 is not below 7/3 either.
    CHECK(s.a_parts[0][4].is_inf());
    CHECK(s.a_parts[1][4].raw() + s.a_shift[1] == 10);
    CHECK(s.a_inf_intervals[0] == 2);

    const SeqResidueSplit z = split_seq_by_residue(Seq{0, 7, 14}, Seq{7, 7, 21}, 7);
    CHECK(z.a_parts[0] == Seq{0, 7, 14});
    for (int x = 1; x < 3; ++x)
        for (ExtInt v : z.a_parts[x].data()) CHECK(v.is_inf());

    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 5; ++rep) {
        const Seq a = gen_monotone_seq(64, 3, rng), b = gen_monotone_seq(64, 3, rng);
        const SeqResidueSplit sp = split_seq_by_residue(a, b, 41);
        std::array<std::array<Seq, 3>, 3> conv;
        for (int x = 0; x < 3; ++x)
            for (int y = 0; y < 3; ++y) conv[x][y] = minplus_conv_oracle(sp.a_parts[x], sp.b_parts[y]);
        CHECK(sp.recombine(conv) == minplus_conv_oracle(a, b));
    }
}

TEST_CASE("reconstruct_from_parts") {
    CHECK(reconstruct_from_parts(Seq{2}, Seq{5}, 11) == Seq{27});
    CHECK(reconstruct_from_parts(Seq{inf}, Seq{5}, 11)[0].is_inf());
    CHECK_THROWS_AS(reconstruct_from_parts(Seq{1}, Seq{11}, 11), PreconditionError);
    std::mt19937_64 rng(3);
    const SquareMatrix c = mpm::test::random_matrix(6, 500, rng);
    SquareMatrix q(6), r(6);
    for (std::size_t t = 0; t < 36; ++t) {
        q.data()[t] = ExtInt(c.data()[t].raw() / 13);
        r.data()[t] = ExtInt(c.data()[t].raw() % 13);
    }
    CHECK(reconstruct_from_parts(q, r, 13) == c);
}

TEST_CASE("oracle product with row-monotone B is row-monotone") {
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 1 + rep % 12;
        const SquareMatrix c = minplus_oracle(gen_arbitrary(n, 2, rng), gen_row_monotone(n, 2, rng));
        CHECK(validate(c, MonotoneProfile::row_monotone(1 << 20)).ok);
    }
}

TEST_CASE("oracle is covariant under row permutations of A") {
    std::mt19937_64 rng(4);
    const SquareMatrix a = mpm::test::random_matrix(7, 50, rng, 10), b = mpm::test::random_matrix(7, 50, rng, 10);
    std::vector<std::size_t> perm(7);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    SquareMatrix pa(7);
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t k = 0; k < 7; ++k) pa(i, k) = a(perm[i], k);
    const SquareMatrix c = minplus_oracle(a, b), pc = minplus_oracle(pa, b);
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 7; ++j) CHECK(pc(i, j) == c(perm[i], j));
}

TEST_CASE("generators produce their profiles deterministically") {
    std::mt19937_64 r1(7), r2(7);
    const SquareMatrix m = gen_row_monotone(16, 1, r1);
    CHECK(validate(m, MonotoneProfile::row_monotone(1)).ok);
    CHECK(m == gen_row_monotone(16, 1, r2));
    std::mt19937_64 r3(1);
    CHECK(validate(gen_bounded_difference(8, 1, r3), MonotoneProfile::bounded_difference(1)).ok);
    CHECK(validate(gen_column_monotone(8, 2, r3), MonotoneProfile::column_monotone(2)).ok);
    CHECK(validate(gen_monotone_seq_bends(100, 4, 5, r3), MonotoneProfile::sequence(4)).ok);
}
