// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "mpm/errors.hpp"
#include "mpm/io.hpp"

using namespace mpm;

TEST_CASE("instance round trip") {
    std::mt19937_64 rng(4);
    Instance m{"row-monotone", 5, {mpm::test::random_matrix(5, 30, rng, 20), mpm::test::random_matrix(5, 30, rng)}, {}};
    std::stringstream ss;
    write_instance(ss, m);
    const Instance back = read_instance(ss);
    CHECK(back.kind == m.kind);
    CHECK(back.n == 5);
    CHECK(back.matrices == m.matrices);

    Instance s{"seq", 40, {}, {Seq(40, ExtInt(3)), Seq(40, ExtInt::inf())}};
    std::stringstream ss2;
    write_instance(ss2, s);
    CHECK(read_instance(ss2).seqs == s.seqs);

    Instance r{"seq-result", 3, {}, {Seq{1, 2, 3, 4, 5}}};
    std::stringstream ss3;
    write_instance(ss3, r);
    CHECK(read_instance(ss3).seqs == r.seqs);
}

TEST_CASE("malformed files raise IoError") {
    for (const char* text : {"", "MPM2 seq 2\n1 2\n", "MPM1 seq 2\n1\n", "MPM1 seq 2\n1 2 3\n", "MPM1 bogus 1\n1\n",
                             "MPM1 matrix 2\n1 2 3 x\n", "MPM1 seq 1\n99999999999999999\n", "MPM1 seq -1\n"}) {
        std::istringstream in(text);
        CHECK_THROWS_AS(read_instance(in), IoError);
    }
    CHECK_THROWS_AS(read_instance_file("/nonexistent/dir/file.mpm"), IoError);
}
