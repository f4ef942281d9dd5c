// SPDX-License-Identifier: Apache-2.0
//
// Exact (min, +) convolution of two non-decreasing sequences: the basic
// two-parameter algorithm and the recursive bit-level algorithm.
//
// Output index t (zero-based, length 2n - 1) holds C_{t+2} of the 1-based
// definition, i.e. min over i + j = t of A[i] + B[j].
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "mpm/matrix.hpp"
#include "mpm/monotone_mm.hpp"
#include "mpm/slice_product.hpp"

namespace mpm {

struct ConvOptions {
    /// Scale exponent (basic) or prime-range exponent (recursive).
    double alpha = 0.5;
    /// Prime-range exponent of the basic algorithm.
    double beta = 0.4;
    double guard = 64.0;
    int max_restarts = 8;
    std::optional<std::uint64_t> fixed_prime;
    ProductBackend backend = ProductBackend::scatter;
    std::size_t oracle_cutoff = 0;

    static ConvOptions basic_defaults() {
        ConvOptions o;
        o.alpha = 0.2;
        o.beta = 0.4;
        return o;
    }
};

/// Scaled sequences and their exact convolution.
struct ConvApprox {
    Seq a_tilde, b_tilde, c_tilde;
    std::int64_t scale = 1;
};

struct ConvStar {
    Seq a_star, b_star, c_star;
};

/// Snapshot handed to observers after the top level and after every level.
/// Segments are conv_i: r = output index t, [lo, hi] = range of i.
struct ConvLevelView {
    int part_a = -1;
    int part_b = -1;
    std::uint64_t p = 0;
    int h = 0;
    int level = 0;
    const Seq& a;
    const Seq& b;
    const ConvStar& star;
    const Seq& c_level;
    const TripleSets& triples;
};
using ConvLevelObserver = std::function<void(const ConvLevelView&)>;

/// Exact convolution by range-chmin over every pair of constant runs.
/// Works for any input; the cost is (runs of a) * (runs of b) * log n.
/// +inf runs are skipped.
Seq approx_conv(const Seq& a_tilde, const Seq& b_tilde);

ConvApprox make_conv_approx(const Seq& a, const Seq& b, std::int64_t scale);

/// Pairs (i, t - i) with A~_i + B~_{t-i} != C~_t + b and equal mod p, as
/// conv_i segments. Requires finite non-decreasing scaled sequences.
std::vector<Segment> compute_Tb_conv(const ConvApprox& ap, std::uint64_t p, std::int64_t b);

Seq basic_monotone_conv(const Seq& a, const Seq& b, std::mt19937_64& rng,
                        const ConvOptions& opts = ConvOptions::basic_defaults(), RunMetadata* meta = nullptr);

/// floor((v mod p) / 2^l), +inf preserved.
Seq level_seq(const Seq& s, std::uint64_t p, int l);

ConvStar conv_star(const Seq& a, const Seq& b, std::uint64_t p);

/// T_0^(h): maximal segments with finite entries, constant A* and B*, and
/// A* + B* != C* at a finite output.
TripleSets conv_init_top_level(const Seq& a, const Seq& b, const ConvStar& star);

struct ConvLevelInputs {
    const Seq& a;
    const Seq& b;
    const ConvStar& star;
    std::uint64_t p;
};

/// C^(l) from C^(l+1) and T^(l+1).
Seq conv_extract_level(const ConvLevelInputs& in, int l, const Seq& c_next, const TripleSets& t_next,
                       ProductBackend backend);

/// T^(l) from T^(l+1). Throws InvariantError if a segment breaks into more
/// than four pieces or a piece is not constant.
TripleSets conv_refine_segments(const ConvLevelInputs& in, int l, const TripleSets& t_next, const Seq& c_level);

/// Recursion on one pair satisfying the residue assumption (finite entries
/// have (v mod p) < p/3 and are non-decreasing). nullopt when the guard fires.
std::optional<Seq> conv_residue_instance(const Seq& a, const Seq& b, std::uint64_t p, const ConvOptions& opts,
                                         RunMetadata* meta = nullptr, const ConvLevelObserver& observer = {},
                                         int part_a = -1, int part_b = -1);

Seq recursive_monotone_conv(const Seq& a, const Seq& b, std::mt19937_64& rng, const ConvOptions& opts = {},
                            RunMetadata* meta = nullptr, const ConvLevelObserver& observer = {});

} // namespace mpm
