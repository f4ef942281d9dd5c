// SPDX-License-Identifier: Apache-2.0
//
// Exact (min, +) products with a monotone right operand: the basic
// scaled-approximation algorithm, the recursive bit-level algorithm for
// row-monotone B, and its column-monotone counterpart.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "mpm/matrix.hpp"
#include "mpm/slice_product.hpp"

namespace mpm {

inline constexpr std::int64_t kBasicBMin = 0;
inline constexpr std::int64_t kBasicBMax = 2;
inline constexpr std::int64_t kLevelBMin = -10;
inline constexpr std::int64_t kLevelBMax = 10;
inline constexpr std::size_t kLevelBuckets = kLevelBMax - kLevelBMin + 1;

/// Maximal constant run used to store triple sets.
///   row_j:    (i, k, [j0, j1])  r = i, s = k, [lo, hi] = [j0, j1]
///   col_k:    (i, j, [k0, k1])  r = i, s = j, [lo, hi] = [k0, k1]
///   conv_i:   ([i0, i1], t)     r = t, s unused, [lo, hi] = [i0, i1]
/// All indices are zero-based.
enum class SegmentKind { row_j, col_k, conv_i };

struct Segment {
    std::uint32_t r = 0;
    std::uint32_t s = 0;
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;

    [[nodiscard]] std::size_t length() const noexcept { return hi - lo + 1; }
    bool operator==(const Segment&) const = default;
    auto operator<=>(const Segment&) const = default;
};

/// T_b^(l) for b in [-10, 10].
struct TripleSets {
    SegmentKind kind = SegmentKind::row_j;
    int level = 0;
    std::array<std::vector<Segment>, kLevelBuckets> buckets;

    std::vector<Segment>& bucket(std::int64_t b) { return buckets[static_cast<std::size_t>(b - kLevelBMin)]; }
    [[nodiscard]] const std::vector<Segment>& bucket(std::int64_t b) const {
        return buckets[static_cast<std::size_t>(b - kLevelBMin)];
    }
    [[nodiscard]] std::size_t segment_count() const noexcept;
    /// Number of index triples (or pairs) covered.
    [[nodiscard]] std::size_t triple_count() const noexcept;
};

struct ApproxPair {
    SquareMatrix a_tilde, b_tilde, c_tilde;
    std::int64_t scale = 1;
};

struct StarTriple {
    SquareMatrix a_star, b_star, c_star;
};

struct MmOptions {
    /// Exponent of the scale (basic) or of the prime range (recursive).
    double alpha = 0.5;
    /// Blow-up guard constant G.
    double guard = 64.0;
    int max_restarts = 8;
    /// Use this prime instead of sampling one.
    std::optional<std::uint64_t> fixed_prime;
    ProductBackend backend = ProductBackend::scatter;
    /// Instances with n below the cutoff go straight to the oracle.
    std::size_t oracle_cutoff = 0;

    static MmOptions basic_defaults() {
        MmOptions o;
        o.alpha = 1.0 / 3.0;
        return o;
    }
};

struct PhaseTimes {
    double approx_ms = 0;
    double polymul_ms = 0;
    double subtract_ms = 0;
};

struct RunMetadata {
    std::uint64_t p = 0;
    int h = 0;
    std::int64_t scale = 0;
    int restarts = 0;
    int widenings = 0;
    /// Segments summed over sub-instances and buckets, indexed by level.
    std::vector<std::size_t> level_segments;
    std::size_t sum_T_segments = 0;
    /// Property-(2) violations repaired by clamping.
    std::size_t clamps = 0;
    bool oracle_fallthrough = false;
    PhaseTimes times;
};

/// Snapshot handed to observers after the top level and after every level.
struct LevelView {
    int part_a = -1;
    int part_b = -1;
    std::uint64_t p = 0;
    int h = 0;
    int level = 0;
    const SquareMatrix& a;
    const SquareMatrix& b;
    const StarTriple& star;
    const SquareMatrix& c_level;
    const TripleSets& triples;
};
using LevelObserver = std::function<void(const LevelView&)>;

// ----------------------------------------------------------- basic phases

/// Exact product of a scaled pair via per-row range-chmin trees over the
/// value runs of B's rows. B must be row-monotone and finite.
SquareMatrix approx_minplus_compressed(const SquareMatrix& a_tilde, const SquareMatrix& b_tilde);

ApproxPair make_approx_pair(const SquareMatrix& a, const SquareMatrix& b, std::int64_t scale);

/// Triples with A~ + B~ != C~ + b and A~ + B~ = C~ + b (mod p), as row_j segments.
std::vector<Segment> compute_Tb_basic(const ApproxPair& ap, std::uint64_t p, std::int64_t b);

SquareMatrix basic_monotone_minplus(const SquareMatrix& a, const SquareMatrix& b, std::mt19937_64& rng,
                                    const MmOptions& opts = MmOptions::basic_defaults(), RunMetadata* meta = nullptr);

// ------------------------------------------------------- recursive phases

/// floor((v mod p) / 2^l), +inf preserved.
SquareMatrix level_matrix(const SquareMatrix& m, std::uint64_t p, int l);

/// A* = floor(A / p), B* = floor(B / p), C* = A* (min,+) B*.
StarTriple star_product(const SquareMatrix& a, const SquareMatrix& b, std::uint64_t p);

/// Smallest h with p < 2^h.
int level_count(std::uint64_t p);

/// T_0^(h): segments with finite A and A* + B* != C*.
TripleSets init_top_level(const SquareMatrix& a, const StarTriple& star);

/// Level data shared by extraction and refinement.
struct LevelInputs {
    const SquareMatrix& a;
    const SquareMatrix& b;
    const StarTriple& star;
    std::uint64_t p;
};

/// C^(l) from C^(l+1) and T^(l+1). Returns the number of property-(2)
/// clamps through `clamps`. Throws InvariantError on a negative count.
SquareMatrix extract_level(const LevelInputs& in, int l, const SquareMatrix& c_next, const TripleSets& t_next,
                           ProductBackend backend, std::size_t* clamps = nullptr);

/// T^(l) obtained by splitting the segments of T^(l+1).
TripleSets refine_segments(const LevelInputs& in, int l, const TripleSets& t_next, const SquareMatrix& c_level);

/// Recursion on one pair satisfying the residue assumption (every finite
/// entry has (v mod p) < p/3, B row-monotone). Returns C, or nullopt when the
/// blow-up guard fires.
std::optional<SquareMatrix> minplus_residue_instance(const SquareMatrix& a, const SquareMatrix& b, std::uint64_t p,
                                                     const MmOptions& opts, RunMetadata* meta = nullptr,
                                                     const LevelObserver& observer = {}, int part_a = -1,
                                                     int part_b = -1);

SquareMatrix recursive_monotone_minplus(const SquareMatrix& a, const SquareMatrix& b, std::mt19937_64& rng,
                                        const MmOptions& opts = {}, RunMetadata* meta = nullptr,
                                        const LevelObserver& observer = {});

// -------------------------------------------------- column-monotone variant

/// C* for row-nonincreasing A* and column-monotone B* (both may hold +inf),
/// merging the value runs of A's row and B's column.
SquareMatrix star_product_columns(const SquareMatrix& a_star, const SquareMatrix& b_star);

std::optional<SquareMatrix> minplus_residue_instance_columns(const SquareMatrix& a, const SquareMatrix& b,
                                                             std::uint64_t p, const MmOptions& opts,
                                                             RunMetadata* meta = nullptr,
                                                             const LevelObserver& observer = {}, int part_a = -1,
                                                             int part_b = -1);

SquareMatrix column_monotone_minplus(const SquareMatrix& a, const SquareMatrix& b, std::mt19937_64& rng,
                                     const MmOptions& opts = {}, RunMetadata* meta = nullptr,
                                     const LevelObserver& observer = {});

} // namespace mpm
