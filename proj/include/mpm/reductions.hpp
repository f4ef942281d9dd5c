// SPDX-License-Identifier: Apache-2.0
//
// Input normalizations for the fast algorithms and the bookkeeping that maps
// results of the normalized instance back to the original one.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mpm/matrix.hpp"

namespace mpm {

/// Offsets recorded by the row/column adjustments. The product of the
/// adjusted instance equals the original product plus
/// row_offsets[i] + column_offsets[j] at (i, j). inner_offsets[k] is added to
/// row k of B and subtracted from column k of A, which leaves the product unchanged.
struct UndoTransform {
    std::vector<std::int64_t> row_offsets;
    std::vector<std::int64_t> column_offsets;
    std::vector<std::int64_t> inner_offsets;

    static UndoTransform identity(std::size_t n);

    /// Map a product of the adjusted instance back to the original one.
    [[nodiscard]] SquareMatrix undo(const SquareMatrix& c) const;
    /// Inverse of undo().
    [[nodiscard]] SquareMatrix apply(const SquareMatrix& c) const;
    /// Left operand adjustment required by inner_offsets.
    [[nodiscard]] SquareMatrix adjust_left(const SquareMatrix& a) const;
    /// Compose: first *this, then `next`.
    [[nodiscard]] UndoTransform then(const UndoTransform& next) const;
};

enum class Axis { row, column };

struct Reduced {
    SquareMatrix matrix;
    UndoTransform undo;
};

/// Turn a delta-bounded-difference B into a monotone matrix along `axis`.
/// Row axis: column j (1-based) gets +j*delta. Column axis: row i gets
/// +i*delta and A must be adjusted with undo.adjust_left(). A uniform shift
/// keeps entries non-negative when B has negative entries.
Reduced reduce_bd_to_monotone(const SquareMatrix& b, std::int64_t delta, Axis axis);

/// Shift each row of A so the entries that can still be witnesses land in
/// [0, 2*bound] and replace the rest by +inf. `bound` is the upper bound c*n on
/// the right operand's entries. The anchor is the first column (shifted to
/// exactly `bound`) unless the row minimum lies more than `bound` below it.
Reduced normalize_A_range(const SquareMatrix& a, std::int64_t bound);

/// Prefix-min every row so rows become non-increasing. Valid whenever B is
/// column-monotone; the product is unchanged.
SquareMatrix make_rows_nonincreasing(const SquareMatrix& a);

/// Residue class of v modulo p relative to thirds: 0 if 3r < p,
/// 1 if p <= 3r < 2p, 2 otherwise (r = v mod p).
int residue_class(std::int64_t v, std::int64_t p) noexcept;

/// ceil(p/3), ceil(2p/3).
std::array<std::int64_t, 3> residue_shifts(std::int64_t p) noexcept;

/// Nine sub-instances whose element-wise minimum (after adding back the
/// shifts) is the product of a row-monotone instance.
struct ResidueSplit {
    std::int64_t p = 0;
    /// Shifted parts: every finite entry has (entry mod p) < p/3.
    std::array<SquareMatrix, 3> a_parts;
    std::array<SquareMatrix, 3> b_parts;
    /// Shift removed from each part; add a_shift[x] + b_shift[y] to A_x * B_y.
    std::array<std::int64_t, 3> a_shift{};
    std::array<std::int64_t, 3> b_shift{};

    /// Element-wise minimum over the nine shifted-back products, indexed [a][b].
    [[nodiscard]] SquareMatrix recombine(const std::array<std::array<SquareMatrix, 3>, 3>& products) const;
};

/// Requires B row-monotone with non-negative finite entries and p >= 7.
ResidueSplit split_by_residue(const SquareMatrix& a, const SquareMatrix& b, std::int64_t p);

/// Same split for the column-monotone variant: both operands keep only the
/// entries of one residue class, the rest become +inf.
ResidueSplit split_by_residue_fill_inf(const SquareMatrix& a, const SquareMatrix& b, std::int64_t p);

struct SeqResidueSplit {
    std::int64_t p = 0;
    std::array<Seq, 3> a_parts;
    std::array<Seq, 3> b_parts;
    std::array<std::int64_t, 3> a_shift{};
    std::array<std::int64_t, 3> b_shift{};
    /// Number of maximal runs of +inf in each part.
    std::array<std::size_t, 3> a_inf_intervals{};
    std::array<std::size_t, 3> b_inf_intervals{};

    [[nodiscard]] Seq recombine(const std::array<std::array<Seq, 3>, 3>& convolutions) const;
};

SeqResidueSplit split_seq_by_residue(const Seq& a, const Seq& b, std::int64_t p);

/// Number of maximal runs of +inf entries.
std::size_t count_inf_intervals(const Seq& s);

/// p * C_star + C_mod entry-wise; +inf propagates from either side.
SquareMatrix reconstruct_from_parts(const SquareMatrix& c_star, const SquareMatrix& c_mod, std::int64_t p);
Seq reconstruct_from_parts(const Seq& c_star, const Seq& c_mod, std::int64_t p);

} // namespace mpm
