// SPDX-License-Identifier: Apache-2.0
//
// MPM1 text format. Line 1: `MPM1 <kind> <n> [<m>]` where m (default 1) is
// the number of stacked objects. Then the entries of each object, row-major,
// whitespace-separated, with `inf` for +inf. Sequences use kind `seq`.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mpm/matrix.hpp"

namespace mpm {

/// Kinds accepted in the header.
///   row-monotone, column-monotone, bounded-difference, arbitrary, matrix: n x n matrices
///   seq: length-n sequences
///   seq-result: length 2n - 1 sequences (convolution output of length-n inputs)
struct Instance {
    std::string kind;
    std::size_t n = 0;
    std::vector<SquareMatrix> matrices;
    std::vector<Seq> seqs;

    [[nodiscard]] bool is_sequence() const noexcept { return kind == "seq" || kind == "seq-result"; }
    [[nodiscard]] std::size_t count() const noexcept { return is_sequence() ? seqs.size() : matrices.size(); }
};

bool is_known_kind(const std::string& kind) noexcept;

/// Throws IoError on malformed input, unknown kind, missing or extra tokens.
Instance read_instance(std::istream& in);
void write_instance(std::ostream& out, const Instance& inst);

Instance read_instance_file(const std::string& path);
void write_instance_file(const std::string& path, const Instance& inst);

} // namespace mpm
