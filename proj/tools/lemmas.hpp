// SPDX-License-Identifier: Apache-2.0
//
// Randomized property suites over the intermediate quantities of the
// algorithms: scaled approximations, level matrices and erroneous-term sets.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mpm::driver {

struct SuiteResult {
    std::string name;
    std::size_t checks = 0;
    std::size_t violations = 0;
    /// Description of the first violation, empty if none.
    std::string first_violation;

    [[nodiscard]] bool passed() const noexcept { return violations == 0 && checks > 0; }
};

/// 0 <= A~ + B~ - C~ <= 2 at witnesses, matrix (scale n^(1/3)) and sequence (scale n^0.2).
SuiteResult suite_sandwich(std::uint64_t seed);
/// -7 <= C^(l) - 2 C^(l+1) <= 8 at finite outputs, all three recursive algorithms.
SuiteResult suite_level_relation(std::uint64_t seed);
/// A^(l) + B^(l) - C^(l) in [-10, 10] at every witness and level.
SuiteResult suite_witness_window(std::uint64_t seed);
/// Union over b of T^(l) is contained in the union of T^(l+1).
SuiteResult suite_nesting(std::uint64_t seed);
/// floor((C mod p - 2(2^l - 1)) / 2^l) <= C^(l) <= floor((C mod p + 2(2^l - 1)) / 2^l).
SuiteResult suite_property_bounds(std::uint64_t seed);
/// C^(l) non-decreasing along a row wherever C* is constant (row-monotone
/// recursion). Clamp repairs performed by the algorithm count as violations.
SuiteResult suite_property_monotone(std::uint64_t seed);
/// Expanded T_b^(l) equals brute-force enumeration for n <= 16, every level and b.
SuiteResult suite_enumeration(std::uint64_t seed);

std::vector<SuiteResult> run_all_suites(std::uint64_t seed);

} // namespace mpm::driver
