// SPDX-License-Identifier: Apache-2.0
//
// Plumbing shared by the command-line tool and the acceptance runner:
// instance generation, single runs with oracle verification, and seeded
// sweeps that emit CSV plus log-log fits.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mpm/io.hpp"
#include "mpm/monotone_mm.hpp"

namespace mpm::driver {

/// Algorithm ids accepted by --alg.
inline const std::vector<std::string>& algorithm_ids() {
    static const std::vector<std::string> ids{"oracle",      "basic-mm",   "recursive-mm",
                                              "column-mm",   "basic-conv", "recursive-conv"};
    return ids;
}
bool is_sequence_algorithm(const std::string& alg);

/// Default verification caps: matrices up to 512, sequences up to 65536.
inline constexpr std::size_t kVerifyCapMatrix = 512;
inline constexpr std::size_t kVerifyCapSeq = 65536;

struct RunConfig {
    std::string algorithm = "recursive-mm";
    std::size_t n = 0;
    /// Unset means the algorithm's default.
    std::optional<double> alpha;
    std::optional<double> beta;
    std::uint64_t seed = 1;
    /// Entry-bound constant: monotone entries lie in [0, c n].
    std::int64_t c = 1;
    double guard = 64.0;
    /// Unset means the default cap for the instance type.
    std::optional<std::size_t> verify_cap;
    std::string out;

    [[nodiscard]] double alpha_or_default() const;
    [[nodiscard]] double beta_or_default() const;
    [[nodiscard]] std::size_t verify_cap_or_default() const;
};

struct BenchRecord {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string algorithm;
    double alpha = 0;
    double beta = 0;
    std::uint64_t p = 0;
    int restarts = 0;
    PhaseTimes times;
    double total_ms = 0;
    std::size_t sum_T_segments = 0;
    /// Segments per level, summed over sub-instances and offsets.
    std::vector<std::size_t> level_segments;
    bool verified = false;
};

struct RunOutcome {
    Instance result;
    BenchRecord record;
    /// Oracle comparison performed (n within the cap).
    bool checked = false;
    /// Oracle comparison failed; `diff` describes the first mismatches.
    bool mismatch = false;
    std::string diff;
};

/// Generate a deterministic instance. Kinds: row-monotone, column-monotone,
/// bounded-difference (A arbitrary plus B of the kind), arbitrary-A (one
/// matrix), monotone-seq and seq (two sequences), monotone-seq-bends.
/// Throws PreconditionError on unknown kinds or invalid parameters.
Instance generate(const std::string& kind, std::size_t n, std::uint64_t seed, std::int64_t c, std::int64_t delta,
                  std::size_t pieces);

/// Run one algorithm on a pair instance and verify against the oracle when
/// n is within the cap. Throws PreconditionError if the instance does not
/// fit the algorithm.
RunOutcome run_instance(const RunConfig& cfg, const Instance& inst);

/// Compare a result against the oracle product of the instance.
/// Returns an empty string on agreement, else a short diff report.
std::string diff_against_oracle(const Instance& inst, const Instance& result);

struct SweepSpec {
    RunConfig base;
    std::vector<std::size_t> ns;
    std::size_t seeds = 1;
    std::string kind = "row-monotone";
    std::int64_t delta = 1;
    std::size_t pieces = 8;
    /// Keep rows that were not verified (n above the cap).
    bool include_unverified = false;
    /// 0: MPM_THREADS or 1.
    unsigned threads = 0;
};

struct FitResult {
    std::string algorithm;
    std::string metric;
    double exponent = 0;
    double intercept = 0;
    std::size_t points = 0;
};

struct SweepResult {
    std::vector<BenchRecord> records;
    std::vector<FitResult> fits;
    /// Runs whose oracle check failed.
    std::size_t mismatches = 0;
};

/// Runs (n, seed) for n in ns and seed in [base.seed, base.seed + seeds).
/// Records come back in (n, seed) order regardless of thread count.
SweepResult run_sweep(const SweepSpec& sweep);

/// Least-squares slope of log(median y) against log(n) over the given
/// points; points with median <= 0 are skipped. NaN when fewer than two remain.
FitResult fit_loglog(const std::vector<std::size_t>& n, const std::vector<double>& y, std::string algorithm,
                     std::string metric);

/// Concurrency cap from MPM_THREADS, at least 1.
unsigned thread_cap();

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const BenchRecord& r);
void write_fit_csv(std::ostream& out, const std::vector<FitResult>& fits);

} // namespace mpm::driver
