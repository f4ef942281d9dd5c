// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "mpm/ext_int.hpp"

namespace mpm {

/// Dense n x n matrix of ExtInt, row-major, zero-based element access.
class SquareMatrix {
  public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, ExtInt fill = ExtInt{0}) : n_(n), data_(n * n, fill) {}
    SquareMatrix(std::initializer_list<std::initializer_list<ExtInt>> rows);

    static SquareMatrix from_raw(std::size_t n, std::vector<std::int64_t> raw);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] bool empty() const noexcept { return n_ == 0; }

    ExtInt& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
    ExtInt operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

    [[nodiscard]] std::span<const ExtInt> row(std::size_t i) const noexcept {
        return {data_.data() + i * n_, n_};
    }
    [[nodiscard]] std::span<const ExtInt> data() const noexcept { return data_; }
    [[nodiscard]] std::span<ExtInt> data() noexcept { return data_; }

    /// Copy of the entries as raw int64 (kInf for +inf).
    [[nodiscard]] std::vector<std::int64_t> raw() const;

    [[nodiscard]] SquareMatrix transposed() const;

    bool operator==(const SquareMatrix&) const = default;

  private:
    std::size_t n_ = 0;
    std::vector<ExtInt> data_;
};

/// Sequence of ExtInt. Documented contracts index sequences from 1; storage is zero-based.
class Seq {
  public:
    Seq() = default;
    explicit Seq(std::size_t n, ExtInt fill = ExtInt{0}) : data_(n, fill) {}
    Seq(std::initializer_list<ExtInt> values) : data_(values) {}
    explicit Seq(std::vector<ExtInt> values) : data_(std::move(values)) {}

    static Seq from_raw(std::vector<std::int64_t> raw);

    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    ExtInt& operator[](std::size_t i) noexcept { return data_[i]; }
    ExtInt operator[](std::size_t i) const noexcept { return data_[i]; }
    [[nodiscard]] std::span<const ExtInt> data() const noexcept { return data_; }
    [[nodiscard]] std::vector<std::int64_t> raw() const;

    bool operator==(const Seq&) const = default;

  private:
    std::vector<ExtInt> data_;
};

enum class ProfileKind { row_monotone, column_monotone, monotone_sequence, bounded_difference };

struct MonotoneProfile {
    ProfileKind kind = ProfileKind::row_monotone;
    /// Entries of monotone profiles must lie in [0, c*n].
    std::int64_t c = 1;
    /// Adjacent-entry bound for bounded_difference.
    std::int64_t delta = 0;

    static MonotoneProfile row_monotone(std::int64_t c = 1) { return {ProfileKind::row_monotone, c, 0}; }
    static MonotoneProfile column_monotone(std::int64_t c = 1) { return {ProfileKind::column_monotone, c, 0}; }
    static MonotoneProfile sequence(std::int64_t c = 1) { return {ProfileKind::monotone_sequence, c, 0}; }
    static MonotoneProfile bounded_difference(std::int64_t delta) {
        return {ProfileKind::bounded_difference, 1, delta};
    }
};

/// Result of validate(). Positions are 1-based; sequences report row 1.
struct ValidationReport {
    bool ok = true;
    std::size_t row = 0;
    std::size_t col = 0;
    std::string reason;

    explicit operator bool() const noexcept { return ok; }
};

ValidationReport validate(const SquareMatrix& m, const MonotoneProfile& profile);
ValidationReport validate(const Seq& s, const MonotoneProfile& profile);

/// Throws PreconditionError if a finite entry exceeds kMagnitudeCap in absolute value.
void check_magnitude(const SquareMatrix& m);
void check_magnitude(const Seq& s);

} // namespace mpm
