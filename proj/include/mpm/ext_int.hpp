// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>

namespace mpm {

/// Raw sentinel used for +inf in every int64 buffer of the library.
inline constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

/// Finite entries must satisfy |v| <= kMagnitudeCap so that sums of a few
/// entries never come near the sentinel.
inline constexpr std::int64_t kMagnitudeCap = std::int64_t{1} << 40;

/// Element of the (min, +) semiring: a finite 64-bit integer or +inf.
class ExtInt {
  public:
    constexpr ExtInt() noexcept = default;
    constexpr ExtInt(std::int64_t v) noexcept : v_(v) {} // NOLINT(google-explicit-constructor)

    static constexpr ExtInt inf() noexcept { return ExtInt(kInf); }

    [[nodiscard]] constexpr bool is_inf() const noexcept { return v_ == kInf; }
    [[nodiscard]] constexpr bool is_finite() const noexcept { return v_ != kInf; }

    /// Finite value, or kInf for +inf.
    [[nodiscard]] constexpr std::int64_t raw() const noexcept { return v_; }

    constexpr ExtInt operator+(ExtInt o) const noexcept {
        return (is_inf() || o.is_inf()) ? inf() : ExtInt(v_ + o.v_);
    }
    constexpr ExtInt& operator+=(ExtInt o) noexcept { return *this = *this + o; }

    constexpr auto operator<=>(const ExtInt&) const noexcept = default;

  private:
    std::int64_t v_ = 0;
};

constexpr ExtInt min(ExtInt a, ExtInt b) noexcept { return b < a ? b : a; }

inline std::ostream& operator<<(std::ostream& os, ExtInt v) {
    if (v.is_inf()) return os << "inf";
    return os << v.raw();
}

/// Saturating add on raw buffers.
constexpr std::int64_t sat_add(std::int64_t a, std::int64_t b) noexcept {
    return (a == kInf || b == kInf) ? kInf : a + b;
}

/// Floor division and the matching non-negative remainder (m > 0).
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t m) noexcept {
    std::int64_t q = a / m;
    if ((a % m != 0) && ((a < 0) != (m < 0))) --q;
    return q;
}
constexpr std::int64_t floor_mod(std::int64_t a, std::int64_t m) noexcept {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

} // namespace mpm
