// SPDX-License-Identifier: Apache-2.0
#include "mpm/matrix.hpp"

#include <cstdlib>
#include <string>

#include "mpm/errors.hpp"

namespace mpm {

SquareMatrix::SquareMatrix(std::initializer_list<std::initializer_list<ExtInt>> rows)
    : n_(rows.size()), data_() {
    data_.reserve(n_ * n_);
    for (const auto& r : rows) {
        if (r.size() != n_) throw DimensionError("SquareMatrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

SquareMatrix SquareMatrix::from_raw(std::size_t n, std::vector<std::int64_t> raw) {
    if (raw.size() != n * n) throw DimensionError("SquareMatrix::from_raw: expected n*n entries");
    SquareMatrix m(n);
    for (std::size_t t = 0; t < raw.size(); ++t) m.data_[t] = ExtInt(raw[t]);
    return m;
}

std::vector<std::int64_t> SquareMatrix::raw() const {
    std::vector<std::int64_t> out(data_.size());
    for (std::size_t t = 0; t < data_.size(); ++t) out[t] = data_[t].raw();
    return out;
}

SquareMatrix SquareMatrix::transposed() const {
    SquareMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Seq Seq::from_raw(std::vector<std::int64_t> raw) {
    std::vector<ExtInt> v(raw.begin(), raw.end());
    return Seq(std::move(v));
}

std::vector<std::int64_t> Seq::raw() const {
    std::vector<std::int64_t> out(data_.size());
    for (std::size_t t = 0; t < data_.size(); ++t) out[t] = data_[t].raw();
    return out;
}

namespace {

ValidationReport fail(std::size_t row, std::size_t col, std::string reason) {
    return ValidationReport{false, row, col, std::move(reason)};
}

// Shared bound check for the monotone profiles.
bool in_bound(ExtInt v, std::int64_t cap) { return v.is_finite() && v.raw() >= 0 && v.raw() <= cap; }

} // namespace

ValidationReport validate(const SquareMatrix& m, const MonotoneProfile& profile) {
    const std::size_t n = m.size();
    const auto cn = profile.c * static_cast<std::int64_t>(n);
    switch (profile.kind) {
    case ProfileKind::row_monotone:
    case ProfileKind::column_monotone: {
        if (profile.c < 1) return fail(0, 0, "entry-bound constant c must be >= 1");
        const bool by_row = profile.kind == ProfileKind::row_monotone;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const ExtInt v = m(i, j);
                if (!in_bound(v, cn)) return fail(i + 1, j + 1, "entry outside [0, c*n]");
                if (by_row && j > 0 && m(i, j - 1) > v) return fail(i + 1, j + 1, "row decreases");
                if (!by_row && i > 0 && m(i - 1, j) > v) return fail(i + 1, j + 1, "column decreases");
            }
        }
        return {};
    }
    case ProfileKind::bounded_difference: {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const ExtInt v = m(i, j);
                if (v.is_inf()) return fail(i + 1, j + 1, "infinite entry");
                if (j > 0 && std::llabs(v.raw() - m(i, j - 1).raw()) > profile.delta)
                    return fail(i + 1, j + 1, "horizontal difference exceeds delta");
                if (i > 0 && std::llabs(v.raw() - m(i - 1, j).raw()) > profile.delta)
                    return fail(i + 1, j + 1, "vertical difference exceeds delta");
            }
        }
        return {};
    }
    case ProfileKind::monotone_sequence:
        return fail(0, 0, "sequence profile applied to a matrix");
    }
    return fail(0, 0, "unknown profile");
}

ValidationReport validate(const Seq& s, const MonotoneProfile& profile) {
    if (profile.kind != ProfileKind::monotone_sequence) return fail(0, 0, "matrix profile applied to a sequence");
    if (profile.c < 1) return fail(0, 0, "entry-bound constant c must be >= 1");
    const auto cn = profile.c * static_cast<std::int64_t>(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!in_bound(s[i], cn)) return fail(1, i + 1, "entry outside [0, c*n]");
        if (i > 0 && s[i - 1] > s[i]) return fail(1, i + 1, "sequence decreases");
    }
    return {};
}

void check_magnitude(const SquareMatrix& m) {
    for (ExtInt v : m.data())
        if (v.is_finite() && std::llabs(v.raw()) > kMagnitudeCap)
            throw PreconditionError("matrix entry exceeds magnitude cap 2^40");
}

void check_magnitude(const Seq& s) {
    for (ExtInt v : s.data())
        if (v.is_finite() && std::llabs(v.raw()) > kMagnitudeCap)
            throw PreconditionError("sequence entry exceeds magnitude cap 2^40");
}

} // namespace mpm
