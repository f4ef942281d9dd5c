// SPDX-License-Identifier: Apache-2.0
#include "mpm/reductions.hpp"

#include <algorithm>
#include <cstdlib>

#include "mpm/errors.hpp"

namespace mpm {

UndoTransform UndoTransform::identity(std::size_t n) {
    return UndoTransform{std::vector<std::int64_t>(n, 0), std::vector<std::int64_t>(n, 0),
                         std::vector<std::int64_t>(n, 0)};
}

SquareMatrix UndoTransform::undo(const SquareMatrix& c) const {
    const std::size_t n = c.size();
    if (row_offsets.size() != n || column_offsets.size() != n) throw DimensionError("UndoTransform: size mismatch");
    SquareMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const ExtInt v = c(i, j);
            out(i, j) = v.is_inf() ? v : ExtInt(v.raw() - row_offsets[i] - column_offsets[j]);
        }
    return out;
}

SquareMatrix UndoTransform::apply(const SquareMatrix& c) const {
    const std::size_t n = c.size();
    if (row_offsets.size() != n || column_offsets.size() != n) throw DimensionError("UndoTransform: size mismatch");
    SquareMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const ExtInt v = c(i, j);
            out(i, j) = v.is_inf() ? v : ExtInt(v.raw() + row_offsets[i] + column_offsets[j]);
        }
    return out;
}

SquareMatrix UndoTransform::adjust_left(const SquareMatrix& a) const {
    const std::size_t n = a.size();
    if (inner_offsets.size() != n) throw DimensionError("UndoTransform: size mismatch");
    SquareMatrix out(a);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            if (a(i, k).is_finite()) out(i, k) = ExtInt(a(i, k).raw() - inner_offsets[k]);
    return out;
}

UndoTransform UndoTransform::then(const UndoTransform& next) const {
    UndoTransform out = *this;
    for (std::size_t t = 0; t < out.row_offsets.size(); ++t) {
        out.row_offsets[t] += next.row_offsets[t];
        out.column_offsets[t] += next.column_offsets[t];
        out.inner_offsets[t] += next.inner_offsets[t];
    }
    return out;
}

Reduced reduce_bd_to_monotone(const SquareMatrix& b, std::int64_t delta, Axis axis) {
    const std::size_t n = b.size();
    if (delta < 0) throw PreconditionError("reduce_bd_to_monotone: delta must be non-negative");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (b(i, j).is_inf()) throw PreconditionError("reduce_bd_to_monotone: infinite entry");
            const bool row = axis == Axis::row;
            if (row && j + 1 < n && std::llabs(b(i, j).raw() - b(i, j + 1).raw()) > delta)
                throw PreconditionError("reduce_bd_to_monotone: input is not row-bounded-difference");
            if (!row && i + 1 < n && std::llabs(b(i, j).raw() - b(i + 1, j).raw()) > delta)
                throw PreconditionError("reduce_bd_to_monotone: input is not column-bounded-difference");
        }

    UndoTransform undo = UndoTransform::identity(n);
    SquareMatrix out(n);
    std::int64_t lowest = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const auto step = static_cast<std::int64_t>(axis == Axis::row ? j + 1 : i + 1) * delta;
            out(i, j) = ExtInt(b(i, j).raw() + step);
            lowest = std::min(lowest, out(i, j).raw());
        }
    for (std::size_t t = 0; t < n; ++t) {
        const auto step = static_cast<std::int64_t>(t + 1) * delta;
        if (axis == Axis::row) undo.column_offsets[t] = step - lowest;
        else {
            undo.inner_offsets[t] = step;
            undo.column_offsets[t] = -lowest;
        }
    }
    if (lowest < 0)
        for (ExtInt& v : out.data()) v = ExtInt(v.raw() - lowest);
    return {std::move(out), std::move(undo)};
}

Reduced normalize_A_range(const SquareMatrix& a, std::int64_t bound) {
    const std::size_t n = a.size();
    if (bound < 0) throw PreconditionError("normalize_A_range: negative bound");
    UndoTransform undo = UndoTransform::identity(n);
    SquareMatrix out(n, ExtInt::inf());
    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t lo = kInf;
        for (ExtInt v : a.row(i))
            if (v.is_finite()) lo = std::min(lo, v.raw());
        if (lo == kInf) continue;
        const ExtInt first = a(i, 0);
        const std::int64_t anchor = (first.is_finite() && first.raw() <= lo + bound) ? first.raw() : lo + bound;
        const std::int64_t shift = bound - anchor;
        undo.row_offsets[i] = shift;
        for (std::size_t k = 0; k < n; ++k) {
            const ExtInt v = a(i, k);
            if (v.is_finite() && v.raw() - anchor <= bound) out(i, k) = ExtInt(v.raw() + shift);
        }
    }
    return {std::move(out), std::move(undo)};
}

SquareMatrix make_rows_nonincreasing(const SquareMatrix& a) {
    SquareMatrix out(a);
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 1; k < n; ++k) out(i, k) = min(out(i, k), out(i, k - 1));
    return out;
}

int residue_class(std::int64_t v, std::int64_t p) noexcept {
    const std::int64_t r = floor_mod(v, p);
    if (3 * r < p) return 0;
    if (3 * r < 2 * p) return 1;
    return 2;
}

std::array<std::int64_t, 3> residue_shifts(std::int64_t p) noexcept {
    return {0, (p + 2) / 3, (2 * p + 2) / 3};
}

SquareMatrix ResidueSplit::recombine(const std::array<std::array<SquareMatrix, 3>, 3>& products) const {
    const std::size_t n = products[0][0].size();
    SquareMatrix out(n, ExtInt::inf());
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) {
            const SquareMatrix& c = products[x][y];
            if (c.size() != n) throw DimensionError("ResidueSplit::recombine: size mismatch");
            const ExtInt shift(a_shift[x] + b_shift[y]);
            for (std::size_t t = 0; t < n * n; ++t) out.data()[t] = min(out.data()[t], c.data()[t] + shift);
        }
    return out;
}

namespace {

void check_split_inputs(const SquareMatrix& a, const SquareMatrix& b, std::int64_t p) {
    if (a.size() != b.size()) throw DimensionError("split_by_residue: dimension mismatch");
    if (p < 7) throw PreconditionError("split_by_residue: p must be at least 7");
    for (ExtInt v : a.data())
        if (v.is_finite() && v.raw() < 0) throw PreconditionError("split_by_residue: negative entry in A");
}

} // namespace

ResidueSplit split_by_residue(const SquareMatrix& a, const SquareMatrix& b, std::int64_t p) {
    check_split_inputs(a, b, p);
    const std::size_t n = a.size();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) {
            const ExtInt v = b(k, j);
            if (v.is_inf() || v.raw() < 0) throw PreconditionError("split_by_residue: B entries must be finite and >= 0");
            if (j > 0 && b(k, j - 1) > v) throw PreconditionError("split_by_residue: B is not row-monotone");
        }

    const auto sh = residue_shifts(p);
    ResidueSplit out;
    out.p = p;
    out.a_shift = sh;
    out.b_shift = sh;
    for (int x = 0; x < 3; ++x) {
        out.a_parts[x] = SquareMatrix(n, ExtInt::inf());
        out.b_parts[x] = SquareMatrix(n);
    }
    for (std::size_t t = 0; t < n * n; ++t) {
        const ExtInt v = a.data()[t];
        if (v.is_finite()) {
            const int cls = residue_class(v.raw(), p);
            out.a_parts[cls].data()[t] = ExtInt(v.raw() - sh[cls]);
        }
        const std::int64_t w = b.data()[t].raw();
        const std::int64_t base = p * floor_div(w, p);
        std::array<std::int64_t, 3> filled{};
        switch (residue_class(w, p)) {
        case 0: filled = {w, base + sh[1], base + sh[2]}; break;
        case 1: filled = {base + p, w, base + sh[2]}; break;
        default: filled = {base + p, base + p + sh[1], w}; break;
        }
        for (int x = 0; x < 3; ++x) out.b_parts[x].data()[t] = ExtInt(filled[x] - sh[x]);
    }
    return out;
}

ResidueSplit split_by_residue_fill_inf(const SquareMatrix& a, const SquareMatrix& b, std::int64_t p) {
    check_split_inputs(a, b, p);
    for (ExtInt v : b.data())
        if (v.is_finite() && v.raw() < 0) throw PreconditionError("split_by_residue: negative entry in B");
    const std::size_t n = a.size();
    const auto sh = residue_shifts(p);
    ResidueSplit out;
    out.p = p;
    out.a_shift = sh;
    out.b_shift = sh;
    for (int x = 0; x < 3; ++x) {
        out.a_parts[x] = SquareMatrix(n, ExtInt::inf());
        out.b_parts[x] = SquareMatrix(n, ExtInt::inf());
    }
    for (std::size_t t = 0; t < n * n; ++t) {
        if (const ExtInt v = a.data()[t]; v.is_finite()) {
            const int cls = residue_class(v.raw(), p);
            out.a_parts[cls].data()[t] = ExtInt(v.raw() - sh[cls]);
        }
        if (const ExtInt w = b.data()[t]; w.is_finite()) {
            const int cls = residue_class(w.raw(), p);
            out.b_parts[cls].data()[t] = ExtInt(w.raw() - sh[cls]);
        }
    }
    return out;
}

std::size_t count_inf_intervals(const Seq& s) {
    std::size_t runs = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i].is_inf() && (i == 0 || s[i - 1].is_finite())) ++runs;
    return runs;
}

Seq SeqResidueSplit::recombine(const std::array<std::array<Seq, 3>, 3>& convolutions) const {
    const std::size_t len = convolutions[0][0].size();
    Seq out(len, ExtInt::inf());
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) {
            const Seq& c = convolutions[x][y];
            if (c.size() != len) throw DimensionError("SeqResidueSplit::recombine: length mismatch");
            const ExtInt shift(a_shift[x] + b_shift[y]);
            for (std::size_t t = 0; t < len; ++t) out[t] = min(out[t], c[t] + shift);
        }
    return out;
}

SeqResidueSplit split_seq_by_residue(const Seq& a, const Seq& b, std::int64_t p) {
    if (a.size() != b.size()) throw DimensionError("split_seq_by_residue: length mismatch");
    if (p < 2) throw PreconditionError("split_seq_by_residue: p must be at least 2");
    const std::size_t n = a.size();
    const auto sh = residue_shifts(p);
    SeqResidueSplit out;
    out.p = p;
    out.a_shift = sh;
    out.b_shift = sh;
    for (int x = 0; x < 3; ++x) {
        out.a_parts[x] = Seq(n, ExtInt::inf());
        out.b_parts[x] = Seq(n, ExtInt::inf());
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].is_finite()) {
            const int cls = residue_class(a[i].raw(), p);
            out.a_parts[cls][i] = ExtInt(a[i].raw() - sh[cls]);
        }
        if (b[i].is_finite()) {
            const int cls = residue_class(b[i].raw(), p);
            out.b_parts[cls][i] = ExtInt(b[i].raw() - sh[cls]);
        }
    }
    for (int x = 0; x < 3; ++x) {
        out.a_inf_intervals[x] = count_inf_intervals(out.a_parts[x]);
        out.b_inf_intervals[x] = count_inf_intervals(out.b_parts[x]);
    }
    return out;
}

namespace {

ExtInt reconstruct_entry(ExtInt star, ExtInt mod, std::int64_t p) {
    if (star.is_inf() || mod.is_inf()) return ExtInt::inf();
    if (mod.raw() < 0 || mod.raw() >= p) throw PreconditionError("reconstruct_from_parts: residue outside [0, p)");
    return ExtInt(p * star.raw() + mod.raw());
}

} // namespace

SquareMatrix reconstruct_from_parts(const SquareMatrix& c_star, const SquareMatrix& c_mod, std::int64_t p) {
    if (c_star.size() != c_mod.size()) throw DimensionError("reconstruct_from_parts: dimension mismatch");
    SquareMatrix out(c_star.size());
    for (std::size_t t = 0; t < out.data().size(); ++t)
        out.data()[t] = reconstruct_entry(c_star.data()[t], c_mod.data()[t], p);
    return out;
}

Seq reconstruct_from_parts(const Seq& c_star, const Seq& c_mod, std::int64_t p) {
    if (c_star.size() != c_mod.size()) throw DimensionError("reconstruct_from_parts: length mismatch");
    Seq out(c_star.size());
    for (std::size_t t = 0; t < out.size(); ++t) out[t] = reconstruct_entry(c_star[t], c_mod[t], p);
    return out;
}

} // namespace mpm
