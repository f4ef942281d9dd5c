// SPDX-License-Identifier: Apache-2.0
#include "mpm/monotone_mm.hpp"

#include <algorithm>
#include <limits>

#include "internal.hpp"
#include "mpm/errors.hpp"
#include "mpm/oracle.hpp"
#include "mpm/range_tree.hpp"
#include "mpm/reductions.hpp"

namespace mpm {

using detail::first_true;
using detail::run_ends;
using detail::ScopedTimer;

std::size_t TripleSets::segment_count() const noexcept {
    std::size_t s = 0;
    for (const auto& b : buckets) s += b.size();
    return s;
}

std::size_t TripleSets::triple_count() const noexcept {
    std::size_t s = 0;
    for (const auto& b : buckets)
        for (const Segment& g : b) s += g.length();
    return s;
}

namespace {

constexpr int kXWidth = 3; // x-degrees 0..2 of a level product
constexpr int kSlots = static_cast<int>(kLevelBuckets) * kXWidth;

void require_same_size(const SquareMatrix& a, const SquareMatrix& b, const char* who) {
    if (a.size() != b.size()) throw DimensionError(std::string(who) + ": dimension mismatch");
}

void require_row_monotone(const SquareMatrix& b, const char* who) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) {
            const ExtInt v = b(k, j);
            if (v.is_inf()) throw PreconditionError(std::string(who) + ": B must be finite");
            if (j > 0 && b(k, j - 1) > v) throw PreconditionError(std::string(who) + ": B is not row-monotone");
        }
}

void require_column_monotone(const SquareMatrix& b, const char* who) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) {
            const ExtInt v = b(k, j);
            if (v.is_inf()) throw PreconditionError(std::string(who) + ": B must be finite");
            if (k > 0 && b(k - 1, j) > v) throw PreconditionError(std::string(who) + ": B is not column-monotone");
        }
}

void require_nonnegative(const SquareMatrix& m, const char* who) {
    check_magnitude(m);
    for (ExtInt v : m.data())
        if (v.is_finite() && v.raw() < 0) throw PreconditionError(std::string(who) + ": negative entry");
}

std::int64_t max_finite(const SquareMatrix& m) {
    std::int64_t best = 0;
    for (ExtInt v : m.data())
        if (v.is_finite()) best = std::max(best, v.raw());
    return best;
}

void add_level_stat(RunMetadata* meta, int l, std::size_t segments) {
    if (!meta) return;
    if (meta->level_segments.size() <= static_cast<std::size_t>(l)) meta->level_segments.resize(l + 1, 0);
    meta->level_segments[l] += segments;
    meta->sum_T_segments += segments;
}

// Raw residues v mod p, or -1 for +inf.
std::vector<std::int64_t> residues(const SquareMatrix& m, std::uint64_t p) {
    const auto pp = static_cast<std::int64_t>(p);
    std::vector<std::int64_t> r(m.data().size());
    for (std::size_t t = 0; t < r.size(); ++t) {
        const ExtInt v = m.data()[t];
        r[t] = v.is_inf() ? -1 : floor_mod(v.raw(), pp);
    }
    return r;
}

MonomialMatrix level_encoding(const std::vector<std::int64_t>& mod, std::size_t n, int l) {
    MonomialMatrix m(n);
    for (std::size_t t = 0; t < mod.size(); ++t)
        if (mod[t] >= 0) m.set(t / n, t % n, (mod[t] >> l) & 1, mod[t] >> (l + 1));
    return m;
}

void check_residue_assumption(const SquareMatrix& a, const SquareMatrix& b, std::uint64_t p, const char* who) {
    const auto pp = static_cast<std::int64_t>(p);
    auto ok = [&](ExtInt v) { return v.is_inf() || (v.raw() >= 0 && 3 * floor_mod(v.raw(), pp) < pp); };
    for (ExtInt v : a.data())
        if (!ok(v)) throw PreconditionError(std::string(who) + ": A violates the residue assumption");
    for (ExtInt v : b.data())
        if (!ok(v)) throw PreconditionError(std::string(who) + ": B violates the residue assumption");
}

} // namespace

// ================================================================ basic

SquareMatrix approx_minplus_compressed(const SquareMatrix& a_tilde, const SquareMatrix& b_tilde) {
    require_same_size(a_tilde, b_tilde, "approx_minplus_compressed");
    require_row_monotone(b_tilde, "approx_minplus_compressed");
    const std::size_t n = a_tilde.size();
    SquareMatrix c(n, ExtInt::inf());
    if (n == 0) return c;
    // Value runs of each row of B as (start, value).
    std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> runs(n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
            if (j == 0 || b_tilde(k, j) != b_tilde(k, j - 1))
                runs[k].emplace_back(static_cast<std::uint32_t>(j), b_tilde(k, j).raw());
    for (std::size_t i = 0; i < n; ++i) {
        RangeChminTree tree(n, ExtInt::inf());
        for (std::size_t k = 0; k < n; ++k) {
            const ExtInt aik = a_tilde(i, k);
            if (aik.is_inf()) continue;
            const auto& rk = runs[k];
            for (std::size_t r = 0; r < rk.size(); ++r) {
                const std::size_t lo = rk[r].first + 1;
                const std::size_t hi = r + 1 < rk.size() ? rk[r + 1].first : n;
                tree.range_chmin(lo, hi, ExtInt(aik.raw() + rk[r].second));
            }
        }
        const auto row = tree.snapshot();
        std::copy(row.begin(), row.end(), c.data().begin() + static_cast<std::ptrdiff_t>(i * n));
    }
    return c;
}

ApproxPair make_approx_pair(const SquareMatrix& a, const SquareMatrix& b, std::int64_t scale) {
    require_same_size(a, b, "make_approx_pair");
    if (scale < 1) throw PreconditionError("make_approx_pair: scale must be positive");
    ApproxPair ap{SquareMatrix(a.size()), SquareMatrix(b.size()), {}, scale};
    for (std::size_t t = 0; t < a.data().size(); ++t) {
        const ExtInt va = a.data()[t], vb = b.data()[t];
        ap.a_tilde.data()[t] = va.is_inf() ? va : ExtInt(floor_div(va.raw(), scale));
        ap.b_tilde.data()[t] = vb.is_inf() ? vb : ExtInt(floor_div(vb.raw(), scale));
    }
    ap.c_tilde = approx_minplus_compressed(ap.a_tilde, ap.b_tilde);
    return ap;
}

std::vector<Segment> compute_Tb_basic(const ApproxPair& ap, std::uint64_t p, std::int64_t b) {
    const std::size_t n = ap.a_tilde.size();
    const auto pp = static_cast<std::int64_t>(p);
    if (pp < 1) throw PreconditionError("compute_Tb_basic: p must be positive");
    std::vector<Segment> out;
    std::vector<std::vector<std::uint32_t>> b_end(n), c_end(n);
    for (std::size_t r = 0; r < n; ++r) {
        b_end[r] = run_ends(n, [&](std::size_t j) { return ap.b_tilde(r, j).raw(); });
        c_end[r] = run_ends(n, [&](std::size_t j) { return ap.c_tilde(r, j).raw(); });
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const ExtInt aik = ap.a_tilde(i, k);
            if (aik.is_inf()) continue;
            for (std::size_t j = 0; j < n;) {
                const std::size_t e = std::min(b_end[k][j], c_end[i][j]);
                const std::int64_t v = aik.raw() + ap.b_tilde(k, j).raw() - ap.c_tilde(i, j).raw() - b;
                if (v != 0 && floor_mod(v, pp) == 0)
                    out.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(k),
                                   static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(e)});
                j = e + 1;
            }
        }
    return out;
}

SquareMatrix basic_monotone_minplus(const SquareMatrix& a, const SquareMatrix& b, std::mt19937_64& rng,
                                    const MmOptions& opts, RunMetadata* meta) {
    require_same_size(a, b, "basic_monotone_minplus");
    require_nonnegative(a, "basic_monotone_minplus");
    require_nonnegative(b, "basic_monotone_minplus");
    require_row_monotone(b, "basic_monotone_minplus");
    const std::size_t n = a.size();
    RunMetadata local;
    RunMetadata& md = meta ? *meta : local;
    if (n == 0) return {};
    if (n < opts.oracle_cutoff) {
        md.oracle_fallthrough = true;
        return minplus_oracle(a, b);
    }

    const Reduced norm = normalize_A_range(a, max_finite(b));
    const SquareMatrix& an = norm.matrix;
    const std::int64_t s = detail::scale_for(n, opts.alpha);
    md.scale = s;

    ApproxPair ap;
    {
        ScopedTimer t(&md.times.approx_ms);
        ap = make_approx_pair(an, b, s);
    }
    const std::uint64_t p = opts.fixed_prime ? *opts.fixed_prime
                                             : detail::draw_prime(n, opts.alpha, 1.0, 2.0, 2, rng, md.widenings);
    md.p = p;
    const auto pp = static_cast<std::int64_t>(p);

    SliceCounts counts;
    {
        ScopedTimer t(&md.times.polymul_ms);
        MonomialMatrix ma(n), mb(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                if (an(i, k).is_finite())
                    ma.set(i, k, an(i, k).raw() - s * ap.a_tilde(i, k).raw(), floor_mod(ap.a_tilde(i, k).raw(), pp));
                mb.set(i, k, b(i, k).raw() - s * ap.b_tilde(i, k).raw(), floor_mod(ap.b_tilde(i, k).raw(), pp));
            }
        SliceQuery q;
        q.base.resize(n * n);
        for (std::size_t t = 0; t < n * n; ++t)
            q.base[t] = ap.c_tilde.data()[t].is_inf() ? kNoSlice : ap.c_tilde.data()[t].raw();
        q.b_lo = kBasicBMin;
        q.b_hi = kBasicBMax;
        q.x_lo = 0;
        q.x_width = 2 * s - 1;
        q.modulus = pp;
        counts = windowed_product(ma, mb, q, opts.backend);
    }

    SquareMatrix c(n, ExtInt::inf());
    {
        ScopedTimer t(&md.times.subtract_ms);
        const std::int64_t xw = counts.x_width, bc = counts.b_count;
        for (std::int64_t bb = kBasicBMin; bb <= kBasicBMax; ++bb) {
            for (const Segment& g : compute_Tb_basic(ap, p, bb)) {
                const std::size_t i = g.r, k = g.s;
                const std::int64_t xa = an(i, k).raw() - s * ap.a_tilde(i, k).raw();
                for (std::size_t j = g.lo; j <= g.hi; ++j) {
                    const std::int64_t x = xa + b(k, j).raw() - s * ap.b_tilde(k, j).raw();
                    counts.counts[static_cast<std::size_t>(((i * n + j) * bc + (bb - kBasicBMin)) * xw + x)] -= 1;
                }
                md.sum_T_segments += g.length();
            }
        }
        for (std::size_t o = 0; o < n * n; ++o) {
            const ExtInt ct = ap.c_tilde.data()[o];
            if (ct.is_inf()) continue;
            ExtInt best = ExtInt::inf();
            for (std::int64_t bi = 0; bi < bc; ++bi)
                for (std::int64_t x = 0; x < xw; ++x) {
                    const std::int32_t v = counts.at(o, bi, x);
                    if (v < 0) throw InvariantError("basic_monotone_minplus: negative count after subtraction");
                    if (v > 0) {
                        best = min(best, ExtInt(s * (ct.raw() + bi + kBasicBMin) + x));
                        break;
                    }
                }
            if (best.is_inf()) throw InvariantError("basic_monotone_minplus: no witness slice for a finite entry");
            c.data()[o] = best;
        }
    }
    return norm.undo.undo(c);
}

// ============================================================ recursive

SquareMatrix level_matrix(const SquareMatrix& m, std::uint64_t p, int l) {
    if (l < 0 || l > 62) throw PreconditionError("level_matrix: level out of range");
    const auto pp = static_cast<std::int64_t>(p);
    SquareMatrix out(m.size());
    for (std::size_t t = 0; t < out.data().size(); ++t) {
        const ExtInt v = m.data()[t];
        out.data()[t] = v.is_inf() ? v : ExtInt(floor_mod(v.raw(), pp) >> l);
    }
    return out;
}

int level_count(std::uint64_t p) { return static_cast<int>(std::bit_width(p)); }

StarTriple star_product(const SquareMatrix& a, const SquareMatrix& b, std::uint64_t p) {
    require_same_size(a, b, "star_product");
    const auto pp = static_cast<std::int64_t>(p);
    StarTriple st{SquareMatrix(a.size()), SquareMatrix(b.size()), {}};
    for (std::size_t t = 0; t < a.data().size(); ++t) {
        const ExtInt va = a.data()[t], vb = b.data()[t];
        st.a_star.data()[t] = va.is_inf() ? va : ExtInt(floor_div(va.raw(), pp));
        st.b_star.data()[t] = vb.is_inf() ? vb : ExtInt(floor_div(vb.raw(), pp));
    }
    st.c_star = approx_minplus_compressed(st.a_star, st.b_star);
    return st;
}

TripleSets init_top_level(const SquareMatrix& a, const StarTriple& star) {
    const std::size_t n = a.size();
    TripleSets ts;
    ts.kind = SegmentKind::row_j;
    auto& out = ts.bucket(0);
    std::vector<std::vector<std::uint32_t>> b_end(n), c_end(n);
    for (std::size_t r = 0; r < n; ++r) {
        b_end[r] = run_ends(n, [&](std::size_t j) { return star.b_star(r, j).raw(); });
        c_end[r] = run_ends(n, [&](std::size_t j) { return star.c_star(r, j).raw(); });
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a(i, k).is_inf()) continue;
            const std::int64_t as = star.a_star(i, k).raw();
            for (std::size_t j = 0; j < n;) {
                const std::size_t e = std::min(b_end[k][j], c_end[i][j]);
                if (ExtInt(as + star.b_star(k, j).raw()) != star.c_star(i, j))
                    out.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(k),
                                   static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(e)});
                j = e + 1;
            }
        }
    return ts;
}

namespace {

// Level products and the counts left after removing T^(l+1).
struct LevelCounts {
    std::vector<std::int64_t> amod, bmod;
    SliceCounts counts;
};

LevelCounts level_counts(const LevelInputs& in, int l, const SquareMatrix& c_next, ProductBackend backend) {
    const std::size_t n = in.a.size();
    LevelCounts lc{residues(in.a, in.p), residues(in.b, in.p), {}};
    const MonomialMatrix ma = level_encoding(lc.amod, n, l), mb = level_encoding(lc.bmod, n, l);
    SliceQuery q;
    q.base.resize(n * n);
    for (std::size_t t = 0; t < n * n; ++t) q.base[t] = c_next.data()[t].is_inf() ? kNoSlice : c_next.data()[t].raw();
    q.b_lo = kLevelBMin;
    q.b_hi = kLevelBMax;
    q.x_lo = 0;
    q.x_width = kXWidth;
    lc.counts = windowed_product(ma, mb, q, backend);
    return lc;
}

SquareMatrix choose_level(const std::vector<std::int32_t>& counts, const SquareMatrix& c_next,
                          const SquareMatrix& c_star) {
    const std::size_t n = c_next.size();
    SquareMatrix c(n, ExtInt::inf());
    for (std::size_t o = 0; o < n * n; ++o) {
        if (c_star.data()[o].is_inf()) continue;
        const ExtInt best = detail::pick_level_candidate(counts.data() + o * kSlots, c_next.data()[o].raw(),
                                                         static_cast<int>(kLevelBuckets), kXWidth, kLevelBMin);
        if (best.is_inf()) throw InvariantError("extract_level: no candidate for a finite entry");
        c.data()[o] = best;
    }
    return c;
}

} // namespace

SquareMatrix extract_level(const LevelInputs& in, int l, const SquareMatrix& c_next, const TripleSets& t_next,
                           ProductBackend backend, std::size_t* clamps) {
    const std::size_t n = in.a.size();
    LevelCounts lc = level_counts(in, l, c_next, backend);
    const auto& bmod = lc.bmod;

    // Difference arrays along j: D[i][j][slot].
    const std::size_t row_stride = (n + 1) * kSlots;
    std::vector<std::int32_t> diff = detail::take_i32(n * row_stride);
    for (std::int64_t bb = kLevelBMin; bb <= kLevelBMax; ++bb) {
        const std::size_t bslot = static_cast<std::size_t>(bb - kLevelBMin) * kXWidth;
        for (const Segment& g : t_next.bucket(bb)) {
            const std::size_t i = g.r, k = g.s;
            const std::int64_t xa = (lc.amod[i * n + k] >> l) & 1;
            const std::size_t jb = first_true(g.lo, g.hi, [&](std::size_t j) { return ((bmod[k * n + j] >> l) & 1) != 0; });
            std::int32_t* d = diff.data() + i * row_stride + bslot;
            d[g.lo * kSlots + xa] += 1;
            d[jb * kSlots + xa] -= 1;
            d[jb * kSlots + xa + 1] += 1;
            d[(g.hi + 1) * kSlots + xa + 1] -= 1;
        }
    }
    std::vector<std::int32_t> acc(kSlots);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(acc.begin(), acc.end(), 0);
        for (std::size_t j = 0; j < n; ++j) {
            const std::int32_t* d = diff.data() + i * row_stride + j * kSlots;
            std::int32_t* c = lc.counts.counts.data() + (i * n + j) * kSlots;
            for (int s = 0; s < kSlots; ++s) {
                acc[s] += d[s];
                c[s] -= acc[s];
            }
        }
    }
    detail::recycle_i32(std::move(diff));

    SquareMatrix c = choose_level(lc.counts.counts, c_next, in.star.c_star);
    detail::recycle_i32(std::move(lc.counts.counts));
    // Within a run of equal C*, C^(l) must be non-decreasing.
    std::size_t fixed = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 1; j < n; ++j) {
            if (in.star.c_star(i, j).is_inf() || in.star.c_star(i, j) != in.star.c_star(i, j - 1)) continue;
            if (c(i, j) < c(i, j - 1)) {
                c(i, j) = c(i, j - 1);
                ++fixed;
            }
        }
    if (clamps) *clamps += fixed;
    return c;
}

TripleSets refine_segments(const LevelInputs& in, int l, const TripleSets& t_next, const SquareMatrix& c_level) {
    const std::size_t n = in.a.size();
    const std::vector<std::int64_t> amod = residues(in.a, in.p), bmod = residues(in.b, in.p);
    TripleSets out;
    out.kind = SegmentKind::row_j;
    out.level = l;
    for (auto& bucket : out.buckets) bucket.reserve(t_next.segment_count() / kLevelBuckets);
    for (const auto& bucket : t_next.buckets)
        for (const Segment& g : bucket) {
            const std::size_t i = g.r, k = g.s;
            const std::int64_t al = amod[i * n + k] >> l;
            const std::int64_t* brow = bmod.data() + k * n;
            const ExtInt* crow = c_level.data().data() + i * n;
            const std::size_t jb = first_true(g.lo, g.hi, [&](std::size_t j) { return ((brow[j] >> l) & 1) != 0; });
            const std::size_t cuts[3] = {g.lo, jb, static_cast<std::size_t>(g.hi) + 1};
            for (int piece = 0; piece < 2; ++piece) {
                const std::size_t lo = cuts[piece], hi_excl = cuts[piece + 1];
                if (lo >= hi_excl) continue;
                const std::int64_t bl = brow[lo] >> l;
                // C^(l) is non-decreasing here; split it into value runs.
                for (std::size_t j = lo; j < hi_excl;) {
                    const ExtInt cv = crow[j];
                    const std::size_t e = first_true(j, hi_excl - 1, [&](std::size_t t) { return crow[t] != cv; });
                    const std::int64_t bb = al + bl - cv.raw();
                    if (bb >= kLevelBMin && bb <= kLevelBMax)
                        out.bucket(bb).push_back({g.r, g.s, static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(e - 1)});
                    j = e;
                }
            }
        }
    return out;
}

std::optional<SquareMatrix> minplus_residue_instance(const SquareMatrix& a, const SquareMatrix& b, std::uint64_t p,
                                                     const MmOptions& opts, RunMetadata* meta,
                                                     const LevelObserver& observer, int part_a, int part_b) {
    require_same_size(a, b, "minplus_residue_instance");
    require_row_monotone(b, "minplus_residue_instance");
    check_residue_assumption(a, b, p, "minplus_residue_instance");
    const std::size_t n = a.size();
    if (n == 0) return SquareMatrix{};
    RunMetadata local;
    RunMetadata& md = meta ? *meta : local;
    const double limit = detail::guard_limit(n, 3.0 - opts.alpha, opts.guard);

    StarTriple star;
    TripleSets t;
    {
        ScopedTimer tm(&md.times.approx_ms);
        star = star_product(a, b, p);
        t = init_top_level(a, star);
    }
    const int h = level_count(p);
    md.h = h;
    t.level = h;
    SquareMatrix c(n, ExtInt::inf());
    for (std::size_t o = 0; o < n * n; ++o)
        if (star.c_star.data()[o].is_finite()) c.data()[o] = ExtInt(0);
    const LevelInputs in{a, b, star, p};
    auto report = [&](int l) {
        add_level_stat(&md, l, t.segment_count());
        if (observer) observer(LevelView{part_a, part_b, p, h, l, a, b, star, c, t});
    };
    if (static_cast<double>(t.segment_count()) > limit) return std::nullopt;
    report(h);

    for (int l = h - 1; l >= 0; --l) {
        SquareMatrix next;
        {
            ScopedTimer tm(&md.times.polymul_ms);
            next = extract_level(in, l, c, t, opts.backend, &md.clamps);
        }
        {
            ScopedTimer tm(&md.times.subtract_ms);
            t = refine_segments(in, l, t, next);
        }
        c = std::move(next);
        if (static_cast<double>(t.segment_count()) > limit) return std::nullopt;
        report(l);
    }
    return reconstruct_from_parts(star.c_star, c, static_cast<std::int64_t>(p));
}

namespace {

// Shared driver: draw p, split, solve the nine parts, restart on guard.
template <class Split, class Solve>
SquareMatrix run_split(std::size_t n, std::mt19937_64& rng, const MmOptions& opts, RunMetadata& md, Split split,
                       Solve solve) {
    for (int attempt = 0;; ++attempt) {
        MmOptions o = opts;
        // The last attempt runs unguarded so the result is always produced.
        if (attempt >= opts.max_restarts) o.guard = std::numeric_limits<double>::infinity();
        const std::uint64_t p = opts.fixed_prime ? *opts.fixed_prime
                                                 : detail::draw_prime(n, opts.alpha, 40.0, 80.0, 7, rng, md.widenings);
        md.p = p;
        md.level_segments.clear();
        md.sum_T_segments = 0;
        const ResidueSplit parts = split(p);
        std::array<std::array<SquareMatrix, 3>, 3> products;
        bool blown = false;
        for (int x = 0; x < 3 && !blown; ++x)
            for (int y = 0; y < 3 && !blown; ++y) {
                auto r = solve(parts.a_parts[x], parts.b_parts[y], p, o, x, y);
                if (!r) blown = true;
                else products[x][y] = std::move(*r);
            }
        if (!blown) return parts.recombine(products);
        ++md.restarts;
    }
}

} // namespace

SquareMatrix recursive_monotone_minplus(const SquareMatrix& a, const SquareMatrix& b, std::mt19937_64& rng,
                                        const MmOptions& opts, RunMetadata* meta, const LevelObserver& observer) {
    require_same_size(a, b, "recursive_monotone_minplus");
    require_nonnegative(a, "recursive_monotone_minplus");
    require_nonnegative(b, "recursive_monotone_minplus");
    require_row_monotone(b, "recursive_monotone_minplus");
    const std::size_t n = a.size();
    RunMetadata local;
    RunMetadata& md = meta ? *meta : local;
    if (n == 0) return {};
    if (n < opts.oracle_cutoff) {
        md.oracle_fallthrough = true;
        return minplus_oracle(a, b);
    }
    const Reduced norm = normalize_A_range(a, max_finite(b));
    const SquareMatrix c = run_split(
        n, rng, opts, md, [&](std::uint64_t p) { return split_by_residue(norm.matrix, b, static_cast<std::int64_t>(p)); },
        [&](const SquareMatrix& pa, const SquareMatrix& pb, std::uint64_t p, const MmOptions& o, int x, int y) {
            return minplus_residue_instance(pa, pb, p, o, &md, observer, x, y);
        });
    return norm.undo.undo(c);
}

// ====================================================== column-monotone

namespace {

// Runs over k of row i of A (stored row-major) and of column j of B (stored
// transposed), +inf runs included.
struct ColumnRuns {
    std::vector<std::uint32_t> a_end; // [i * n + k]
    std::vector<std::uint32_t> b_end; // [j * n + k]
};

ColumnRuns column_runs(const SquareMatrix& a_star, const SquareMatrix& b_star) {
    const std::size_t n = a_star.size();
    ColumnRuns r{std::vector<std::uint32_t>(n * n), std::vector<std::uint32_t>(n * n)};
    for (std::size_t i = 0; i < n; ++i) {
        const auto e = run_ends(n, [&](std::size_t k) { return a_star(i, k).raw(); });
        std::copy(e.begin(), e.end(), r.a_end.begin() + static_cast<std::ptrdiff_t>(i * n));
    }
    for (std::size_t j = 0; j < n; ++j) {
        const auto e = run_ends(n, [&](std::size_t k) { return b_star(k, j).raw(); });
        std::copy(e.begin(), e.end(), r.b_end.begin() + static_cast<std::ptrdiff_t>(j * n));
    }
    return r;
}

// Calls f(k0, k1) for every maximal piece where both runs are constant and finite.
template <class F>
void merge_pieces(const SquareMatrix& a_star, const SquareMatrix& b_star, const ColumnRuns& runs, std::size_t i,
                  std::size_t j, F f) {
    const std::size_t n = a_star.size();
    for (std::size_t k = 0; k < n;) {
        const std::size_t e = std::min(runs.a_end[i * n + k], runs.b_end[j * n + k]);
        if (a_star(i, k).is_finite() && b_star(k, j).is_finite()) f(k, e);
        k = e + 1;
    }
}

} // namespace

SquareMatrix star_product_columns(const SquareMatrix& a_star, const SquareMatrix& b_star) {
    require_same_size(a_star, b_star, "star_product_columns");
    const std::size_t n = a_star.size();
    const ColumnRuns runs = column_runs(a_star, b_star);
    SquareMatrix c(n, ExtInt::inf());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            ExtInt best = ExtInt::inf();
            merge_pieces(a_star, b_star, runs, i, j,
                         [&](std::size_t k, std::size_t) { best = min(best, a_star(i, k) + b_star(k, j)); });
            c(i, j) = best;
        }
    return c;
}

std::optional<SquareMatrix> minplus_residue_instance_columns(const SquareMatrix& a, const SquareMatrix& b,
                                                             std::uint64_t p, const MmOptions& opts,
                                                             RunMetadata* meta, const LevelObserver& observer,
                                                             int part_a, int part_b) {
    require_same_size(a, b, "minplus_residue_instance_columns");
    check_residue_assumption(a, b, p, "minplus_residue_instance_columns");
    const std::size_t n = a.size();
    // Finite entries: rows of A non-increasing, columns of B non-decreasing.
    for (std::size_t i = 0; i < n; ++i) {
        ExtInt last_a = ExtInt::inf(), last_b = ExtInt(std::numeric_limits<std::int64_t>::min());
        for (std::size_t k = 0; k < n; ++k) {
            if (a(i, k).is_finite()) {
                if (a(i, k) > last_a) throw PreconditionError("minplus_residue_instance_columns: A row increases");
                last_a = a(i, k);
            }
            if (b(k, i).is_finite()) {
                if (b(k, i) < last_b) throw PreconditionError("minplus_residue_instance_columns: B column decreases");
                last_b = b(k, i);
            }
        }
    }
    if (n == 0) return SquareMatrix{};
    RunMetadata local;
    RunMetadata& md = meta ? *meta : local;
    const double limit = detail::guard_limit(n, 3.0 - opts.alpha, opts.guard);
    const auto pp = static_cast<std::int64_t>(p);

    StarTriple star;
    ColumnRuns runs;
    TripleSets t;
    t.kind = SegmentKind::col_k;
    {
        ScopedTimer tm(&md.times.approx_ms);
        star.a_star = SquareMatrix(n);
        star.b_star = SquareMatrix(n);
        for (std::size_t o = 0; o < n * n; ++o) {
            const ExtInt va = a.data()[o], vb = b.data()[o];
            star.a_star.data()[o] = va.is_inf() ? va : ExtInt(floor_div(va.raw(), pp));
            star.b_star.data()[o] = vb.is_inf() ? vb : ExtInt(floor_div(vb.raw(), pp));
        }
        star.c_star = star_product_columns(star.a_star, star.b_star);
        runs = column_runs(star.a_star, star.b_star);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const ExtInt cs = star.c_star(i, j);
                if (cs.is_inf()) continue;
                merge_pieces(star.a_star, star.b_star, runs, i, j, [&](std::size_t k0, std::size_t k1) {
                    if (star.a_star(i, k0) + star.b_star(k0, j) != cs)
                        t.bucket(0).push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                                               static_cast<std::uint32_t>(k0), static_cast<std::uint32_t>(k1)});
                });
            }
    }
    const int h = level_count(p);
    md.h = h;
    t.level = h;
    SquareMatrix c(n, ExtInt::inf());
    for (std::size_t o = 0; o < n * n; ++o)
        if (star.c_star.data()[o].is_finite()) c.data()[o] = ExtInt(0);
    auto report = [&](int l) {
        add_level_stat(&md, l, t.segment_count());
        if (observer) observer(LevelView{part_a, part_b, p, h, l, a, b, star, c, t});
    };
    if (static_cast<double>(t.segment_count()) > limit) return std::nullopt;
    report(h);

    const LevelInputs in{a, b, star, p};
    for (int l = h - 1; l >= 0; --l) {
        SquareMatrix next;
        TripleSets refined;
        refined.kind = SegmentKind::col_k;
        refined.level = l;
        LevelCounts lc;
        {
            ScopedTimer tm(&md.times.polymul_ms);
            lc = level_counts(in, l, c, opts.backend);
        }
        {
            const auto& amod = lc.amod;
            const auto& bmod = lc.bmod;
            // Breakpoints of a segment: bit l of A goes 1 -> 0 along k, bit l of B goes 0 -> 1.
            auto pieces = [&](const Segment& g, auto&& f) {
                const std::size_t i = g.r, j = g.s;
                const std::size_t ka = first_true(g.lo, g.hi, [&](std::size_t k) { return ((amod[i * n + k] >> l) & 1) == 0; });
                const std::size_t kb = first_true(g.lo, g.hi, [&](std::size_t k) { return ((bmod[k * n + j] >> l) & 1) != 0; });
                const std::size_t lo = g.lo, end = static_cast<std::size_t>(g.hi) + 1;
                const std::size_t m1 = std::min(ka, kb), m2 = std::max(ka, kb);
                if (lo < m1) f(lo, m1 - 1);
                if (m1 < m2) f(m1, m2 - 1);
                if (m2 < end) f(m2, end - 1);
            };
            ScopedTimer ts(&md.times.subtract_ms);
            {
                for (std::int64_t bb = kLevelBMin; bb <= kLevelBMax; ++bb)
                    for (const Segment& g : t.bucket(bb)) {
                        const std::size_t i = g.r, j = g.s;
                        pieces(g, [&](std::size_t k0, std::size_t k1) {
                            const std::int64_t x = ((amod[i * n + k0] >> l) & 1) + ((bmod[k0 * n + j] >> l) & 1);
                            lc.counts.counts[(i * n + j) * kSlots + static_cast<std::size_t>(bb - kLevelBMin) * kXWidth +
                                             static_cast<std::size_t>(x)] -= static_cast<std::int32_t>(k1 - k0 + 1);
                        });
                    }
                next = choose_level(lc.counts.counts, c, star.c_star);
                detail::recycle_i32(std::move(lc.counts.counts));
                for (const auto& bucket : t.buckets)
                    for (const Segment& g : bucket) {
                        const std::size_t i = g.r, j = g.s;
                        pieces(g, [&](std::size_t k0, std::size_t k1) {
                            const std::int64_t bb = (amod[i * n + k0] >> l) + (bmod[k0 * n + j] >> l) - next(i, j).raw();
                            if (bb >= kLevelBMin && bb <= kLevelBMax)
                                refined.bucket(bb).push_back(
                                    {g.r, g.s, static_cast<std::uint32_t>(k0), static_cast<std::uint32_t>(k1)});
                        });
                    }
            }
        }
        t = std::move(refined);
        c = std::move(next);
        if (static_cast<double>(t.segment_count()) > limit) return std::nullopt;
        report(l);
    }
    return reconstruct_from_parts(star.c_star, c, pp);
}

SquareMatrix column_monotone_minplus(const SquareMatrix& a, const SquareMatrix& b, std::mt19937_64& rng,
                                     const MmOptions& opts, RunMetadata* meta, const LevelObserver& observer) {
    require_same_size(a, b, "column_monotone_minplus");
    require_nonnegative(a, "column_monotone_minplus");
    require_nonnegative(b, "column_monotone_minplus");
    require_column_monotone(b, "column_monotone_minplus");
    const std::size_t n = a.size();
    RunMetadata local;
    RunMetadata& md = meta ? *meta : local;
    if (n == 0) return {};
    if (n < opts.oracle_cutoff) {
        md.oracle_fallthrough = true;
        return minplus_oracle(a, b);
    }
    const Reduced norm = normalize_A_range(make_rows_nonincreasing(a), max_finite(b));
    const SquareMatrix c = run_split(
        n, rng, opts, md,
        [&](std::uint64_t p) { return split_by_residue_fill_inf(norm.matrix, b, static_cast<std::int64_t>(p)); },
        [&](const SquareMatrix& pa, const SquareMatrix& pb, std::uint64_t p, const MmOptions& o, int x, int y) {
            return minplus_residue_instance_columns(pa, pb, p, o, &md, observer, x, y);
        });
    return norm.undo.undo(c);
}

} // namespace mpm
