// SPDX-License-Identifier: Apache-2.0
#include "mpm/monotone_conv.hpp"

#include <algorithm>
#include <array>
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

namespace {

constexpr int kXWidth = 3;
constexpr int kSlots = static_cast<int>(kLevelBuckets) * kXWidth;

struct Run {
    std::size_t lo, hi;
    std::int64_t value;
};

// Maximal constant runs with finite value.
std::vector<Run> finite_runs(const Seq& s) {
    std::vector<Run> out;
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n;) {
        std::size_t e = i;
        while (e + 1 < n && s[e + 1] == s[i]) ++e;
        if (s[i].is_finite()) out.push_back({i, e, s[i].raw()});
        i = e + 1;
    }
    return out;
}

void require_same_length(const Seq& a, const Seq& b, const char* who) {
    if (a.size() != b.size()) throw DimensionError(std::string(who) + ": length mismatch");
}

void require_monotone_input(const Seq& s, const char* who) {
    check_magnitude(s);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i].is_inf()) throw PreconditionError(std::string(who) + ": entries must be finite");
        if (s[i].raw() < 0) throw PreconditionError(std::string(who) + ": negative entry");
        if (i > 0 && s[i - 1] > s[i]) throw PreconditionError(std::string(who) + ": sequence is not non-decreasing");
    }
}

void add_level_stat(RunMetadata& md, int l, std::size_t segments) {
    if (md.level_segments.size() <= static_cast<std::size_t>(l)) md.level_segments.resize(l + 1, 0);
    md.level_segments[l] += segments;
    md.sum_T_segments += segments;
}

std::vector<std::int64_t> residues(const Seq& s, std::uint64_t p) {
    const auto pp = static_cast<std::int64_t>(p);
    std::vector<std::int64_t> r(s.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = s[i].is_inf() ? -1 : floor_mod(s[i].raw(), pp);
    return r;
}

Seq star_of(const Seq& s, std::int64_t p) {
    Seq out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i].is_inf() ? s[i] : ExtInt(floor_div(s[i].raw(), p));
    return out;
}

} // namespace

// ================================================================ basic

Seq approx_conv(const Seq& a_tilde, const Seq& b_tilde) {
    require_same_length(a_tilde, b_tilde, "approx_conv");
    const std::size_t n = a_tilde.size();
    if (n == 0) return {};
    RangeChminTree tree(2 * n - 1, ExtInt::inf());
    const auto ra = finite_runs(a_tilde), rb = finite_runs(b_tilde);
    for (const Run& x : ra)
        for (const Run& y : rb) tree.range_chmin(x.lo + y.lo + 1, x.hi + y.hi + 1, ExtInt(x.value + y.value));
    return Seq(tree.snapshot());
}

ConvApprox make_conv_approx(const Seq& a, const Seq& b, std::int64_t scale) {
    require_same_length(a, b, "make_conv_approx");
    if (scale < 1) throw PreconditionError("make_conv_approx: scale must be positive");
    ConvApprox ap{star_of(a, scale), star_of(b, scale), {}, scale};
    ap.c_tilde = approx_conv(ap.a_tilde, ap.b_tilde);
    return ap;
}

std::vector<Segment> compute_Tb_conv(const ConvApprox& ap, std::uint64_t p, std::int64_t b) {
    const auto pp = static_cast<std::int64_t>(p);
    if (pp < 1) throw PreconditionError("compute_Tb_conv: p must be positive");
    const std::size_t n = ap.a_tilde.size();
    std::vector<Segment> out;
    if (n == 0) return out;
    const Seq& c = ap.c_tilde;
    for (std::size_t t = 0; t < c.size(); ++t)
        if (c[t].is_inf() || (t > 0 && c[t] < c[t - 1]))
            throw PreconditionError("compute_Tb_conv: needs finite non-decreasing scaled inputs");

    // Output indices grouped by residue of C~, each list increasing.
    std::vector<std::vector<std::uint32_t>> by_res(p);
    for (std::size_t t = 0; t < c.size(); ++t) by_res[floor_mod(c[t].raw(), pp)].push_back(static_cast<std::uint32_t>(t));
    const std::vector<std::int64_t> craw = c.raw();

    for (const Run& x : finite_runs(ap.a_tilde))
        for (const Run& y : finite_runs(ap.b_tilde)) {
            const std::int64_t target = x.value + y.value - b; // C~_t must match this mod p but not exactly
            const std::size_t klo = x.lo + y.lo, khi = x.hi + y.hi;
            // C~ is non-decreasing, so the exact matches form one block of t.
            const auto eq_lo = static_cast<std::size_t>(std::lower_bound(craw.begin(), craw.end(), target) - craw.begin());
            const auto eq_hi = static_cast<std::size_t>(std::upper_bound(craw.begin(), craw.end(), target) - craw.begin());
            const auto& list = by_res[floor_mod(target, pp)];
            auto emit = [&](std::size_t from, std::size_t to) { // t in [from, to)
                auto it = std::lower_bound(list.begin(), list.end(), from);
                for (; it != list.end() && *it < to; ++it) {
                    const std::size_t t = *it;
                    const std::size_t i0 = std::max(x.lo, t >= y.hi ? t - y.hi : 0);
                    const std::size_t i1 = std::min(x.hi, t - y.lo);
                    out.push_back({static_cast<std::uint32_t>(t), 0, static_cast<std::uint32_t>(i0),
                                   static_cast<std::uint32_t>(i1)});
                }
            };
            emit(klo, std::min(khi + 1, std::max(klo, eq_lo)));
            emit(std::max(klo, eq_hi), khi + 1);
        }
    return out;
}

Seq basic_monotone_conv(const Seq& a, const Seq& b, std::mt19937_64& rng, const ConvOptions& opts,
                        RunMetadata* meta) {
    require_same_length(a, b, "basic_monotone_conv");
    require_monotone_input(a, "basic_monotone_conv");
    require_monotone_input(b, "basic_monotone_conv");
    const std::size_t n = a.size();
    RunMetadata local;
    RunMetadata& md = meta ? *meta : local;
    if (n == 0) return {};
    if (n < opts.oracle_cutoff) {
        md.oracle_fallthrough = true;
        return minplus_conv_oracle(a, b);
    }

    const std::int64_t s = detail::scale_for(n, opts.alpha);
    md.scale = s;
    ConvApprox ap;
    {
        ScopedTimer t(&md.times.approx_ms);
        ap = make_conv_approx(a, b, s);
    }
    const std::uint64_t p =
        opts.fixed_prime ? *opts.fixed_prime : detail::draw_prime(n, opts.beta, 1.0, 2.0, 2, rng, md.widenings);
    md.p = p;
    const auto pp = static_cast<std::int64_t>(p);
    const std::size_t outs = 2 * n - 1;

    SliceCounts counts;
    {
        ScopedTimer t(&md.times.polymul_ms);
        MonomialSeq ma(n), mb(n);
        for (std::size_t i = 0; i < n; ++i) {
            ma.set(i, a[i].raw() - s * ap.a_tilde[i].raw(), floor_mod(ap.a_tilde[i].raw(), pp));
            mb.set(i, b[i].raw() - s * ap.b_tilde[i].raw(), floor_mod(ap.b_tilde[i].raw(), pp));
        }
        SliceQuery q;
        q.base.resize(outs);
        for (std::size_t t = 0; t < outs; ++t) q.base[t] = ap.c_tilde[t].raw();
        q.b_lo = kBasicBMin;
        q.b_hi = kBasicBMax;
        q.x_lo = 0;
        q.x_width = 2 * s - 1;
        q.modulus = pp;
        counts = windowed_conv(ma, mb, q, opts.backend);
    }

    Seq c(outs, ExtInt::inf());
    {
        ScopedTimer t(&md.times.subtract_ms);
        const std::int64_t xw = counts.x_width, bc = counts.b_count;
        for (std::int64_t bb = kBasicBMin; bb <= kBasicBMax; ++bb)
            for (const Segment& g : compute_Tb_conv(ap, p, bb)) {
                const std::size_t t = g.r;
                for (std::size_t i = g.lo; i <= g.hi; ++i) {
                    const std::size_t j = t - i;
                    const std::int64_t x = a[i].raw() - s * ap.a_tilde[i].raw() + b[j].raw() - s * ap.b_tilde[j].raw();
                    counts.counts[static_cast<std::size_t>((static_cast<std::int64_t>(t) * bc + (bb - kBasicBMin)) * xw + x)] -= 1;
                }
                md.sum_T_segments += g.length();
            }
        for (std::size_t t = 0; t < outs; ++t) {
            ExtInt best = ExtInt::inf();
            for (std::int64_t bi = 0; bi < bc; ++bi)
                for (std::int64_t x = 0; x < xw; ++x) {
                    const std::int32_t v = counts.at(t, bi, x);
                    if (v < 0) throw InvariantError("basic_monotone_conv: negative count after subtraction");
                    if (v > 0) {
                        best = min(best, ExtInt(s * (ap.c_tilde[t].raw() + bi + kBasicBMin) + x));
                        break;
                    }
                }
            if (best.is_inf()) throw InvariantError("basic_monotone_conv: no witness slice for an output");
            c[t] = best;
        }
        detail::recycle_i32(std::move(counts.counts));
    }
    return c;
}

// ============================================================ recursive

Seq level_seq(const Seq& s, std::uint64_t p, int l) {
    if (l < 0 || l > 62) throw PreconditionError("level_seq: level out of range");
    const auto pp = static_cast<std::int64_t>(p);
    Seq out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i].is_inf() ? s[i] : ExtInt(floor_mod(s[i].raw(), pp) >> l);
    return out;
}

ConvStar conv_star(const Seq& a, const Seq& b, std::uint64_t p) {
    require_same_length(a, b, "conv_star");
    const auto pp = static_cast<std::int64_t>(p);
    ConvStar st{star_of(a, pp), star_of(b, pp), {}};
    st.c_star = approx_conv(st.a_star, st.b_star);
    return st;
}

TripleSets conv_init_top_level(const Seq& a, const Seq& b, const ConvStar& star) {
    require_same_length(a, b, "conv_init_top_level");
    const std::size_t n = a.size();
    TripleSets ts;
    ts.kind = SegmentKind::conv_i;
    if (n == 0) return ts;
    auto& out = ts.bucket(0);
    const auto a_end = run_ends(n, [&](std::size_t i) { return star.a_star[i].raw(); });
    // First index of the B* run containing j.
    std::vector<std::uint32_t> b_start(n);
    for (std::size_t j = 0; j < n; ++j)
        b_start[j] = (j > 0 && star.b_star[j] == star.b_star[j - 1]) ? b_start[j - 1] : static_cast<std::uint32_t>(j);
    for (std::size_t t = 0; t < 2 * n - 1; ++t) {
        if (star.c_star[t].is_inf()) continue;
        const std::size_t ilo = t >= n ? t - (n - 1) : 0, ihi = std::min(t, n - 1);
        for (std::size_t i = ilo; i <= ihi;) {
            const std::size_t j = t - i;
            // Index i at which j leaves its B* run.
            const std::size_t b_stop = t - b_start[j];
            if (a[i].is_inf()) {
                i = a_end[i] + 1;
                continue;
            }
            if (b[j].is_inf()) {
                i = b_stop + 1;
                continue;
            }
            const std::size_t e = std::min({static_cast<std::size_t>(a_end[i]), b_stop, ihi});
            if (star.a_star[i] + star.b_star[j] != star.c_star[t])
                out.push_back({static_cast<std::uint32_t>(t), 0, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(e)});
            i = e + 1;
        }
    }
    return ts;
}

namespace {

// Splits a level-(l+1) segment into the pieces over which bit l of A and of
// B stays constant and calls f(i0, i1) for each.
template <class F>
void conv_pieces(const std::vector<std::int64_t>& amod, const std::vector<std::int64_t>& bmod, int l,
                 const Segment& g, F&& f) {
    const std::size_t t = g.r;
    // Along i, A's bit rises 0 -> 1 and B's bit (index t - i) falls 1 -> 0.
    const std::size_t ka = first_true(g.lo, g.hi, [&](std::size_t i) { return ((amod[i] >> l) & 1) != 0; });
    const std::size_t kb = first_true(g.lo, g.hi, [&](std::size_t i) { return ((bmod[t - i] >> l) & 1) == 0; });
    const std::size_t cuts[4] = {g.lo, std::min(ka, kb), std::max(ka, kb), static_cast<std::size_t>(g.hi) + 1};
    int pieces = 0;
    for (int q = 0; q < 3; ++q) {
        const std::size_t lo = cuts[q], hi = cuts[q + 1];
        if (lo >= hi) continue;
        if ((amod[lo] >> l) != (amod[hi - 1] >> l) || (bmod[t - lo] >> l) != (bmod[t - (hi - 1)] >> l))
            throw InvariantError("conv segment piece is not constant at the next level");
        ++pieces;
        f(lo, hi - 1);
    }
    if (pieces > 4) throw InvariantError("conv segment split into more than four pieces");
}

} // namespace

Seq conv_extract_level(const ConvLevelInputs& in, int l, const Seq& c_next, const TripleSets& t_next,
                       ProductBackend backend) {
    const std::size_t n = in.a.size();
    if (n == 0) return {};
    const std::size_t outs = 2 * n - 1;
    const auto amod = residues(in.a, in.p), bmod = residues(in.b, in.p);
    MonomialSeq ma(n), mb(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (amod[i] >= 0) ma.set(i, (amod[i] >> l) & 1, amod[i] >> (l + 1));
        if (bmod[i] >= 0) mb.set(i, (bmod[i] >> l) & 1, bmod[i] >> (l + 1));
    }
    SliceQuery q;
    q.base.resize(outs);
    for (std::size_t t = 0; t < outs; ++t) q.base[t] = c_next[t].is_inf() ? kNoSlice : c_next[t].raw();
    q.b_lo = kLevelBMin;
    q.b_hi = kLevelBMax;
    q.x_lo = 0;
    q.x_width = kXWidth;
    SliceCounts counts = windowed_conv(ma, mb, q, backend);

    for (std::int64_t bb = kLevelBMin; bb <= kLevelBMax; ++bb) {
        const std::size_t bslot = static_cast<std::size_t>(bb - kLevelBMin) * kXWidth;
        for (const Segment& g : t_next.bucket(bb)) {
            const std::size_t t = g.r;
            conv_pieces(amod, bmod, l, g, [&](std::size_t i0, std::size_t i1) {
                const std::int64_t x = ((amod[i0] >> l) & 1) + ((bmod[t - i0] >> l) & 1);
                counts.counts[t * kSlots + bslot + static_cast<std::size_t>(x)] -= static_cast<std::int32_t>(i1 - i0 + 1);
            });
        }
    }

    Seq c(outs, ExtInt::inf());
    for (std::size_t t = 0; t < outs; ++t) {
        if (in.star.c_star[t].is_inf()) continue;
        const ExtInt best = detail::pick_level_candidate(counts.counts.data() + t * kSlots, c_next[t].raw(),
                                                         static_cast<int>(kLevelBuckets), kXWidth, kLevelBMin);
        if (best.is_inf()) throw InvariantError("conv_extract_level: no candidate for a finite output");
        c[t] = best;
    }
    detail::recycle_i32(std::move(counts.counts));
    return c;
}

TripleSets conv_refine_segments(const ConvLevelInputs& in, int l, const TripleSets& t_next, const Seq& c_level) {
    const auto amod = residues(in.a, in.p), bmod = residues(in.b, in.p);
    TripleSets out;
    out.kind = SegmentKind::conv_i;
    out.level = l;
    for (const auto& bucket : t_next.buckets)
        for (const Segment& g : bucket) {
            const std::size_t t = g.r;
            const std::int64_t cl = c_level[t].raw();
            conv_pieces(amod, bmod, l, g, [&](std::size_t i0, std::size_t i1) {
                const std::int64_t bb = (amod[i0] >> l) + (bmod[t - i0] >> l) - cl;
                if (bb >= kLevelBMin && bb <= kLevelBMax)
                    out.bucket(bb).push_back({g.r, 0, static_cast<std::uint32_t>(i0), static_cast<std::uint32_t>(i1)});
            });
        }
    return out;
}

std::optional<Seq> conv_residue_instance(const Seq& a, const Seq& b, std::uint64_t p, const ConvOptions& opts,
                                         RunMetadata* meta, const ConvLevelObserver& observer, int part_a,
                                         int part_b) {
    require_same_length(a, b, "conv_residue_instance");
    const auto pp = static_cast<std::int64_t>(p);
    for (const Seq* s : {&a, &b}) {
        ExtInt last(std::numeric_limits<std::int64_t>::min());
        for (ExtInt v : s->data()) {
            if (v.is_inf()) continue;
            if (v.raw() < 0 || 3 * floor_mod(v.raw(), pp) >= pp)
                throw PreconditionError("conv_residue_instance: entry violates the residue assumption");
            if (v < last) throw PreconditionError("conv_residue_instance: finite entries must be non-decreasing");
            last = v;
        }
    }
    const std::size_t n = a.size();
    if (n == 0) return Seq{};
    RunMetadata local;
    RunMetadata& md = meta ? *meta : local;
    const double limit = detail::guard_limit(n, 2.0 - opts.alpha, opts.guard);

    ConvStar star;
    TripleSets t;
    {
        ScopedTimer tm(&md.times.approx_ms);
        star = conv_star(a, b, p);
        t = conv_init_top_level(a, b, star);
    }
    const int h = level_count(p);
    md.h = h;
    t.level = h;
    Seq c(2 * n - 1, ExtInt::inf());
    for (std::size_t o = 0; o < c.size(); ++o)
        if (star.c_star[o].is_finite()) c[o] = ExtInt(0);
    const ConvLevelInputs in{a, b, star, p};
    auto report = [&](int l) {
        add_level_stat(md, l, t.segment_count());
        if (observer) observer(ConvLevelView{part_a, part_b, p, h, l, a, b, star, c, t});
    };
    if (static_cast<double>(t.segment_count()) > limit) return std::nullopt;
    report(h);

    for (int l = h - 1; l >= 0; --l) {
        Seq next;
        {
            ScopedTimer tm(&md.times.polymul_ms);
            next = conv_extract_level(in, l, c, t, opts.backend);
        }
        {
            ScopedTimer tm(&md.times.subtract_ms);
            t = conv_refine_segments(in, l, t, next);
        }
        c = std::move(next);
        if (static_cast<double>(t.segment_count()) > limit) return std::nullopt;
        report(l);
    }
    return reconstruct_from_parts(star.c_star, c, pp);
}

Seq recursive_monotone_conv(const Seq& a, const Seq& b, std::mt19937_64& rng, const ConvOptions& opts,
                            RunMetadata* meta, const ConvLevelObserver& observer) {
    require_same_length(a, b, "recursive_monotone_conv");
    require_monotone_input(a, "recursive_monotone_conv");
    require_monotone_input(b, "recursive_monotone_conv");
    const std::size_t n = a.size();
    RunMetadata local;
    RunMetadata& md = meta ? *meta : local;
    if (n == 0) return {};
    if (n < opts.oracle_cutoff) {
        md.oracle_fallthrough = true;
        return minplus_conv_oracle(a, b);
    }
    for (int attempt = 0;; ++attempt) {
        ConvOptions o = opts;
        // The last attempt runs unguarded so the result is always produced.
        if (attempt >= opts.max_restarts) o.guard = std::numeric_limits<double>::infinity();
        const std::uint64_t p = opts.fixed_prime ? *opts.fixed_prime
                                                 : detail::draw_prime(n, opts.alpha, 40.0, 80.0, 7, rng, md.widenings);
        md.p = p;
        md.level_segments.clear();
        md.sum_T_segments = 0;
        const SeqResidueSplit parts = split_seq_by_residue(a, b, static_cast<std::int64_t>(p));
        std::array<std::array<Seq, 3>, 3> products;
        bool blown = false;
        for (int x = 0; x < 3 && !blown; ++x)
            for (int y = 0; y < 3 && !blown; ++y) {
                auto r = conv_residue_instance(parts.a_parts[x], parts.b_parts[y], p, o, &md, observer, x, y);
                if (!r) blown = true;
                else products[x][y] = std::move(*r);
            }
        if (!blown) return parts.recombine(products);
        ++md.restarts;
    }
}

} // namespace mpm
