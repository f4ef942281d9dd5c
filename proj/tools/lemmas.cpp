// SPDX-License-Identifier: Apache-2.0
#include "lemmas.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "mpm/brute.hpp"
#include "mpm/generators.hpp"
#include "mpm/monotone_conv.hpp"
#include "mpm/monotone_mm.hpp"
#include "mpm/oracle.hpp"

namespace mpm::driver {

namespace {

// Small primes keep many p-cycles inside tiny instances, so the star
// matrices and the T sets are far from trivial.
constexpr std::array<std::uint64_t, 6> kPrimes{7, 11, 13, 29, 61, 127};

enum class MmKind { row, column };

struct MmTrace {
    int part_a = -1, part_b = -1;
    std::uint64_t p = 0;
    int h = 0;
    SquareMatrix a, b;
    StarTriple star;
    std::vector<SquareMatrix> c; // by level
    std::vector<TripleSets> t;   // by level
    SquareMatrix exact;          // oracle product of the part
};

struct ConvTrace {
    int part_a = -1, part_b = -1;
    std::uint64_t p = 0;
    int h = 0;
    Seq a, b;
    ConvStar star;
    std::vector<Seq> c;
    std::vector<TripleSets> t;
    Seq exact;
};

struct MmCase {
    MmKind kind;
    std::size_t n;
    std::int64_t c;
    std::uint64_t p; // 0: sampled
};

struct ConvCase {
    std::size_t n;
    std::int64_t c;
    bool bends;
    std::uint64_t p;
};

std::int64_t lvl(ExtInt v, std::uint64_t p, int l) {
    return mpm::floor_mod(v.raw(), static_cast<std::int64_t>(p)) >> l;
}

std::int64_t floor_div_pos(std::int64_t a, std::int64_t m) { return mpm::floor_div(a, m); }

class Tally {
  public:
    explicit Tally(std::string name) { r_.name = std::move(name); }
    void check(bool ok, const std::string& what) {
        ++r_.checks;
        if (ok) return;
        if (r_.violations++ == 0) r_.first_violation = what;
    }
    void violation(std::size_t count, const std::string& what) {
        if (count == 0) return;
        if (r_.violations == 0) r_.first_violation = what;
        r_.violations += count;
    }
    SuiteResult done() { return std::move(r_); }

  private:
    SuiteResult r_;
};

template <class... T>
std::string describe(const T&... parts) {
    std::ostringstream os;
    ((os << parts), ...);
    return os.str();
}

std::vector<MmCase> mm_cases(std::size_t max_n) {
    std::vector<MmCase> out;
    for (MmKind kind : {MmKind::row, MmKind::column})
        for (std::size_t n : {4, 8, 12, 16, 24, 32})
            if (n <= max_n)
                for (std::int64_t c : {1, 3})
                    for (std::uint64_t p : {kPrimes[0], kPrimes[2], kPrimes[4], std::uint64_t{0}})
                        out.push_back({kind, n, c, p});
    return out;
}

std::vector<ConvCase> conv_cases(std::size_t max_n) {
    std::vector<ConvCase> out;
    for (std::size_t n : {4, 8, 16, 32, 64, 128})
        if (n <= max_n)
            for (std::int64_t c : {1, 4})
                for (bool bends : {false, true})
                    for (std::uint64_t p : {kPrimes[0], kPrimes[3], kPrimes[5], std::uint64_t{0}})
                        out.push_back({n, c, bends, p});
    return out;
}

std::vector<MmTrace> trace_mm(const MmCase& cs, std::mt19937_64& rng, std::size_t* clamps = nullptr) {
    const SquareMatrix a = gen_arbitrary(cs.n, cs.c, rng, 10);
    const SquareMatrix b =
        cs.kind == MmKind::row ? gen_row_monotone(cs.n, cs.c, rng) : gen_column_monotone(cs.n, cs.c, rng);
    MmOptions opts;
    opts.guard = std::numeric_limits<double>::infinity();
    if (cs.p) opts.fixed_prime = cs.p;
    std::array<std::optional<MmTrace>, 9> slots;
    auto observe = [&](const LevelView& v) {
        auto& slot = slots[static_cast<std::size_t>(v.part_a * 3 + v.part_b)];
        if (v.level == v.h) {
            slot.emplace();
            slot->part_a = v.part_a;
            slot->part_b = v.part_b;
            slot->p = v.p;
            slot->h = v.h;
            slot->a = v.a;
            slot->b = v.b;
            slot->star = v.star;
            slot->c.resize(static_cast<std::size_t>(v.h) + 1);
            slot->t.resize(static_cast<std::size_t>(v.h) + 1);
        }
        slot->c[static_cast<std::size_t>(v.level)] = v.c_level;
        slot->t[static_cast<std::size_t>(v.level)] = v.triples;
    };
    RunMetadata md;
    if (cs.kind == MmKind::row) recursive_monotone_minplus(a, b, rng, opts, &md, observe);
    else column_monotone_minplus(a, b, rng, opts, &md, observe);
    if (clamps) *clamps += md.clamps;
    std::vector<MmTrace> out;
    for (auto& s : slots)
        if (s && s->p == md.p) {
            s->exact = minplus_oracle(s->a, s->b);
            out.push_back(std::move(*s));
        }
    return out;
}

std::vector<ConvTrace> trace_conv(const ConvCase& cs, std::mt19937_64& rng) {
    const auto gen = [&] {
        return cs.bends ? gen_monotone_seq_bends(cs.n, cs.c, 4, rng) : gen_monotone_seq(cs.n, cs.c, rng);
    };
    const Seq a = gen();
    const Seq b = gen();
    ConvOptions opts;
    opts.guard = std::numeric_limits<double>::infinity();
    if (cs.p) opts.fixed_prime = cs.p;
    std::array<std::optional<ConvTrace>, 9> slots;
    auto observe = [&](const ConvLevelView& v) {
        auto& slot = slots[static_cast<std::size_t>(v.part_a * 3 + v.part_b)];
        if (v.level == v.h) {
            slot.emplace();
            slot->part_a = v.part_a;
            slot->part_b = v.part_b;
            slot->p = v.p;
            slot->h = v.h;
            slot->a = v.a;
            slot->b = v.b;
            slot->star = v.star;
            slot->c.resize(static_cast<std::size_t>(v.h) + 1);
            slot->t.resize(static_cast<std::size_t>(v.h) + 1);
        }
        slot->c[static_cast<std::size_t>(v.level)] = v.c_level;
        slot->t[static_cast<std::size_t>(v.level)] = v.triples;
    };
    RunMetadata md;
    recursive_monotone_conv(a, b, rng, opts, &md, observe);
    std::vector<ConvTrace> out;
    for (auto& s : slots)
        if (s && s->p == md.p) {
            s->exact = minplus_conv_oracle(s->a, s->b);
            out.push_back(std::move(*s));
        }
    return out;
}

// Visit every (i, k, j) where k attains the exact product of the part.
template <class F>
void for_each_witness(const MmTrace& tr, F f) {
    const std::size_t n = tr.a.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (tr.exact(i, j).is_inf()) continue;
            for (std::size_t k = 0; k < n; ++k)
                if (tr.a(i, k) + tr.b(k, j) == tr.exact(i, j)) f(i, k, j);
        }
}

template <class F>
void for_each_witness(const ConvTrace& tr, F f) {
    const std::size_t n = tr.a.size();
    for (std::size_t t = 0; t < tr.exact.size(); ++t) {
        if (tr.exact[t].is_inf()) continue;
        for (std::size_t i = t >= n ? t - (n - 1) : 0; i <= std::min(t, n - 1); ++i)
            if (tr.a[i] + tr.b[t - i] == tr.exact[t]) f(t, i);
    }
}

std::vector<IndexTriple> level_union(const TripleSets& ts) {
    std::vector<IndexTriple> all;
    for (std::int64_t b = kLevelBMin; b <= kLevelBMax; ++b) {
        auto part = expand_bucket(ts, b);
        all.insert(all.end(), part.begin(), part.end());
    }
    std::sort(all.begin(), all.end());
    return all;
}

} // namespace

SuiteResult suite_sandwich(std::uint64_t seed) {
    Tally tally("sandwich");
    std::mt19937_64 rng(seed);
    for (std::size_t n : {8, 16, 32, 64})
        for (std::int64_t s : {2, 3, 4, 7})
            for (int rep = 0; rep < 2; ++rep) {
                const SquareMatrix a = gen_arbitrary(n, 2, rng, 10);
                const SquareMatrix b = gen_row_monotone(n, 2, rng);
                const ApproxPair ap = make_approx_pair(a, b, s);
                const SquareMatrix c = minplus_oracle(a, b);
                const SquareMatrix ct = minplus_oracle(ap.a_tilde, ap.b_tilde);
                tally.check(ct == ap.c_tilde, describe("matrix C~ differs from oracle, n=", n, " s=", s));
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) {
                        if (c(i, j).is_inf()) continue;
                        for (std::size_t k = 0; k < n; ++k) {
                            if (a(i, k) + b(k, j) != c(i, j)) continue;
                            const std::int64_t d = (ap.a_tilde(i, k) + ap.b_tilde(k, j)).raw() - ct(i, j).raw();
                            tally.check(d >= 0 && d <= 2,
                                        describe("matrix n=", n, " s=", s, " (", i, ",", k, ",", j, ") gap ", d));
                        }
                    }
            }
    for (std::size_t n : {16, 64, 256, 1024})
        for (std::int64_t s : {2, 3, 5})
            for (int rep = 0; rep < 2; ++rep) {
                const Seq a = gen_monotone_seq(n, 3, rng);
                const Seq b = gen_monotone_seq_bends(n, 3, 3, rng);
                const ConvApprox ap = make_conv_approx(a, b, s);
                const Seq c = minplus_conv_oracle(a, b);
                const Seq ct = minplus_conv_oracle(ap.a_tilde, ap.b_tilde);
                tally.check(ct == ap.c_tilde, describe("sequence C~ differs from oracle, n=", n, " s=", s));
                for (std::size_t t = 0; t < c.size(); ++t)
                    for (std::size_t i = t >= n ? t - (n - 1) : 0; i <= std::min(t, n - 1); ++i) {
                        if (a[i] + b[t - i] != c[t]) continue;
                        const std::int64_t d = (ap.a_tilde[i] + ap.b_tilde[t - i]).raw() - ct[t].raw();
                        tally.check(d >= 0 && d <= 2, describe("sequence n=", n, " s=", s, " (", t, ",", i, ") gap ", d));
                    }
            }
    return tally.done();
}

SuiteResult suite_level_relation(std::uint64_t seed) {
    Tally tally("level-relation");
    std::mt19937_64 rng(seed);
    auto check = [&](ExtInt lo, ExtInt hi, int l, const char* what) {
        if (lo.is_inf() || hi.is_inf()) return;
        const std::int64_t d = lo.raw() - 2 * hi.raw();
        tally.check(d >= -7 && d <= 8, describe(what, " level ", l, " C^(l) - 2C^(l+1) = ", d));
    };
    for (const MmCase& cs : mm_cases(32))
        for (const MmTrace& tr : trace_mm(cs, rng))
            for (int l = 0; l < tr.h; ++l) {
                const auto& lo = tr.c[static_cast<std::size_t>(l)].data();
                const auto& hi = tr.c[static_cast<std::size_t>(l) + 1].data();
                for (std::size_t o = 0; o < lo.size(); ++o) check(lo[o], hi[o], l, "matrix");
            }
    for (const ConvCase& cs : conv_cases(128))
        for (const ConvTrace& tr : trace_conv(cs, rng))
            for (int l = 0; l < tr.h; ++l) {
                const Seq& lo = tr.c[static_cast<std::size_t>(l)];
                const Seq& hi = tr.c[static_cast<std::size_t>(l) + 1];
                for (std::size_t o = 0; o < lo.size(); ++o) check(lo[o], hi[o], l, "sequence");
            }
    return tally.done();
}

SuiteResult suite_witness_window(std::uint64_t seed) {
    Tally tally("witness-window");
    std::mt19937_64 rng(seed);
    for (const MmCase& cs : mm_cases(32))
        for (const MmTrace& tr : trace_mm(cs, rng))
            for_each_witness(tr, [&](std::size_t i, std::size_t k, std::size_t j) {
                for (int l = 0; l <= tr.h; ++l) {
                    const std::int64_t d = lvl(tr.a(i, k), tr.p, l) + lvl(tr.b(k, j), tr.p, l) -
                                           tr.c[static_cast<std::size_t>(l)](i, j).raw();
                    tally.check(d >= kLevelBMin && d <= kLevelBMax,
                                describe("matrix p=", tr.p, " level ", l, " (", i, ",", k, ",", j, ") offset ", d));
                }
            });
    for (const ConvCase& cs : conv_cases(128))
        for (const ConvTrace& tr : trace_conv(cs, rng))
            for_each_witness(tr, [&](std::size_t t, std::size_t i) {
                for (int l = 0; l <= tr.h; ++l) {
                    const std::int64_t d = lvl(tr.a[i], tr.p, l) + lvl(tr.b[t - i], tr.p, l) -
                                           tr.c[static_cast<std::size_t>(l)][t].raw();
                    tally.check(d >= kLevelBMin && d <= kLevelBMax,
                                describe("sequence p=", tr.p, " level ", l, " (", t, ",", i, ") offset ", d));
                }
            });
    return tally.done();
}

SuiteResult suite_nesting(std::uint64_t seed) {
    Tally tally("nesting");
    std::mt19937_64 rng(seed);
    auto nested = [&](const std::vector<TripleSets>& t, int h, const char* what) {
        for (int l = 0; l < h; ++l) {
            const auto inner = level_union(t[static_cast<std::size_t>(l)]);
            const auto outer = level_union(t[static_cast<std::size_t>(l) + 1]);
            for (const IndexTriple& e : inner)
                tally.check(std::binary_search(outer.begin(), outer.end(), e),
                            describe(what, " level ", l, " element (", e[0], ",", e[1], ",", e[2],
                                     ") missing one level up"));
        }
    };
    for (const MmCase& cs : mm_cases(24))
        for (const MmTrace& tr : trace_mm(cs, rng)) nested(tr.t, tr.h, "matrix");
    for (const ConvCase& cs : conv_cases(128))
        for (const ConvTrace& tr : trace_conv(cs, rng)) nested(tr.t, tr.h, "sequence");
    return tally.done();
}

SuiteResult suite_property_bounds(std::uint64_t seed) {
    Tally tally("property-bounds");
    std::mt19937_64 rng(seed);
    auto check = [&](ExtInt exact, ExtInt level, std::uint64_t p, int l, const char* what) {
        if (exact.is_inf()) return;
        const std::int64_t r = mpm::floor_mod(exact.raw(), static_cast<std::int64_t>(p));
        const std::int64_t w = std::int64_t{1} << l;
        const std::int64_t lo = floor_div_pos(r - 2 * (w - 1), w);
        const std::int64_t hi = floor_div_pos(r + 2 * (w - 1), w);
        tally.check(level.is_finite() && level.raw() >= lo && level.raw() <= hi,
                    describe(what, " p=", p, " level ", l, " C mod p=", r, " C^(l)=", level));
    };
    for (const MmCase& cs : mm_cases(32))
        for (const MmTrace& tr : trace_mm(cs, rng))
            for (int l = 0; l <= tr.h; ++l)
                for (std::size_t o = 0; o < tr.exact.data().size(); ++o)
                    check(tr.exact.data()[o], tr.c[static_cast<std::size_t>(l)].data()[o], tr.p, l, "matrix");
    for (const ConvCase& cs : conv_cases(128))
        for (const ConvTrace& tr : trace_conv(cs, rng))
            for (int l = 0; l <= tr.h; ++l)
                for (std::size_t o = 0; o < tr.exact.size(); ++o)
                    check(tr.exact[o], tr.c[static_cast<std::size_t>(l)][o], tr.p, l, "sequence");
    return tally.done();
}

SuiteResult suite_property_monotone(std::uint64_t seed) {
    Tally tally("property-monotone");
    std::mt19937_64 rng(seed);
    std::size_t clamps = 0;
    for (const MmCase& cs : mm_cases(32)) {
        if (cs.kind != MmKind::row) continue;
        for (const MmTrace& tr : trace_mm(cs, rng, &clamps)) {
            const std::size_t n = tr.a.size();
            for (int l = 0; l <= tr.h; ++l) {
                const SquareMatrix& c = tr.c[static_cast<std::size_t>(l)];
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j + 1 < n; ++j) {
                        const ExtInt s0 = tr.star.c_star(i, j), s1 = tr.star.c_star(i, j + 1);
                        if (s0.is_inf() || s0 != s1) continue;
                        tally.check(c(i, j) <= c(i, j + 1),
                                    describe("p=", tr.p, " level ", l, " row ", i, " columns ", j, ",", j + 1));
                    }
            }
        }
    }
    tally.violation(clamps, describe(clamps, " clamp repairs during extraction"));
    return tally.done();
}

SuiteResult suite_enumeration(std::uint64_t seed) {
    Tally tally("enumeration");
    std::mt19937_64 rng(seed);
    for (const MmCase& cs : mm_cases(16))
        for (const MmTrace& tr : trace_mm(cs, rng))
            for (int l = 0; l <= tr.h; ++l) {
                const LevelView v{tr.part_a, tr.part_b, tr.p, tr.h, l, tr.a, tr.b, tr.star,
                                  tr.c[static_cast<std::size_t>(l)], tr.t[static_cast<std::size_t>(l)]};
                for (std::int64_t b = kLevelBMin; b <= kLevelBMax; ++b)
                    tally.check(expand_bucket(v.triples, b) == brute_level_triples(v, b),
                                describe("matrix n=", cs.n, " p=", tr.p, " level ", l, " b=", b));
            }
    for (const ConvCase& cs : conv_cases(16))
        for (const ConvTrace& tr : trace_conv(cs, rng))
            for (int l = 0; l <= tr.h; ++l) {
                const ConvLevelView v{tr.part_a, tr.part_b, tr.p, tr.h, l, tr.a, tr.b, tr.star,
                                      tr.c[static_cast<std::size_t>(l)], tr.t[static_cast<std::size_t>(l)]};
                for (std::int64_t b = kLevelBMin; b <= kLevelBMax; ++b)
                    tally.check(expand_bucket(v.triples, b) == brute_level_pairs(v, b),
                                describe("sequence n=", cs.n, " p=", tr.p, " level ", l, " b=", b));
            }
    return tally.done();
}

std::vector<SuiteResult> run_all_suites(std::uint64_t seed) {
    return {suite_sandwich(seed),         suite_level_relation(seed + 1),    suite_witness_window(seed + 2),
            suite_nesting(seed + 3),      suite_property_bounds(seed + 4),   suite_property_monotone(seed + 5),
            suite_enumeration(seed + 6)};
}

} // namespace mpm::driver
