// SPDX-License-Identifier: Apache-2.0
//
// Acceptance runner. `acceptance [N...]` runs the listed criteria (all when
// none are given) and prints one PASS/FAIL line per criterion. Exit status
// is nonzero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "driver.hpp"
#include "lemmas.hpp"
#include "mpm/generators.hpp"
#include "mpm/monotone_conv.hpp"
#include "mpm/monotone_mm.hpp"
#include "mpm/oracle.hpp"
#include "mpm/poly.hpp"
#include "mpm/primes.hpp"
#include "mpm/range_tree.hpp"
#include "mpm/reductions.hpp"

using namespace mpm;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int prec = 3) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(prec);
    os << v;
    return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Entry bounds cycle through c = 1, 4, 16 so that small instances still
// span several multiples of p.
std::int64_t c_for(int seed) { return std::array<std::int64_t, 3>{1, 4, 16}[static_cast<std::size_t>(seed % 3)]; }

Verdict matrix_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t runs = 0, bad = 0;
    for (std::size_t n : {8, 16, 32, 64, 128})
        for (int seed = 0; seed < 30; ++seed) {
            std::mt19937_64 rng(1000 * n + static_cast<std::uint64_t>(seed));
            const SquareMatrix a = gen_arbitrary(n, c_for(seed), rng, seed % 5 == 0 ? 15 : 0);
            const SquareMatrix b = gen_row_monotone(n, c_for(seed), rng);
            const SquareMatrix want = minplus_oracle(a, b);
            bad += basic_monotone_minplus(a, b, rng) != want;
            bad += recursive_monotone_minplus(a, b, rng) != want;
            runs += 2;
        }
    const double sec = seconds_since(t0);
    return {bad == 0 && sec < 300, std::to_string(runs) + " runs, " + std::to_string(bad) + " mismatches, " +
                                        fmt(sec, 1) + " s (budget 300 s)"};
}

Verdict column_oracle() {
    std::size_t runs = 0, bad = 0;
    for (std::size_t n : {8, 16, 32, 64})
        for (int seed = 0; seed < 30; ++seed) {
            std::mt19937_64 rng(2000 * n + static_cast<std::uint64_t>(seed));
            const SquareMatrix a = gen_arbitrary(n, c_for(seed), rng, seed % 5 == 0 ? 15 : 0);
            const SquareMatrix b = gen_column_monotone(n, c_for(seed), rng);
            bad += column_monotone_minplus(a, b, rng) != minplus_oracle(a, b);
            ++runs;
        }
    return {bad == 0, std::to_string(runs) + " runs, " + std::to_string(bad) + " mismatches"};
}

Verdict conv_oracle() {
    std::size_t runs = 0, bad = 0;
    for (std::size_t n : {16, 64, 256, 1024, 4096})
        for (int seed = 0; seed < 20; ++seed) {
            std::mt19937_64 rng(3000 * n + static_cast<std::uint64_t>(seed));
            const std::int64_t c = std::array<std::int64_t, 4>{1, 4, 16, 64}[static_cast<std::size_t>(seed % 4)];
            const Seq a = seed % 2 ? gen_monotone_seq_bends(n, c, 8, rng) : gen_monotone_seq(n, c, rng);
            const Seq b = gen_monotone_seq_bends(n, c, 8, rng);
            const Seq want = minplus_conv_oracle(a, b);
            bad += basic_monotone_conv(a, b, rng) != want;
            bad += recursive_monotone_conv(a, b, rng) != want;
            runs += 2;
        }
    return {bad == 0, std::to_string(runs) + " runs, " + std::to_string(bad) + " mismatches"};
}

Verdict prime_independence() {
    const std::size_t n = 8;
    std::size_t runs = 0, bad = 0;
    auto pool_of = [&](double a, double f, double g) {
        const PrimeInterval iv = prime_interval(n, a, f, g);
        int w = 0;
        return widened_pool(iv.lo, iv.hi, w).primes;
    };
    for (int inst = 0; inst < 5; ++inst) {
        std::mt19937_64 rng(4000 + static_cast<std::uint64_t>(inst));
        const std::int64_t c = 40;
        const SquareMatrix a = gen_arbitrary(n, c, rng, 10);
        const SquareMatrix b = gen_row_monotone(n, c, rng);
        const SquareMatrix bc = gen_column_monotone(n, c, rng);
        const Seq sa = gen_monotone_seq_bends(n, c, 3, rng), sb = gen_monotone_seq(n, c, rng);
        const SquareMatrix want = minplus_oracle(a, b), want_c = minplus_oracle(a, bc);
        const Seq want_s = minplus_conv_oracle(sa, sb);
        for (std::uint64_t p : pool_of(1.0 / 3.0, 1, 2)) {
            MmOptions o = MmOptions::basic_defaults();
            o.fixed_prime = p;
            bad += basic_monotone_minplus(a, b, rng, o) != want;
            ++runs;
        }
        for (std::uint64_t p : pool_of(0.5, 40, 80)) {
            MmOptions o;
            o.fixed_prime = p;
            bad += recursive_monotone_minplus(a, b, rng, o) != want;
            bad += column_monotone_minplus(a, bc, rng, o) != want_c;
            ConvOptions co;
            co.fixed_prime = p;
            bad += recursive_monotone_conv(sa, sb, rng, co) != want_s;
            runs += 3;
        }
        for (std::uint64_t p : pool_of(0.4, 1, 2)) {
            ConvOptions co = ConvOptions::basic_defaults();
            co.fixed_prime = p;
            bad += basic_monotone_conv(sa, sb, rng, co) != want_s;
            ++runs;
        }
    }
    return {bad == 0, std::to_string(runs) + " (instance, prime) runs, " + std::to_string(bad) + " mismatches"};
}

Verdict suites(bool enumeration_only) {
    std::ostringstream os;
    bool ok = true;
    const auto results = enumeration_only ? std::vector<driver::SuiteResult>{driver::suite_enumeration(6006)}
                                          : driver::run_all_suites(5005);
    for (const driver::SuiteResult& r : results) {
        if (enumeration_only || r.name != "enumeration") {
            const bool pass = r.violations == 0 && r.checks >= 1000;
            ok = ok && pass;
            os << r.name << " " << r.checks << "/" << r.violations << "; ";
            if (!r.first_violation.empty()) os << "first violation: " << r.first_violation << "; ";
        }
    }
    return {ok, os.str() + "(checks/violations)"};
}

Verdict scaling() {
    std::ostringstream os;
    bool ok = true;
    struct Plan {
        const char* alg;
        const char* kind;
        std::vector<std::size_t> ns;
        std::int64_t c;
        double limit;
    };
    const Plan plans[] = {
        {"recursive-mm", "row-monotone", {64, 128, 256, 512}, 16, 3.0 - 0.5 + 0.2},
        {"recursive-conv", "monotone-seq-bends", {64, 128, 256, 512, 1024, 2048, 4096, 8192, 16384}, 64, 2.0 - 0.5 + 0.2},
    };
    for (const Plan& plan : plans) {
        driver::SweepSpec sweep;
        sweep.base.algorithm = plan.alg;
        sweep.base.alpha = 0.5;
        sweep.base.c = plan.c;
        sweep.base.seed = 1;
        sweep.ns = plan.ns;
        sweep.seeds = 30;
        sweep.kind = plan.kind;
        sweep.pieces = 8;
        const driver::SweepResult res = driver::run_sweep(sweep);
        const std::string stem = std::string("acceptance_7_") + plan.alg;
        std::ofstream csv(stem + ".csv"), fit(stem + "_fit.csv");
        driver::write_csv_header(csv);
        for (const driver::BenchRecord& r : res.records) driver::write_csv_row(csv, r);

        // Same fit with log^2 n divided out, reported alongside.
        std::map<std::size_t, std::vector<double>> by_n;
        for (const driver::BenchRecord& r : res.records) by_n[r.n].push_back(static_cast<double>(r.sum_T_segments));
        std::vector<std::size_t> xs;
        std::vector<double> ys;
        for (auto& [n, v] : by_n) {
            std::sort(v.begin(), v.end());
            const double med = v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
            const double lg = std::log2(static_cast<double>(n));
            xs.push_back(n);
            ys.push_back(med / (lg * lg));
        }
        std::vector<driver::FitResult> fits = res.fits;
        fits.push_back(driver::fit_loglog(xs, ys, plan.alg, "sum_T_segments_over_log2sq"));
        driver::write_fit_csv(fit, fits);

        const double e = res.fits[0].exponent;
        const bool pass = std::isfinite(e) && e <= plan.limit && res.mismatches == 0 &&
                          res.records.size() == plan.ns.size() * sweep.seeds;
        ok = ok && pass;
        os << plan.alg << " exponent " << fmt(e) << " (limit " << fmt(plan.limit, 1) << ", over log^2 "
           << fmt(fits.back().exponent) << ", " << res.records.size() << " verified rows) "
           << (pass ? "ok" : "over") << "; ";
    }
    return {ok, os.str() + "CSV in acceptance_7_*.csv"};
}

Verdict reductions() {
    std::size_t bad = 0, runs = 0;
    for (int inst = 0; inst < 50; ++inst) {
        std::mt19937_64 rng(8000 + static_cast<std::uint64_t>(inst));
        const std::size_t n = 4 + static_cast<std::size_t>(inst % 29);
        const SquareMatrix a = gen_arbitrary(n, 3, rng, 10);
        const std::int64_t delta = 1 + inst % 4;
        const SquareMatrix b = gen_bounded_difference(n, delta, rng);
        const SquareMatrix want = minplus_oracle(a, b);
        const Reduced row = reduce_bd_to_monotone(b, delta, Axis::row);
        bad += row.undo.undo(recursive_monotone_minplus(a, row.matrix, rng)) != want;
        const Reduced col = reduce_bd_to_monotone(b, delta, Axis::column);
        bad += col.undo.undo(minplus_oracle(col.undo.adjust_left(a), col.matrix)) != want;
        runs += 2;

        const SquareMatrix m = gen_row_monotone(n, 4, rng);
        const std::int64_t p = std::array<std::int64_t, 4>{7, 11, 13, 41}[static_cast<std::size_t>(inst % 4)];
        const ResidueSplit split = split_by_residue(a, m, p);
        std::array<std::array<SquareMatrix, 3>, 3> prods;
        for (int x = 0; x < 3; ++x)
            for (int y = 0; y < 3; ++y) prods[x][y] = minplus_oracle(split.a_parts[x], split.b_parts[y]);
        bad += split.recombine(prods) != minplus_oracle(a, m);

        const Seq sa = gen_monotone_seq(4 * n, 4, rng), sb = gen_monotone_seq_bends(4 * n, 4, 3, rng);
        const SeqResidueSplit ss = split_seq_by_residue(sa, sb, p);
        std::array<std::array<Seq, 3>, 3> convs;
        for (int x = 0; x < 3; ++x)
            for (int y = 0; y < 3; ++y) convs[x][y] = minplus_conv_oracle(ss.a_parts[x], ss.b_parts[y]);
        bad += ss.recombine(convs) != minplus_conv_oracle(sa, sb);
        runs += 2;
    }
    return {bad == 0, std::to_string(runs) + " round trips, " + std::to_string(bad) + " mismatches"};
}

Verdict infrastructure() {
    std::ostringstream os;
    // Range tree against a plain array.
    std::mt19937_64 rng(9000);
    std::size_t tree_bad = 0, ops = 0;
    {
        const std::size_t n = 777;
        RangeChminTree t(n, ExtInt::inf());
        std::vector<ExtInt> ref(n, ExtInt::inf());
        for (; ops < 100000; ++ops) {
            std::size_t l = 1 + rng() % n, r = 1 + rng() % n;
            if (l > r) std::swap(l, r);
            if (rng() % 2) {
                const ExtInt v(static_cast<std::int64_t>(rng() % 100000));
                t.range_chmin(l, r, v);
                for (std::size_t i = l; i <= r; ++i) ref[i - 1] = min(ref[i - 1], v);
            } else {
                tree_bad += t.point_query(l) != ref[l - 1];
            }
        }
        tree_bad += t.snapshot() != ref;
    }
    os << "rangetree " << ops << " ops " << tree_bad << " mismatches; ";

    // Polynomial matrix product against the schoolbook product.
    std::size_t poly_bad = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 1 + rng() % 6;
        const Window x{-static_cast<std::int64_t>(rng() % 3), static_cast<std::int64_t>(rng() % 4)};
        const Window y{0, static_cast<std::int64_t>(rng() % 6)};
        BiPolyMatrix a(n, x, y), b(n, x, y);
        for (BiPolyMatrix* m : {&a, &b})
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    for (int t = static_cast<int>(rng() % 4); t > 0; --t)
                        m->add_term(i, j, static_cast<std::int64_t>(1 + rng() % 9),
                                    x.lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(x.width())),
                                    y.lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(y.width())));
        poly_bad += polymat_mul(a, b) != polymat_mul_schoolbook(a, b);
    }
    os << "polyalg 200 products " << poly_bad << " mismatches; ";

    // Chi-square of prime draws; pass within 5 standard deviations.
    const PrimePool pool = primes_in(1000, 2000);
    const std::size_t draws = 200000;
    std::vector<double> count(pool.size(), 0);
    std::mt19937_64 srng(9100);
    std::map<std::uint64_t, std::size_t> index;
    for (std::size_t t = 0; t < pool.size(); ++t) index[pool.primes[t]] = t;
    for (std::size_t t = 0; t < draws; ++t) count[index.at(sample(pool, srng))] += 1;
    const double expect = static_cast<double>(draws) / static_cast<double>(pool.size());
    double chi = 0;
    for (double c : count) chi += (c - expect) * (c - expect) / expect;
    const double dof = static_cast<double>(pool.size() - 1);
    const double z = (chi - dof) / std::sqrt(2 * dof);
    os << "prime chi-square " << fmt(chi, 1) << " on " << dof << " dof, z = " << fmt(z, 2);
    return {tree_bad == 0 && poly_bad == 0 && std::abs(z) <= 5.0, os.str()};
}

} // namespace

int main(int argc, char** argv) {
    const std::map<int, std::function<Verdict()>> criteria{
        {1, matrix_oracle},
        {2, column_oracle},
        {3, conv_oracle},
        {4, prime_independence},
        {5, [] { return suites(false); }},
        {6, [] { return suites(true); }},
        {7, scaling},
        {8, reductions},
        {9, infrastructure},
    };
    std::vector<int> chosen;
    for (int i = 1; i < argc; ++i) chosen.push_back(std::atoi(argv[i]));
    if (chosen.empty())
        for (const auto& [id, fn] : criteria) chosen.push_back(id);

    bool all = true;
    for (int id : chosen) {
        const auto it = criteria.find(id);
        if (it == criteria.end()) {
            std::cout << "criterion " << id << ": FAIL unknown criterion\n";
            all = false;
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = it->second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::cout << "criterion " << id << ": " << (v.pass ? "PASS" : "FAIL") << " " << v.detail << " ["
                  << fmt(seconds_since(t0), 1) << " s]" << std::endl;
        all = all && v.pass;
    }
    return all ? 0 : 1;
}
