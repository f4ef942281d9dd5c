// SPDX-License-Identifier: Apache-2.0
#include "driver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "mpm/errors.hpp"
#include "mpm/generators.hpp"
#include "mpm/monotone_conv.hpp"
#include "mpm/oracle.hpp"
#include "mpm/reductions.hpp"

namespace mpm::driver {

bool is_sequence_algorithm(const std::string& alg) { return alg == "basic-conv" || alg == "recursive-conv"; }

double RunConfig::alpha_or_default() const {
    if (alpha) return *alpha;
    if (algorithm == "basic-mm") return 1.0 / 3.0;
    if (algorithm == "basic-conv") return 0.2;
    return 0.5;
}

double RunConfig::beta_or_default() const { return beta ? *beta : 0.4; }

std::size_t RunConfig::verify_cap_or_default() const {
    if (verify_cap) return *verify_cap;
    return is_sequence_algorithm(algorithm) ? kVerifyCapSeq : kVerifyCapMatrix;
}

Instance generate(const std::string& kind, std::size_t n, std::uint64_t seed, std::int64_t c, std::int64_t delta,
                  std::size_t pieces) {
    if (n == 0) throw PreconditionError("gen: n must be positive");
    std::mt19937_64 rng(seed);
    Instance inst;
    inst.n = n;
    if (kind == "arbitrary-A" || kind == "arbitrary") {
        inst.kind = "arbitrary";
        inst.matrices.push_back(gen_arbitrary(n, c, rng));
        return inst;
    }
    if (kind == "monotone-seq" || kind == "seq" || kind == "monotone-seq-bends") {
        inst.kind = "seq";
        for (int t = 0; t < 2; ++t)
            inst.seqs.push_back(kind == "monotone-seq-bends" ? gen_monotone_seq_bends(n, c, pieces, rng)
                                                             : gen_monotone_seq(n, c, rng));
        return inst;
    }
    SquareMatrix a = gen_arbitrary(n, c, rng);
    SquareMatrix b;
    if (kind == "row-monotone") b = gen_row_monotone(n, c, rng);
    else if (kind == "column-monotone") b = gen_column_monotone(n, c, rng);
    else if (kind == "bounded-difference") b = gen_bounded_difference(n, delta, rng);
    else throw PreconditionError("gen: unknown kind '" + kind + "'");
    inst.kind = kind;
    inst.matrices.push_back(std::move(a));
    inst.matrices.push_back(std::move(b));
    return inst;
}

namespace {

std::int64_t max_adjacent_gap(const SquareMatrix& b, Axis axis) {
    std::int64_t d = 0;
    const std::size_t n = b.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (b(i, j).is_inf()) throw PreconditionError("bounded-difference instance holds +inf");
            if (axis == Axis::row && j + 1 < n) d = std::max<std::int64_t>(d, std::llabs(b(i, j + 1).raw() - b(i, j).raw()));
            if (axis == Axis::column && i + 1 < n) d = std::max<std::int64_t>(d, std::llabs(b(i + 1, j).raw() - b(i, j).raw()));
        }
    return d;
}

// Matrix algorithms see bounded-difference B through the monotone reduction.
SquareMatrix run_matrix(const RunConfig& cfg, const Instance& inst, std::mt19937_64& rng, RunMetadata& md) {
    const SquareMatrix& a = inst.matrices[0];
    const SquareMatrix& b = inst.matrices[1];
    const std::string& alg = cfg.algorithm;
    if (alg == "oracle") return minplus_oracle(a, b);
    MmOptions o = alg == "basic-mm" ? MmOptions::basic_defaults() : MmOptions{};
    o.alpha = cfg.alpha_or_default();
    o.guard = cfg.guard;
    const bool bd = inst.kind == "bounded-difference";
    if (alg == "column-mm") {
        if (!bd) return column_monotone_minplus(a, b, rng, o, &md);
        const Reduced r = reduce_bd_to_monotone(b, max_adjacent_gap(b, Axis::column), Axis::column);
        SquareMatrix left = r.undo.adjust_left(a);
        // The inner offsets can push A below zero; a uniform shift undoes cleanly.
        std::int64_t lowest = 0;
        for (ExtInt v : left.data())
            if (v.is_finite()) lowest = std::min(lowest, v.raw());
        for (ExtInt& v : left.data())
            if (v.is_finite()) v = ExtInt(v.raw() - lowest);
        SquareMatrix c = r.undo.undo(column_monotone_minplus(left, r.matrix, rng, o, &md));
        for (ExtInt& v : c.data())
            if (v.is_finite()) v = ExtInt(v.raw() + lowest);
        return c;
    }
    auto solve = [&](const SquareMatrix& bb) {
        return alg == "basic-mm" ? basic_monotone_minplus(a, bb, rng, o, &md)
                                 : recursive_monotone_minplus(a, bb, rng, o, &md);
    };
    if (alg != "basic-mm" && alg != "recursive-mm") throw PreconditionError("unknown algorithm '" + alg + "'");
    if (!bd) return solve(b);
    const Reduced r = reduce_bd_to_monotone(b, max_adjacent_gap(b, Axis::row), Axis::row);
    return r.undo.undo(solve(r.matrix));
}

Seq run_seq(const RunConfig& cfg, const Instance& inst, std::mt19937_64& rng, RunMetadata& md) {
    const Seq& a = inst.seqs[0];
    const Seq& b = inst.seqs[1];
    if (cfg.algorithm == "oracle") return minplus_conv_oracle(a, b);
    ConvOptions o = cfg.algorithm == "basic-conv" ? ConvOptions::basic_defaults() : ConvOptions{};
    o.alpha = cfg.alpha_or_default();
    o.beta = cfg.beta_or_default();
    o.guard = cfg.guard;
    if (cfg.algorithm == "basic-conv") return basic_monotone_conv(a, b, rng, o, &md);
    if (cfg.algorithm == "recursive-conv") return recursive_monotone_conv(a, b, rng, o, &md);
    throw PreconditionError("algorithm '" + cfg.algorithm + "' does not take sequences");
}

template <class T>
std::string diff_report(const std::vector<T>& want, const std::vector<T>& got, std::size_t n, bool matrix) {
    std::ostringstream os;
    std::size_t shown = 0, total = 0;
    for (std::size_t t = 0; t < want.size(); ++t) {
        if (want[t] == got[t]) continue;
        ++total;
        if (shown++ < 5) {
            if (matrix) os << "  (" << t / n + 1 << "," << t % n + 1 << ")";
            else os << "  [" << t + 2 << "]";
            os << " expected " << want[t] << " got " << got[t] << "\n";
        }
    }
    if (total == 0) return {};
    return std::to_string(total) + " mismatching entries\n" + os.str();
}

} // namespace

std::string diff_against_oracle(const Instance& inst, const Instance& result) {
    if (inst.is_sequence()) {
        if (inst.seqs.size() != 2) throw PreconditionError("verify: sequence instance needs two sequences");
        if (result.seqs.size() != 1) throw PreconditionError("verify: result must hold one sequence");
        const Seq want = minplus_conv_oracle(inst.seqs[0], inst.seqs[1]);
        if (result.seqs[0].size() != want.size()) return "result length differs from 2n - 1\n";
        std::vector<ExtInt> w(want.data().begin(), want.data().end()), g(result.seqs[0].data().begin(),
                                                                         result.seqs[0].data().end());
        return diff_report(w, g, 0, false);
    }
    if (inst.matrices.size() != 2) throw PreconditionError("verify: matrix instance needs two matrices");
    if (result.matrices.size() != 1) throw PreconditionError("verify: result must hold one matrix");
    const SquareMatrix want = minplus_oracle(inst.matrices[0], inst.matrices[1]);
    if (result.matrices[0].size() != want.size()) return "result dimension differs\n";
    std::vector<ExtInt> w(want.data().begin(), want.data().end()), g(result.matrices[0].data().begin(),
                                                                     result.matrices[0].data().end());
    return diff_report(w, g, want.size(), true);
}

RunOutcome run_instance(const RunConfig& cfg, const Instance& inst) {
    const bool seq_alg = is_sequence_algorithm(cfg.algorithm);
    if (std::find(algorithm_ids().begin(), algorithm_ids().end(), cfg.algorithm) == algorithm_ids().end())
        throw PreconditionError("unknown algorithm '" + cfg.algorithm + "'");
    if (inst.is_sequence() ? inst.seqs.size() != 2 : inst.matrices.size() != 2)
        throw PreconditionError("instance must hold two operands");
    if (cfg.algorithm != "oracle" && seq_alg != inst.is_sequence())
        throw PreconditionError("algorithm '" + cfg.algorithm + "' does not match instance kind '" + inst.kind + "'");

    RunOutcome out;
    BenchRecord& rec = out.record;
    rec.n = inst.n;
    rec.seed = cfg.seed;
    rec.algorithm = cfg.algorithm;
    rec.alpha = cfg.alpha_or_default();
    rec.beta = cfg.algorithm == "basic-conv" ? cfg.beta_or_default() : 0.0;

    std::mt19937_64 rng(cfg.seed);
    RunMetadata md;
    const auto t0 = std::chrono::steady_clock::now();
    out.result.n = inst.n;
    if (inst.is_sequence()) {
        out.result.kind = "seq-result";
        out.result.seqs.push_back(run_seq(cfg, inst, rng, md));
    } else {
        out.result.kind = "matrix";
        out.result.matrices.push_back(run_matrix(cfg, inst, rng, md));
    }
    rec.total_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rec.p = md.p;
    rec.restarts = md.restarts;
    rec.times = md.times;
    rec.sum_T_segments = md.sum_T_segments;
    rec.level_segments = md.level_segments;

    const std::size_t cap = RunConfig{cfg}.verify_cap_or_default();
    if (cfg.algorithm == "oracle") {
        rec.verified = true;
    } else if (inst.n <= cap) {
        out.checked = true;
        out.diff = diff_against_oracle(inst, out.result);
        out.mismatch = !out.diff.empty();
        rec.verified = !out.mismatch;
    }
    return out;
}

unsigned thread_cap() {
    const char* env = std::getenv("MPM_THREADS");
    if (!env) return 1;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || v < 1) return 1;
    return static_cast<unsigned>(std::min<long>(v, 256));
}

FitResult fit_loglog(const std::vector<std::size_t>& n, const std::vector<double>& y, std::string algorithm,
                     std::string metric) {
    FitResult f{std::move(algorithm), std::move(metric), std::numeric_limits<double>::quiet_NaN(),
                std::numeric_limits<double>::quiet_NaN(), 0};
    std::vector<double> xs, ys;
    for (std::size_t t = 0; t < n.size() && t < y.size(); ++t)
        if (y[t] > 0 && n[t] > 0) {
            xs.push_back(std::log(static_cast<double>(n[t])));
            ys.push_back(std::log(y[t]));
        }
    f.points = xs.size();
    if (xs.size() < 2) return f;
    double mx = 0, my = 0;
    for (std::size_t t = 0; t < xs.size(); ++t) {
        mx += xs[t];
        my += ys[t];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0, sxx = 0;
    for (std::size_t t = 0; t < xs.size(); ++t) {
        sxy += (xs[t] - mx) * (ys[t] - my);
        sxx += (xs[t] - mx) * (xs[t] - mx);
    }
    if (sxx == 0) return f;
    f.exponent = sxy / sxx;
    f.intercept = my - f.exponent * mx;
    return f;
}

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

} // namespace

SweepResult run_sweep(const SweepSpec& sweep) {
    struct Job {
        std::size_t n;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (std::size_t n : sweep.ns)
        for (std::size_t s = 0; s < sweep.seeds; ++s) jobs.push_back({n, sweep.base.seed + s});

    std::vector<std::optional<RunOutcome>> done(jobs.size());
    std::vector<std::string> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t; (t = next.fetch_add(1)) < jobs.size();) {
            RunConfig cfg = sweep.base;
            cfg.n = jobs[t].n;
            cfg.seed = jobs[t].seed;
            try {
                const Instance inst = generate(sweep.kind, cfg.n, cfg.seed, cfg.c, sweep.delta, sweep.pieces);
                done[t] = run_instance(cfg, inst);
                done[t]->result = {};
            } catch (const std::exception& e) {
                errors[t] = e.what();
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(sweep.threads ? sweep.threads : thread_cap(),
                                                             static_cast<unsigned>(std::max<std::size_t>(jobs.size(), 1))));
    if (threads == 1) worker();
    else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (std::size_t t = 0; t < jobs.size(); ++t)
        if (!errors[t].empty()) throw PreconditionError(errors[t]);

    SweepResult res;
    std::map<std::size_t, std::vector<double>> seg, ms;
    for (auto& d : done) {
        if (d->mismatch) ++res.mismatches;
        if (!d->record.verified && !sweep.include_unverified && !d->mismatch) continue;
        seg[d->record.n].push_back(static_cast<double>(d->record.sum_T_segments));
        ms[d->record.n].push_back(d->record.total_ms);
        res.records.push_back(std::move(d->record));
    }
    std::vector<std::size_t> ns;
    std::vector<double> seg_med, ms_med;
    for (const auto& [n, v] : seg) {
        ns.push_back(n);
        seg_med.push_back(median(v));
        ms_med.push_back(median(ms[n]));
    }
    res.fits.push_back(fit_loglog(ns, seg_med, sweep.base.algorithm, "sum_T_segments"));
    res.fits.push_back(fit_loglog(ns, ms_med, sweep.base.algorithm, "total_ms"));
    return res;
}

void write_csv_header(std::ostream& out) {
    out << "n,seed,algorithm,alpha,beta,p,restarts,phase_approx_ms,phase_polymul_ms,phase_subtract_ms,total_ms,"
           "sum_T_segments,verified\n";
}

void write_csv_row(std::ostream& out, const BenchRecord& r) {
    std::ostringstream os;
    os << std::setprecision(6);
    os << r.n << ',' << r.seed << ',' << r.algorithm << ',' << r.alpha << ',' << r.beta << ',' << r.p << ','
       << r.restarts << ',' << std::fixed << std::setprecision(3) << r.times.approx_ms << ',' << r.times.polymul_ms
       << ',' << r.times.subtract_ms << ',' << r.total_ms << ',' << r.sum_T_segments << ','
       << (r.verified ? "true" : "false") << '\n';
    out << os.str();
}

void write_fit_csv(std::ostream& out, const std::vector<FitResult>& fits) {
    out << "algorithm,metric,exponent,intercept,points\n";
    for (const FitResult& f : fits)
        out << f.algorithm << ',' << f.metric << ',' << std::setprecision(6) << f.exponent << ',' << f.intercept
            << ',' << f.points << '\n';
}

} // namespace mpm::driver
