// SPDX-License-Identifier: Apache-2.0
//
// mpm: generate instances, run and verify the algorithms, sweep benchmarks,
// run the lemma suites.
//
// Exit codes: 0 ok, 2 precondition or usage error, 3 verification mismatch
// (or failed internal check), 4 I/O error.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "driver.hpp"
#include "lemmas.hpp"
#include "mpm/errors.hpp"

namespace {

using namespace mpm;
using namespace mpm::driver;

constexpr int kExitPrecondition = 2;
constexpr int kExitMismatch = 3;
constexpr int kExitIo = 4;

std::string fit_path(const std::string& out) {
    const auto dot = out.rfind(".csv");
    const std::string stem = (dot != std::string::npos && dot + 4 == out.size()) ? out.substr(0, dot) : out;
    return stem + "_fit.csv";
}

std::string default_kind(const std::string& alg) {
    if (is_sequence_algorithm(alg)) return "monotone-seq";
    if (alg == "column-mm") return "column-monotone";
    return "row-monotone";
}

void open_or_throw(std::ofstream& f, const std::string& path) {
    f.open(path);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact (min,+) products and convolutions on monotone instances"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string kind, instance_path, result_path;
    std::int64_t delta = 1;
    std::size_t pieces = 8, seeds = 1;
    std::vector<std::size_t> ns;
    bool include_unverified = false;
    double alpha = 0, beta = 0;
    std::size_t verify_cap = 0;

    auto add_alg_flags = [&](CLI::App* sub) {
        sub->add_option("--alg", cfg.algorithm, "Algorithm")->check(CLI::IsMember(algorithm_ids()));
        sub->add_option("--alpha", alpha, "Scale or prime-range exponent");
        sub->add_option("--beta", beta, "Prime-range exponent of basic-conv");
        sub->add_option("--guard", cfg.guard, "Blow-up guard constant G");
        sub->add_option("--verify-cap", verify_cap, "Largest n checked against the oracle");
    };

    CLI::App* gen = app.add_subcommand("gen", "Write a seeded instance file");
    gen->add_option("--kind", kind, "row-monotone, column-monotone, bounded-difference, arbitrary-A, monotone-seq, monotone-seq-bends")
        ->required();
    gen->add_option("--n", cfg.n, "Size")->required();
    gen->add_option("--seed", cfg.seed, "Seed");
    gen->add_option("--c", cfg.c, "Entry-bound constant");
    gen->add_option("--delta", delta, "Adjacent-entry bound for bounded-difference");
    gen->add_option("--pieces", pieces, "Stretches of monotone-seq-bends");
    gen->add_option("--out", cfg.out, "Output file (stdout if omitted)");

    CLI::App* run = app.add_subcommand("run", "Run one algorithm on an instance file");
    add_alg_flags(run);
    run->add_option("instance", instance_path, "Instance file")->required();
    run->add_option("--seed", cfg.seed, "Seed of the prime draws");
    run->add_option("--out", cfg.out, "Result file");

    CLI::App* verify = app.add_subcommand("verify", "Check a result file against the oracle");
    verify->add_option("instance", instance_path, "Instance file")->required();
    verify->add_option("result", result_path, "Result file")->required();

    CLI::App* bench = app.add_subcommand("bench", "Seeded sweep with CSV output");
    add_alg_flags(bench);
    bench->add_option("--n", ns, "Sizes")->expected(0, -1);
    bench->add_option("--seeds", seeds, "Seeds per size");
    bench->add_option("--seed", cfg.seed, "First seed");
    bench->add_option("--c", cfg.c, "Entry-bound constant");
    bench->add_option("--kind", kind, "Instance family (default from --alg)");
    bench->add_option("--delta", delta, "Adjacent-entry bound for bounded-difference");
    bench->add_option("--pieces", pieces, "Stretches of monotone-seq-bends");
    bench->add_option("--out", cfg.out, "CSV file; fits go to <stem>_fit.csv (stdout if omitted)");
    bench->add_flag("--include-unverified", include_unverified, "Keep rows above the verification cap");

    CLI::App* selftest = app.add_subcommand("selftest", "Run the lemma suites");
    selftest->add_option("--seed", cfg.seed, "Seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitPrecondition;
    }
    for (CLI::App* sub : {run, bench}) {
        if (sub->count("--alpha")) cfg.alpha = alpha;
        if (sub->count("--beta")) cfg.beta = beta;
        if (sub->count("--verify-cap")) cfg.verify_cap = verify_cap;
    }

    try {
        if (*gen) {
            const Instance inst = generate(kind, cfg.n, cfg.seed, cfg.c, delta, pieces);
            if (cfg.out.empty()) write_instance(std::cout, inst);
            else write_instance_file(cfg.out, inst);
            return 0;
        }
        if (*run) {
            const Instance inst = read_instance_file(instance_path);
            const RunOutcome res = run_instance(cfg, inst);
            if (!cfg.out.empty()) write_instance_file(cfg.out, res.result);
            write_csv_header(std::cout);
            write_csv_row(std::cout, res.record);
            if (res.mismatch) {
                std::cerr << "verification failed: " << res.diff;
                return kExitMismatch;
            }
            if (!res.checked && cfg.algorithm != "oracle")
                std::cerr << "n = " << inst.n << " above the verification cap; result not verified\n";
            return 0;
        }
        if (*verify) {
            const std::string diff = diff_against_oracle(read_instance_file(instance_path), read_instance_file(result_path));
            if (!diff.empty()) {
                std::cerr << "verification failed: " << diff;
                return kExitMismatch;
            }
            std::cout << "verified\n";
            return 0;
        }
        if (*bench) {
            SweepSpec sweep;
            sweep.base = cfg;
            sweep.ns = ns;
            sweep.seeds = seeds;
            sweep.kind = kind.empty() ? default_kind(cfg.algorithm) : kind;
            sweep.delta = delta;
            sweep.pieces = pieces;
            sweep.include_unverified = include_unverified;
            const SweepResult res = run_sweep(sweep);
            if (cfg.out.empty()) {
                write_csv_header(std::cout);
                for (const BenchRecord& r : res.records) write_csv_row(std::cout, r);
                write_fit_csv(std::cerr, res.fits);
            } else {
                std::ofstream csv, fit;
                open_or_throw(csv, cfg.out);
                open_or_throw(fit, fit_path(cfg.out));
                write_csv_header(csv);
                for (const BenchRecord& r : res.records) write_csv_row(csv, r);
                write_fit_csv(fit, res.fits);
            }
            if (res.mismatches) {
                std::cerr << res.mismatches << " runs failed verification\n";
                return kExitMismatch;
            }
            return 0;
        }
        if (*selftest) {
            bool ok = true;
            for (const SuiteResult& r : run_all_suites(cfg.seed)) {
                std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << " checks=" << r.checks
                          << " violations=" << r.violations;
                if (!r.first_violation.empty()) std::cout << " first: " << r.first_violation;
                std::cout << '\n';
                ok = ok && r.passed();
            }
            return ok ? 0 : kExitMismatch;
        }
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition: " << e.what() << '\n';
        return kExitPrecondition;
    } catch (const InvariantError& e) {
        std::cerr << "internal check failed: " << e.what() << '\n';
        return kExitMismatch;
    }
    return 0;
}
