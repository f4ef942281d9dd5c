// SPDX-License-Identifier: Apache-2.0
#include "mpm/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mpm/errors.hpp"

namespace mpm {

namespace {

constexpr std::array<const char*, 7> kKinds = {"row-monotone", "column-monotone", "bounded-difference", "arbitrary",
                                               "matrix",       "seq",             "seq-result"};

std::size_t parse_size(const std::string& tok, const char* what) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) throw IoError(std::string("MPM1: bad ") + what + " '" + tok + "'");
    return v;
}

ExtInt parse_entry(const std::string& tok) {
    if (tok == "inf") return ExtInt::inf();
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) throw IoError("MPM1: bad entry '" + tok + "'");
    if (v > kMagnitudeCap || v < -kMagnitudeCap) throw IoError("MPM1: entry '" + tok + "' exceeds the magnitude cap");
    return ExtInt(v);
}

std::vector<ExtInt> read_entries(std::istream& in, std::size_t count) {
    std::vector<ExtInt> v;
    v.reserve(count);
    std::string tok;
    for (std::size_t t = 0; t < count; ++t) {
        if (!(in >> tok)) throw IoError("MPM1: unexpected end of data");
        v.push_back(parse_entry(tok));
    }
    return v;
}

void write_entries(std::ostream& out, std::span<const ExtInt> v, std::size_t per_line) {
    for (std::size_t t = 0; t < v.size(); ++t) {
        if (v[t].is_inf()) out << "inf";
        else out << v[t].raw();
        out << ((t + 1) % per_line == 0 || t + 1 == v.size() ? '\n' : ' ');
    }
}

} // namespace

bool is_known_kind(const std::string& kind) noexcept {
    for (const char* k : kKinds)
        if (kind == k) return true;
    return false;
}

Instance read_instance(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw IoError("MPM1: empty input");
    std::istringstream hs(header);
    std::string magic, kind, n_tok, m_tok, extra;
    if (!(hs >> magic >> kind >> n_tok)) throw IoError("MPM1: incomplete header");
    if (magic != "MPM1") throw IoError("MPM1: bad magic '" + magic + "'");
    if (!is_known_kind(kind)) throw IoError("MPM1: unknown kind '" + kind + "'");
    Instance inst;
    inst.kind = kind;
    inst.n = parse_size(n_tok, "size");
    std::size_t m = 1;
    if (hs >> m_tok) m = parse_size(m_tok, "object count");
    if (hs >> extra) throw IoError("MPM1: trailing header token '" + extra + "'");
    if (inst.n > (std::size_t{1} << 24) || m > 64) throw IoError("MPM1: header sizes out of range");

    for (std::size_t o = 0; o < m; ++o) {
        if (kind == "seq") inst.seqs.emplace_back(read_entries(in, inst.n));
        else if (kind == "seq-result") inst.seqs.emplace_back(read_entries(in, inst.n == 0 ? 0 : 2 * inst.n - 1));
        else {
            SquareMatrix mat(inst.n);
            const auto v = read_entries(in, inst.n * inst.n);
            std::copy(v.begin(), v.end(), mat.data().begin());
            inst.matrices.push_back(std::move(mat));
        }
    }
    std::string tok;
    if (in >> tok) throw IoError("MPM1: trailing data '" + tok + "'");
    return inst;
}

void write_instance(std::ostream& out, const Instance& inst) {
    if (!is_known_kind(inst.kind)) throw IoError("MPM1: unknown kind '" + inst.kind + "'");
    out << "MPM1 " << inst.kind << ' ' << inst.n << ' ' << inst.count() << '\n';
    if (inst.is_sequence()) {
        const std::size_t len = inst.kind == "seq" ? inst.n : (inst.n == 0 ? 0 : 2 * inst.n - 1);
        for (const Seq& s : inst.seqs) {
            if (s.size() != len) throw IoError("MPM1: sequence length does not match the header");
            write_entries(out, s.data(), 32);
        }
    } else {
        for (const SquareMatrix& mat : inst.matrices) {
            if (mat.size() != inst.n) throw IoError("MPM1: matrix size does not match the header");
            write_entries(out, mat.data(), std::max<std::size_t>(inst.n, 1));
        }
    }
    if (!out) throw IoError("MPM1: write failed");
}

Instance read_instance_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open '" + path + "'");
    return read_instance(f);
}

void write_instance_file(const std::string& path, const Instance& inst) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot create '" + path + "'");
    write_instance(f, inst);
    f.flush();
    if (!f) throw IoError("write to '" + path + "' failed");
}

} // namespace mpm
