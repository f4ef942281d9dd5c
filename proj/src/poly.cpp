// SPDX-License-Identifier: Apache-2.0
#include "mpm/poly.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>

#include "mpm/errors.hpp"

namespace mpm {

namespace {

constexpr std::int64_t kCoefLimit = std::int64_t{1} << 62;

std::int64_t max_abs(const std::vector<std::int64_t>& v) {
    std::int64_t m = 0;
    for (std::int64_t c : v) m = std::max<std::int64_t>(m, std::llabs(c));
    return m;
}

Window hull(Window a, Window b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

// Overflow check for sums of `count` products of bounded coefficients.
void guard_product(std::int64_t ma, std::int64_t mb, std::int64_t count, const char* who) {
    if (ma == 0 || mb == 0) return;
    if (ma > kCoefLimit / mb || ma * mb > kCoefLimit / std::max<std::int64_t>(count, 1))
        throw PreconditionError(std::string(who) + ": coefficient bound exceeds 62 bits");
}

} // namespace

// ---------------------------------------------------------------- BiPoly

BiPoly::BiPoly(Window x, Window y) : x_(x), y_(y) {
    if (x.empty() || y.empty()) x_ = y_ = Window{};
    c_.assign(static_cast<std::size_t>(x_.width() * y_.width()), 0);
}

BiPoly BiPoly::monomial(std::int64_t coef, std::int64_t x, std::int64_t y) {
    BiPoly p({x, x}, {y, y});
    p.c_[0] = coef;
    return p;
}

std::int64_t BiPoly::coeff(std::int64_t x, std::int64_t y) const noexcept {
    if (!x_.contains(x) || !y_.contains(y)) return 0;
    return c_[static_cast<std::size_t>((x - x_.lo) + x_.width() * (y - y_.lo))];
}

void BiPoly::add_term(std::int64_t coef, std::int64_t x, std::int64_t y) {
    if (!x_.contains(x) || !y_.contains(y)) throw PreconditionError("BiPoly::add_term: exponent outside window");
    c_[static_cast<std::size_t>((x - x_.lo) + x_.width() * (y - y_.lo))] += coef;
}

bool BiPoly::is_zero() const noexcept {
    return std::all_of(c_.begin(), c_.end(), [](std::int64_t c) { return c == 0; });
}

std::vector<Term> BiPoly::terms() const {
    std::vector<Term> out;
    const std::int64_t xw = x_.width();
    for (std::size_t t = 0; t < c_.size(); ++t)
        if (c_[t] != 0) {
            const auto s = static_cast<std::int64_t>(t);
            out.push_back({c_[t], x_.lo + s % xw, y_.lo + s / xw});
        }
    return out;
}

std::optional<std::int64_t> BiPoly::min_x_degree(std::int64_t d) const {
    if (!y_.contains(d)) return std::nullopt;
    for (std::int64_t x = x_.lo; x <= x_.hi; ++x)
        if (coeff(x, d) != 0) return x;
    return std::nullopt;
}

BiPoly BiPoly::operator*(const BiPoly& o) const {
    BiPoly out(x_ + o.x_, y_ + o.y_);
    for (const Term& s : terms())
        for (const Term& t : o.terms()) out.add_term(s.coef * t.coef, s.x + t.x, s.y + t.y);
    return out;
}

BiPoly BiPoly::operator+(const BiPoly& o) const {
    BiPoly out(hull(x_, o.x_), hull(y_, o.y_));
    for (const Term& s : terms()) out.add_term(s.coef, s.x, s.y);
    for (const Term& t : o.terms()) out.add_term(t.coef, t.x, t.y);
    return out;
}

BiPoly BiPoly::operator-(const BiPoly& o) const {
    BiPoly out(hull(x_, o.x_), hull(y_, o.y_));
    for (const Term& s : terms()) out.add_term(s.coef, s.x, s.y);
    for (const Term& t : o.terms()) out.add_term(-t.coef, t.x, t.y);
    return out;
}

// ---------------------------------------------------------- BiPolyMatrix

BiPolyMatrix::BiPolyMatrix(std::size_t n, Window x, Window y) : n_(n), x_(x), y_(y), e_(n * n, BiPoly(x, y)) {}

void BiPolyMatrix::set(std::size_t i, std::size_t j, const BiPoly& p) {
    BiPoly fresh(x_, y_);
    for (const Term& t : p.terms()) fresh.add_term(t.coef, t.x, t.y);
    e_[i * n_ + j] = std::move(fresh);
}

void BiPolyMatrix::add_term(std::size_t i, std::size_t j, std::int64_t coef, std::int64_t x, std::int64_t y) {
    e_[i * n_ + j].add_term(coef, x, y);
}

bool BiPolyMatrix::operator==(const BiPolyMatrix& o) const {
    if (n_ != o.n_) return false;
    for (std::size_t t = 0; t < e_.size(); ++t)
        if (!(e_[t] == o.e_[t])) return false;
    return true;
}

// ------------------------------------------------------------- backends

void BlockedCubicMatMul::multiply_add(std::size_t n, const std::int64_t* a, const std::int64_t* b,
                                      std::int64_t* c) const {
    const std::size_t bs = std::max<std::size_t>(block_, 1);
    for (std::size_t i0 = 0; i0 < n; i0 += bs)
        for (std::size_t k0 = 0; k0 < n; k0 += bs)
            for (std::size_t j0 = 0; j0 < n; j0 += bs) {
                const std::size_t i1 = std::min(n, i0 + bs), k1 = std::min(n, k0 + bs), j1 = std::min(n, j0 + bs);
                for (std::size_t i = i0; i < i1; ++i)
                    for (std::size_t k = k0; k < k1; ++k) {
                        const std::int64_t aik = a[i * n + k];
                        if (aik == 0) continue;
                        const std::int64_t* brow = b + k * n;
                        std::int64_t* crow = c + i * n;
                        for (std::size_t j = j0; j < j1; ++j) crow[j] += aik * brow[j];
                    }
            }
}

// -------------------------------------------------------------- packing

PackedPolyMatrix pack(const BiPolyMatrix& m, std::int64_t stride) {
    const Window x = m.x_window(), y = m.y_window();
    if (stride < x.width()) throw PreconditionError("pack: stride smaller than the x-window");
    const std::size_t n = m.size();
    PackedPolyMatrix p{n, stride, x, y, {}};
    if (x.empty() || y.empty()) return p;
    const auto layers = static_cast<std::size_t>((y.width() - 1) * stride + x.width());
    p.layers.assign(layers, std::vector<std::int64_t>(n * n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (const Term& t : m(i, j).terms())
                p.layers[static_cast<std::size_t>((t.x - x.lo) + stride * (t.y - y.lo))][i * n + j] += t.coef;
    return p;
}

BiPolyMatrix unpack(const PackedPolyMatrix& p) {
    BiPolyMatrix m(p.n, p.x, p.y);
    for (std::size_t e = 0; e < p.layers.size(); ++e) {
        const auto se = static_cast<std::int64_t>(e);
        const std::int64_t xo = se % p.stride, yo = se / p.stride;
        for (std::size_t t = 0; t < p.n * p.n; ++t) {
            const std::int64_t c = p.layers[e][t];
            if (c == 0) continue;
            if (xo >= p.x.width()) throw InvariantError("unpack: coefficient in the stride gap");
            m.add_term(t / p.n, t % p.n, c, p.x.lo + xo, p.y.lo + yo);
        }
    }
    return m;
}

BiPolyMatrix polymat_mul(const BiPolyMatrix& a, const BiPolyMatrix& b, const DenseMatMul& backend) {
    if (a.size() != b.size()) throw DimensionError("polymat_mul: dimension mismatch");
    const std::size_t n = a.size();
    const Window xo = a.x_window() + b.x_window(), yo = a.y_window() + b.y_window();
    BiPolyMatrix out(n, xo, yo);
    if (xo.empty() || yo.empty() || n == 0) return out;

    const std::int64_t stride = xo.width();
    const PackedPolyMatrix pa = pack(a, stride), pb = pack(b, stride);
    std::int64_t ma = 0, mb = 0;
    for (const auto& l : pa.layers) ma = std::max(ma, max_abs(l));
    for (const auto& l : pb.layers) mb = std::max(mb, max_abs(l));
    guard_product(ma, mb,
                  static_cast<std::int64_t>(n) * static_cast<std::int64_t>(std::min(pa.layers.size(), pb.layers.size())),
                  "polymat_mul");

    PackedPolyMatrix pc{n, stride, xo, yo, {}};
    pc.layers.assign(pa.layers.size() + pb.layers.size() - 1, std::vector<std::int64_t>(n * n, 0));
    std::vector<bool> a_nz(pa.layers.size()), b_nz(pb.layers.size());
    for (std::size_t e = 0; e < pa.layers.size(); ++e) a_nz[e] = max_abs(pa.layers[e]) != 0;
    for (std::size_t e = 0; e < pb.layers.size(); ++e) b_nz[e] = max_abs(pb.layers[e]) != 0;
    for (std::size_t e1 = 0; e1 < pa.layers.size(); ++e1) {
        if (!a_nz[e1]) continue;
        for (std::size_t e2 = 0; e2 < pb.layers.size(); ++e2)
            if (b_nz[e2]) backend.multiply_add(n, pa.layers[e1].data(), pb.layers[e2].data(), pc.layers[e1 + e2].data());
    }
    return unpack(pc);
}

BiPolyMatrix polymat_mul(const BiPolyMatrix& a, const BiPolyMatrix& b) {
    return polymat_mul(a, b, BlockedCubicMatMul{});
}

BiPolyMatrix polymat_mul_schoolbook(const BiPolyMatrix& a, const BiPolyMatrix& b) {
    if (a.size() != b.size()) throw DimensionError("polymat_mul: dimension mismatch");
    const std::size_t n = a.size();
    BiPolyMatrix out(n, a.x_window() + b.x_window(), a.y_window() + b.y_window());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (const Term& s : a(i, k).terms())
                    for (const Term& t : b(k, j).terms()) out.add_term(i, j, s.coef * t.coef, s.x + t.x, s.y + t.y);
    return out;
}

// --------------------------------------------------------------- TriPoly

TriPoly::TriPoly(Window x, Window y, Window z) : x_(x), y_(y), z_(z) {
    if (x.empty() || y.empty() || z.empty()) x_ = y_ = z_ = Window{};
    c_.assign(static_cast<std::size_t>(x_.width() * y_.width() * z_.width()), 0);
}

std::int64_t TriPoly::coeff(std::int64_t x, std::int64_t y, std::int64_t z) const noexcept {
    if (!x_.contains(x) || !y_.contains(y) || !z_.contains(z)) return 0;
    return c_[static_cast<std::size_t>((x - x_.lo) + x_.width() * ((y - y_.lo) + y_.width() * (z - z_.lo)))];
}

void TriPoly::add_term(std::int64_t coef, std::int64_t x, std::int64_t y, std::int64_t z) {
    if (!x_.contains(x) || !y_.contains(y) || !z_.contains(z))
        throw PreconditionError("TriPoly::add_term: exponent outside window");
    c_[static_cast<std::size_t>((x - x_.lo) + x_.width() * ((y - y_.lo) + y_.width() * (z - z_.lo)))] += coef;
}

BiPoly TriPoly::z_slice(std::int64_t k) const {
    BiPoly out(x_, y_);
    if (!z_.contains(k)) return out;
    for (std::int64_t y = y_.lo; y <= y_.hi; ++y)
        for (std::int64_t x = x_.lo; x <= x_.hi; ++x)
            if (const std::int64_t c = coeff(x, y, k)) out.add_term(c, x, y);
    return out;
}

bool TriPoly::operator==(const TriPoly& o) const {
    const Window xs = hull(x_, o.x_), ys = hull(y_, o.y_), zs = hull(z_, o.z_);
    for (std::int64_t z = zs.lo; z <= zs.hi; ++z)
        for (std::int64_t y = ys.lo; y <= ys.hi; ++y)
            for (std::int64_t x = xs.lo; x <= xs.hi; ++x)
                if (coeff(x, y, z) != o.coeff(x, y, z)) return false;
    return true;
}

// ------------------------------------------------------------------ NTT

namespace {

constexpr std::uint64_t kP1 = 469762049; // 7 * 2^26 + 1
constexpr std::uint64_t kP2 = 167772161; // 5 * 2^25 + 1
constexpr std::uint64_t kRoot = 3;       // primitive root of both
constexpr std::size_t kMaxNttLength = std::size_t{1} << 25;

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    b %= m;
    for (; e; e >>= 1, b = b * b % m)
        if (e & 1) r = r * b % m;
    return r;
}

void ntt(std::vector<std::uint64_t>& a, std::uint64_t mod, bool invert) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        std::uint64_t w = pow_mod(kRoot, (mod - 1) / len, mod);
        if (invert) w = pow_mod(w, mod - 2, mod);
        for (std::size_t i = 0; i < n; i += len) {
            std::uint64_t wk = 1;
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::uint64_t u = a[i + k], v = a[i + k + len / 2] * wk % mod;
                a[i + k] = u + v < mod ? u + v : u + v - mod;
                a[i + k + len / 2] = u >= v ? u - v : u + mod - v;
                wk = wk * w % mod;
            }
        }
    }
    if (invert) {
        const std::uint64_t inv = pow_mod(n, mod - 2, mod);
        for (auto& v : a) v = v * inv % mod;
    }
}

std::vector<std::uint64_t> convolve_mod(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
                                        std::size_t len, std::uint64_t mod) {
    std::vector<std::uint64_t> fa(len, 0), fb(len, 0);
    const auto m = static_cast<std::int64_t>(mod);
    for (std::size_t i = 0; i < a.size(); ++i) fa[i] = static_cast<std::uint64_t>(((a[i] % m) + m) % m);
    for (std::size_t i = 0; i < b.size(); ++i) fb[i] = static_cast<std::uint64_t>(((b[i] % m) + m) % m);
    ntt(fa, mod, false);
    ntt(fb, mod, false);
    for (std::size_t i = 0; i < len; ++i) fa[i] = fa[i] * fb[i] % mod;
    ntt(fa, mod, true);
    return fa;
}

} // namespace

std::vector<std::int64_t> ntt_convolve(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t out_len = a.size() + b.size() - 1;
    const std::size_t len = std::bit_ceil(out_len);
    if (len > kMaxNttLength) throw PreconditionError("ntt_convolve: transform length exceeds 2^25");
    // Results are recovered in (-P/2, P/2) with P = kP1 * kP2 ~ 7.9e16.
    constexpr std::int64_t kHalf = static_cast<std::int64_t>(kP1 * kP2 / 2);
    const std::int64_t ma = max_abs(a), mb = max_abs(b);
    guard_product(ma, mb, static_cast<std::int64_t>(std::min(a.size(), b.size())), "ntt_convolve");
    if (ma != 0 && mb != 0 &&
        static_cast<long double>(ma) * mb * static_cast<long double>(std::min(a.size(), b.size())) >= kHalf)
        throw PreconditionError("ntt_convolve: coefficient bound exceeds CRT headroom");

    const auto r1 = convolve_mod(a, b, len, kP1);
    const auto r2 = convolve_mod(a, b, len, kP2);
    const std::uint64_t inv_p1 = pow_mod(kP1 % kP2, kP2 - 2, kP2);
    std::vector<std::int64_t> out(out_len);
    for (std::size_t i = 0; i < out_len; ++i) {
        // x = r1 + kP1 * t with t = (r2 - r1) / kP1 mod kP2.
        const std::uint64_t diff = (r2[i] + kP2 - r1[i] % kP2) % kP2;
        const std::uint64_t t = diff * inv_p1 % kP2;
        const std::uint64_t x = r1[i] + kP1 * t;
        out[i] = x > static_cast<std::uint64_t>(kHalf) ? static_cast<std::int64_t>(x - kP1 * kP2)
                                                       : static_cast<std::int64_t>(x);
    }
    return out;
}

TriPoly seq_poly_mul(const TriPoly& a, const TriPoly& b) {
    const Window xo = a.x_ + b.x_, yo = a.y_ + b.y_, zo = a.z_ + b.z_;
    TriPoly out(xo, yo, zo);
    if (xo.empty()) return out;
    // Pack with the product's strides so no carry crosses a variable.
    const std::int64_t sx = xo.width(), sy = yo.width();
    auto flatten = [&](const TriPoly& p) {
        const std::int64_t len = (p.x_.width() - 1) + sx * ((p.y_.width() - 1) + sy * (p.z_.width() - 1)) + 1;
        std::vector<std::int64_t> flat(static_cast<std::size_t>(len), 0);
        std::size_t t = 0;
        for (std::int64_t z = 0; z < p.z_.width(); ++z)
            for (std::int64_t y = 0; y < p.y_.width(); ++y)
                for (std::int64_t x = 0; x < p.x_.width(); ++x, ++t)
                    flat[static_cast<std::size_t>(x + sx * (y + sy * z))] = p.c_[t];
        return flat;
    };
    const auto prod = ntt_convolve(flatten(a), flatten(b));
    std::size_t t = 0;
    for (std::int64_t z = 0; z < zo.width(); ++z)
        for (std::int64_t y = 0; y < yo.width(); ++y)
            for (std::int64_t x = 0; x < sx; ++x, ++t) {
                const auto e = static_cast<std::size_t>(x + sx * (y + sy * z));
                out.c_[t] = e < prod.size() ? prod[e] : 0;
            }
    return out;
}

TriPoly seq_poly_mul_schoolbook(const TriPoly& a, const TriPoly& b) {
    TriPoly out(a.x_window() + b.x_window(), a.y_window() + b.y_window(), a.z_window() + b.z_window());
    const Window ax = a.x_window(), ay = a.y_window(), az = a.z_window();
    const Window bx = b.x_window(), by = b.y_window(), bz = b.z_window();
    for (std::int64_t z1 = az.lo; z1 <= az.hi; ++z1)
        for (std::int64_t y1 = ay.lo; y1 <= ay.hi; ++y1)
            for (std::int64_t x1 = ax.lo; x1 <= ax.hi; ++x1) {
                const std::int64_t c1 = a.coeff(x1, y1, z1);
                if (c1 == 0) continue;
                for (std::int64_t z2 = bz.lo; z2 <= bz.hi; ++z2)
                    for (std::int64_t y2 = by.lo; y2 <= by.hi; ++y2)
                        for (std::int64_t x2 = bx.lo; x2 <= bx.hi; ++x2)
                            if (const std::int64_t c2 = b.coeff(x2, y2, z2))
                                out.add_term(c1 * c2, x1 + x2, y1 + y2, z1 + z2);
            }
    return out;
}

} // namespace mpm
