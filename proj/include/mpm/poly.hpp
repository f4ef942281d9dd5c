// SPDX-License-Identifier: Apache-2.0
//
// Integer polynomials in x, y (and z) with dense coefficient grids over
// bounded degree windows. Exponents may be negative; storage is offset.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace mpm {

/// Closed exponent range [lo, hi]; empty when lo > hi.
struct Window {
    std::int64_t lo = 0;
    std::int64_t hi = -1;

    [[nodiscard]] bool empty() const noexcept { return lo > hi; }
    [[nodiscard]] std::int64_t width() const noexcept { return empty() ? 0 : hi - lo + 1; }
    [[nodiscard]] bool contains(std::int64_t e) const noexcept { return lo <= e && e <= hi; }
    /// Window of the exponents of a product.
    [[nodiscard]] Window operator+(Window o) const noexcept {
        if (empty() || o.empty()) return {};
        return {lo + o.lo, hi + o.hi};
    }
    bool operator==(const Window&) const = default;
};

struct Term {
    std::int64_t coef;
    std::int64_t x;
    std::int64_t y;
    bool operator==(const Term&) const = default;
};

class BiPoly {
  public:
    BiPoly() = default;
    /// Zero polynomial with room for the given windows.
    BiPoly(Window x, Window y);
    static BiPoly monomial(std::int64_t coef, std::int64_t x, std::int64_t y);

    [[nodiscard]] Window x_window() const noexcept { return x_; }
    [[nodiscard]] Window y_window() const noexcept { return y_; }

    /// Zero outside the windows.
    [[nodiscard]] std::int64_t coeff(std::int64_t x, std::int64_t y) const noexcept;
    /// Throws PreconditionError when (x, y) is outside the windows.
    void add_term(std::int64_t coef, std::int64_t x, std::int64_t y);

    [[nodiscard]] bool is_zero() const noexcept;
    /// Nonzero terms ordered by (y, x).
    [[nodiscard]] std::vector<Term> terms() const;

    /// Smallest x with a nonzero coefficient at y-degree d.
    [[nodiscard]] std::optional<std::int64_t> min_x_degree(std::int64_t d) const;

    /// Schoolbook product and sums; windows grow as needed.
    BiPoly operator*(const BiPoly& o) const;
    BiPoly operator+(const BiPoly& o) const;
    BiPoly operator-(const BiPoly& o) const;
    /// Equal as polynomials; windows are ignored.
    bool operator==(const BiPoly& o) const { return terms() == o.terms(); }

    [[nodiscard]] const std::vector<std::int64_t>& dense() const noexcept { return c_; }

  private:
    Window x_, y_;
    std::vector<std::int64_t> c_; // (x - x.lo) + xw * (y - y.lo)
};

/// n x n matrix of BiPoly sharing one pair of windows.
class BiPolyMatrix {
  public:
    BiPolyMatrix() = default;
    BiPolyMatrix(std::size_t n, Window x, Window y);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] Window x_window() const noexcept { return x_; }
    [[nodiscard]] Window y_window() const noexcept { return y_; }

    [[nodiscard]] const BiPoly& operator()(std::size_t i, std::size_t j) const noexcept { return e_[i * n_ + j]; }
    /// Replace an entry; its terms must fit the shared windows.
    void set(std::size_t i, std::size_t j, const BiPoly& p);
    void add_term(std::size_t i, std::size_t j, std::int64_t coef, std::int64_t x, std::int64_t y);

    bool operator==(const BiPolyMatrix& o) const;

  private:
    std::size_t n_ = 0;
    Window x_, y_;
    std::vector<BiPoly> e_;
};

/// Dense integer matrix multiply-accumulate behind an exchangeable seam.
class DenseMatMul {
  public:
    virtual ~DenseMatMul() = default;
    /// C += A * B for n x n row-major int64 matrices.
    virtual void multiply_add(std::size_t n, const std::int64_t* a, const std::int64_t* b, std::int64_t* c) const = 0;
};

/// Cache-blocked i-k-j kernel.
class BlockedCubicMatMul final : public DenseMatMul {
  public:
    explicit BlockedCubicMatMul(std::size_t block = 64) : block_(block) {}
    void multiply_add(std::size_t n, const std::int64_t* a, const std::int64_t* b, std::int64_t* c) const override;

  private:
    std::size_t block_;
};

/// Univariate packing of a BiPolyMatrix: layer e holds the coefficient
/// matrix of exponent e = (x - x.lo) + stride * (y - y.lo).
struct PackedPolyMatrix {
    std::size_t n = 0;
    std::int64_t stride = 0;
    Window x, y;
    std::vector<std::vector<std::int64_t>> layers;
};

/// Requires stride >= x-window width.
PackedPolyMatrix pack(const BiPolyMatrix& m, std::int64_t stride);
BiPolyMatrix unpack(const PackedPolyMatrix& p);

/// Exact product over Z[x, y]. Packs y = x^stride with the stride set to
/// the product's x-width, convolves the layers with `backend` and unpacks.
/// Throws PreconditionError if a coefficient could leave 62 bits.
BiPolyMatrix polymat_mul(const BiPolyMatrix& a, const BiPolyMatrix& b, const DenseMatMul& backend);
BiPolyMatrix polymat_mul(const BiPolyMatrix& a, const BiPolyMatrix& b);
/// Triple-loop symbolic reference.
BiPolyMatrix polymat_mul_schoolbook(const BiPolyMatrix& a, const BiPolyMatrix& b);

/// Polynomial in x, y, z with a dense grid.
class TriPoly {
  public:
    TriPoly() = default;
    TriPoly(Window x, Window y, Window z);

    [[nodiscard]] Window x_window() const noexcept { return x_; }
    [[nodiscard]] Window y_window() const noexcept { return y_; }
    [[nodiscard]] Window z_window() const noexcept { return z_; }

    [[nodiscard]] std::int64_t coeff(std::int64_t x, std::int64_t y, std::int64_t z) const noexcept;
    void add_term(std::int64_t coef, std::int64_t x, std::int64_t y, std::int64_t z);
    /// Coefficient of z^k as a polynomial in x, y.
    [[nodiscard]] BiPoly z_slice(std::int64_t k) const;

    [[nodiscard]] const std::vector<std::int64_t>& dense() const noexcept { return c_; }
    bool operator==(const TriPoly& o) const;

  private:
    friend TriPoly seq_poly_mul(const TriPoly&, const TriPoly&);
    Window x_, y_, z_;
    std::vector<std::int64_t> c_; // (x - x.lo) + xw * ((y - y.lo) + yw * (z - z.lo))
};

/// Exact product through Kronecker packing and a two-prime number-theoretic
/// transform with CRT. Throws PreconditionError when the coefficient bound
/// exceeds the CRT headroom or the transform length limit.
TriPoly seq_poly_mul(const TriPoly& a, const TriPoly& b);
TriPoly seq_poly_mul_schoolbook(const TriPoly& a, const TriPoly& b);

/// Exact cyclic-free product of integer coefficient vectors via NTT + CRT.
std::vector<std::int64_t> ntt_convolve(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b);

} // namespace mpm
