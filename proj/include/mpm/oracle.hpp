// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mpm/matrix.hpp"

namespace mpm {

/// Cubic (min, +) product: C[i][j] = min_k A[i][k] + B[k][j].
SquareMatrix minplus_oracle(const SquareMatrix& a, const SquareMatrix& b);

/// Quadratic (min, +) convolution of two length-n sequences.
/// The result has 2n-1 entries; entry t holds C_{t+2} in 1-based terms.
Seq minplus_conv_oracle(const Seq& a, const Seq& b);

} // namespace mpm
