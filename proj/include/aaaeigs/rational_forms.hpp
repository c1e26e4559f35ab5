// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "aaaeigs/barycentric.hpp"

namespace aaaeigs
{

// r(λ) = aᵀ (E − λF)⁻¹ b with ℓ = m.
//
// Row 0 of E holds the weights and row 0 of F is zero. For j ≥ 1, row j
// encodes (λ − z_{j−1}) u_{j−1} + (z_j − λ) u_j = 0, i.e. E(j, j−1) = −z_{j−1},
// E(j, j) = z_j, F(j, j−1) = −1, F(j, j) = 1. b = e₁.
struct StateSpaceRational
{
  Vector a;
  Vector b;
  Matrix e;
  Matrix f;

  Index size() const { return a.size(); }
};

// Exact support-point hits return the stored value.
Complex eval_barycentric(const BarycentricRational &r, Index function_index, Complex lambda);
// All functions at once (length s).
Vector eval_barycentric_all(const BarycentricRational &r, Complex lambda);

StateSpaceRational to_state_space(const BarycentricRational &r, Index function_index);

// (E − λF)⁻¹ b, the vector-valued function whose entries scale the u-blocks
// of the linearization.
Vector state_space_resolvent(const StateSpaceRational &ss, Complex lambda);
Complex eval_state_space(const StateSpaceRational &ss, Complex lambda);

// Finite poles of r (m − 1 of them for a generic fit). `diameter` sets the
// scale beyond which eigenvalues count as infinite.
std::vector<Complex> poles(const BarycentricRational &r, double diameter = 1.0);

// Finite eigenvalues of E − λF: the points where the realization breaks down.
std::vector<Complex> state_space_poles(const StateSpaceRational &ss, double diameter = 1.0);

}  // namespace aaaeigs
