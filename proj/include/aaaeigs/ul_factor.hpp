// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/LU>

#include "aaaeigs/pencil.hpp"

namespace aaaeigs
{

// Block-UL factorization of 𝓛(μ)𝒫 where 𝒫 moves the unknown y_j to the front.
//
// With the remaining unknowns w = (y_i for i ≠ j, u-blocks) and row order
// (top, rest):
//   𝓛(μ)𝒫 = [[G11, G12], [G21, G22]] = U L,
//   U = [[I, G12 G22⁻¹], [0, I]],  L = [[R(μ)/α, 0], [G21, G22]],
// where G22 = [[(M₁ − μN₁) ⊗ I, 0], [𝐙₁*, (E − μF) ⊗ I]] is block lower
// triangular and α = f_j(μ).
// Holds a pointer to the pencil, which must outlive the factors.
class ULFactors
{
public:
  ULFactors(const CorkPencil &pencil, Complex mu);

  Complex shift() const { return mu_; }
  Index pivot() const { return pivot_; }
  Complex alpha() const { return alpha_; }
  const Vector &basis() const { return f_; }
  const Matrix &r_matrix() const { return r_; }
  // Estimated reciprocal condition of R(μ).
  double r_rcond() const { return rcond_; }
  // Smallest singular value of M₁ − μN₁ (infinity for k = 1).
  double m1_sigma_min() const { return m1_sigma_; }

  // v with 𝓛(μ) v = rhs: one solve with R(μ), small solves elsewhere.
  Vector solve(const Vector &rhs) const;

  // Verification helpers on dense assembly.
  Matrix explicit_u() const;
  Matrix explicit_l() const;
  // 𝓛(μ)𝒫, the column-permuted pencil.
  Matrix permuted_pencil() const;
  // Column permutation: permuted column c is original column perm()[c].
  std::vector<Index> permutation() const;

  // log α^n + log det 𝓛(μ) + log sgn(𝒫)  and
  // log det R + n log det(M₁ − μN₁) + Σ_b k_b log det(E_b − μF_b).
  std::pair<Complex, Complex> log_det_sides() const;

private:
  // t = G22⁻¹ r for the rest-ordered vector r (length d − n).
  Vector solve_g22(const Vector &rest) const;
  // G12 w (top rows) for a rest-ordered vector w.
  Vector apply_g12(const Vector &rest) const;
  // G21 y (rest rows).
  Vector apply_g21(const Vector &y) const;

  const CorkPencil *p_;
  Complex mu_;
  Index pivot_ = 0;
  Complex alpha_ = 1.0;
  Vector f_;
  Matrix m1_;  // (k−1) x (k−1)
  Eigen::PartialPivLU<Matrix> m1_lu_;
  double m1_sigma_;
  std::vector<Eigen::PartialPivLU<Matrix>> e_lu_;
  Matrix r_;
  Eigen::PartialPivLU<Matrix> r_lu_;
  double rcond_ = 0.0;
};

// Rejects shifts near block poles (PoleShift) or at eigenvalues
// (ShiftIsEigenvalue), then factorizes.
ULFactors ul_factorize(const CorkPencil &pencil, Complex mu);

// Relative guard used for pole proximity.
inline constexpr double POLE_GUARD = 1e-10;

// log det via LU (complex log, phase included).
Complex log_det(const Matrix &a);

}  // namespace aaaeigs
