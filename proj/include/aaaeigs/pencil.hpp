// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <vector>

#include "aaaeigs/approximate.hpp"

namespace aaaeigs
{

enum class PencilVariant
{
  Full,             // one block per term, Z = I
  SharedCollapsed,  // one block per fit group, Z = I
  Trimmed,          // one block per term with its low-rank Z̃
};

PencilVariant parse_pencil_variant(std::string_view name);
const char *to_string(PencilVariant v);

struct PencilTerm
{
  Index term = 0;  // index into the problem's term list
  Vector a;        // length ℓ of the owning block
  Matrix c;        // n x k_b
  Matrix d;        // n x k_b
};

// Realization block with unknowns u_0..u_{ℓ−1}, each of length k_b:
// rows −b_r Zᴴ y_0 + Σ_j (E − λF)_{rj} u_j = 0.
struct PencilBlock
{
  Matrix e;
  Matrix f;
  Vector b;
  Matrix z;  // n x k_b orthonormal columns
  bool identity_z = false;
  std::vector<PencilTerm> terms;
  Index group = 0;
  Index offset = 0;  // position of u_0 in the pencil vector
  std::vector<Complex> poles;

  Index ell() const { return e.rows(); }
  Index width() const { return z.cols(); }
  Index size() const { return ell() * width(); }
};

// 𝓛(λ) = 𝒜 − λℬ acting on [y_0; …; y_{k−1}; u-blocks].
//
// Rows: top n rows Σ(A_i − λB_i) y_i + Σ_t (C_t − λD_t) Σ_j a_{tj} u_j; then
// ((M − λN) ⊗ I_n) y; then one row group per block.
class CorkPencil
{
public:
  PencilVariant variant = PencilVariant::Full;
  Index n = 0;
  std::vector<Matrix> a;
  std::vector<Matrix> b;
  Matrix m;   // (k−1) x k
  Matrix nn;  // (k−1) x k
  std::vector<PencilBlock> blocks;
  double diameter = 1.0;

  Index k() const { return static_cast<Index>(a.size()); }
  Index dimension() const;

  Vector apply_a(const Vector &x) const;
  Vector apply_b(const Vector &x) const;
  Vector apply(Complex lambda, const Vector &x) const;

  // Dense 𝒜 and ℬ; refuse above `guard`.
  Matrix assemble_a(Index guard = 2000) const;
  Matrix assemble_b(Index guard = 2000) const;

  // f(λ) from the null vector of M − λN with f_0 = 1.
  Vector basis_values(Complex lambda) const;
  // R(λ) built from the pencil's own blocks.
  Matrix evaluate_r(Complex lambda) const;
  // Every block pole, deduplicated by block.
  std::vector<Complex> poles() const;
  // Distance from λ to the nearest block pole (infinity without poles).
  double pole_distance(Complex lambda) const;

private:
  Vector apply_impl(const Vector &x, bool b_part) const;
  Matrix assemble_impl(bool b_part, Index guard) const;
};

CorkPencil build_pencil(const RationalNep &r, PencilVariant variant);

// Ψ(λ)x: y_i = f_i(λ) x and u_b = R_b(λ) ⊗ Z_bᴴ x.
Vector expand_eigenvector(const CorkPencil &p, const Vector &x, Complex lambda);

// Leading n-block, unit 2-norm, largest-magnitude entry real positive.
Vector recover_eigenvector(const CorkPencil &p, const Vector &z);

}  // namespace aaaeigs
