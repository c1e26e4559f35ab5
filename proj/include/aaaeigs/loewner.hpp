// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "aaaeigs/common.hpp"

namespace aaaeigs
{

// Economy QR of a tall Loewner matrix that loses rows and gains one column per
// AAA step.
//
// The factorization is kept as L = (Q̂ S) H where Q̂ is the stored tall factor,
// S the accumulated small m x m correction, and H the m x m small factor. When
// rows r are deleted, Q̂ S is no longer orthonormal; with Q_r the deleted rows
// of Q̂ S, the Cholesky factor I − Q_rᴴ Q_r = Uᴴ U restores it through
// S ← S U⁻¹ and H ← U H, without touching the tall factor beyond dropping rows.
class LoewnerAccumulator
{
public:
  explicit LoewnerAccumulator(Index rows = 0);

  Index rows() const { return rows_; }
  Index cols() const { return h_.cols(); }

  // Deletes `removed_rows` (indices into the current row numbering) and then
  // appends `column`, whose length must be rows() - removed_rows.size().
  void push_support(const Eigen::Ref<const Vector> &column,
                    std::span<const Index> removed_rows);

  // Orthonormal basis Q = Q̂ S of the column space.
  Matrix basis() const;
  const Matrix &stored_basis() const { return q_; }
  const Matrix &s_accum() const { return s_; }
  const Matrix &small_factor() const { return h_; }
  // Q H, i.e. the current Loewner matrix up to rounding.
  Matrix reconstruct() const;

  // Number of times the row-deletion downdate fell back to a fresh QR.
  Index refactorizations() const { return refactorizations_; }

private:
  void remove_rows(std::span<const Index> removed_rows);
  void append_column(Vector column);
  void refactorize(const Matrix &loewner);

  Index rows_ = 0;
  Matrix q_;
  Matrix s_;
  Matrix h_;
  Index refactorizations_ = 0;
};

// Right singular vector of the small factor for its smallest singular value,
// unit 2-norm, phase chosen so the largest-magnitude entry is real positive.
Vector solve_weights(const LoewnerAccumulator &acc);

// Same convention applied to an arbitrary matrix (used by the doublet cleanup).
Vector min_right_singular_vector(const Matrix &a);

// Rotates v so that its largest-magnitude entry (first on ties) is real positive.
void fix_phase(Vector &v);

}  // namespace aaaeigs
