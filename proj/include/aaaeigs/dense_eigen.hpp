// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "aaaeigs/common.hpp"

namespace aaaeigs
{

// Generalized eigenvalues of the pencil A − λB as (alpha, beta) pairs with
// λ = alpha / beta; beta = 0 for infinite eigenvalues.
struct PencilEigen
{
  Vector alpha;
  Vector beta;
  Matrix vectors;  // right eigenvectors, empty unless requested

  // alpha / beta, with infinity where |beta| <= cutoff * |alpha|.
  Vector values(double cutoff = 0.0) const;
};

PencilEigen generalized_eigen(const Matrix &a, const Matrix &b, bool want_vectors = false);

}  // namespace aaaeigs
