// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aaaeigs/expression.hpp"
#include "aaaeigs/region.hpp"

namespace aaaeigs
{

enum class BasisKind
{
  Monomial,
  Chebyshev,
};

// P(λ) = Σ_i (A_i − λB_i) f_i(λ) with f_0 ≡ 1 and (M − λN) f(λ) = 0.
struct PolynomialPart
{
  std::vector<Matrix> a;
  std::vector<Matrix> b;
  BasisKind basis = BasisKind::Monomial;
  // Chebyshev interval; T_i is evaluated at x = (2λ − lo − hi) / (hi − lo).
  double lo = -1.0;
  double hi = 1.0;

  Index k() const { return static_cast<Index>(a.size()); }
  Vector basis_values(Complex lambda) const;
  // (k−1) x k pencil whose null vector at λ is f(λ).
  Matrix basis_m() const;
  Matrix basis_n() const;
  Matrix evaluate(Complex lambda, Index n) const;
};

// (C − λD) = (C̃ − λD̃) Z̃ᴴ with Z̃ᴴZ̃ = I of width k.
struct LowRankFactors
{
  Matrix c;
  Matrix d;
  Matrix z;

  Index rank() const { return z.cols(); }
};

struct NonlinearTerm
{
  Matrix c;
  Matrix d;
  ScalarFunction g;
  std::optional<LowRankFactors> low_rank;
};

struct NepProblem
{
  std::string name = "problem";
  Index n = 0;
  PolynomialPart poly;
  std::vector<NonlinearTerm> terms;
  Region region;
  ParamTable params;  // parameter values bound into the term expressions

  Index size() const { return n; }
  // Throws on inconsistent matrix sizes or an empty polynomial part.
  void validate() const;
};

// A(λ) = P(λ) + Σ (C_i − λD_i) g_i(λ). Function failures name the term.
Matrix evaluate_nep(const NepProblem &p, Complex lambda);

// Z̃ spans row(C) + row(D), from the SVD of [Cᴴ Dᴴ] with cutoff
// rank_tol · σ_max. Full rank gives Z̃ = I.
NonlinearTerm low_rank_factorize(const NonlinearTerm &term, double rank_tol = 1e-12);

// 1-norm (maximum column sum).
double norm1(const Matrix &a);

}  // namespace aaaeigs
