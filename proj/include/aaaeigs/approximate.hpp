// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <vector>

#include "aaaeigs/aaa.hpp"
#include "aaaeigs/nep_problem.hpp"
#include "aaaeigs/rational_forms.hpp"

namespace aaaeigs
{

enum class ApproxMode
{
  PerFunction,
  SetValued,
  Grouped,
};

ApproxMode parse_approx_mode(std::string_view name);
const char *to_string(ApproxMode mode);

struct ApproxOptions
{
  ApproxMode mode = ApproxMode::SetValued;
  double tol = 1e-13;
  Index max_degree = 100;
  bool cleanup = true;
  // Partition of term indices, used by ApproxMode::Grouped.
  std::vector<std::vector<Index>> groups;
  Index test_count = 1000;
  // Seed of the held-out test set; 0 means region seed + 1.
  std::uint64_t test_seed = 0;
};

// One rational fit shared by several terms, realized once as (E − λF, b).
struct FitGroup
{
  std::vector<Index> terms;  // fit row r approximates terms[r]
  BarycentricRational fit;
  Matrix e;
  Matrix f;
  Vector b;

  Index size() const { return e.rows(); }
};

struct RationalTerm
{
  Index group = 0;
  Index row = 0;  // row of the group's fit
  Vector a;       // r(λ) = aᵀ (E − λF)⁻¹ b
};

struct ErrorReport
{
  double e_f = 0.0;
  double e_m = 0.0;
  Index test_points = 0;
  Index skipped = 0;
  std::vector<Index> degrees;  // pole count m − 1 per group
  bool converged = true;
};

struct RationalNep
{
  std::shared_ptr<const NepProblem> problem;
  std::vector<FitGroup> groups;
  std::vector<RationalTerm> terms;  // parallel to problem->terms
  ErrorReport report;

  const NepProblem &nep() const { return *problem; }
  // Σ ℓ_i counting a shared realization once per member term.
  Index realization_size_full() const;
  // Σ ℓ counting each group once.
  Index realization_size_collapsed() const;
  Index total_degree() const;

  // r_t(λ) through the state-space realization.
  Complex eval_term(Index term, Complex lambda) const;
  // r_t(λ) through the barycentric form.
  Complex eval_term_barycentric(Index term, Complex lambda) const;
  // Poles of every group fit, tagged with the group index.
  std::vector<std::pair<Complex, Index>> poles() const;
};

// Wraps explicit fits; `fits[g].first` lists the terms fitted by row of
// `fits[g].second`. Every term must appear exactly once.
RationalNep make_rational_nep(std::shared_ptr<const NepProblem> p,
                              std::vector<std::pair<std::vector<Index>, BarycentricRational>> fits);

RationalNep approximate(std::shared_ptr<const NepProblem> p, const ApproxOptions &opts = {});

// R(λ) = P(λ) + Σ (C_t − λD_t) a_tᵀ (E − λF)⁻¹ b.
Matrix evaluate_rational(const RationalNep &r, Complex lambda);
// Same with r_t evaluated in barycentric form.
Matrix evaluate_rational_barycentric(const RationalNep &r, Complex lambda);

// Relative errors over test points; points where A or R cannot be evaluated
// are skipped and counted.
ErrorReport approximation_errors(const NepProblem &p, const RationalNep &r,
                                 const SampleSet &test);

// g_t(λ) and ‖A(λ)‖₁ on a test set, shared by every fit of one problem.
struct ErrorBaseline
{
  std::vector<Complex> points;  // points where A and every g are finite
  Matrix g;                     // terms x points
  RealVector norm_a;
  Index skipped = 0;
};

ErrorBaseline error_baseline(const NepProblem &p, const SampleSet &test);
ErrorReport approximation_errors(const NepProblem &p, const RationalNep &r,
                                 const ErrorBaseline &base);

// The held-out test set selected by `opts` (test_count points, test_seed).
SampleSet approximation_test_set(const NepProblem &p, const ApproxOptions &opts);

}  // namespace aaaeigs
