// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "aaaeigs/config.hpp"
#include "aaaeigs/krylov.hpp"

namespace aaaeigs
{

struct CheckResult
{
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
  bool skipped = false;
  std::string note;
};

struct VerifyOptions
{
  // Dense assembly limit; larger pencil variants are skipped.
  Index guard = 2000;
  std::uint64_t seed = 1;
  Index krylov_iters = 30;
  // Applied to the fitted approximation before any check runs.
  std::function<void(RationalNep &)> tamper;
};

// Invariant suite on one problem: interpolation, barycentric/state-space
// equivalence, pencil action, UL product, determinant identity, shifted
// solve, eigenvalue agreement across pencil variants, Krylov structure.
// Throws DimensionGuard when no pencil variant fits under the guard.
std::vector<CheckResult> verify_problem(const ProblemConfig &cfg, const VerifyOptions &opts = {});

bool all_passed(const std::vector<CheckResult> &checks);

// Max scaled deviation of each group fit from its functions on the sample
// set, over non-support points.
double interpolation_deviation(const RationalNep &r);

// Max relative |r_bary − r_ss| / |r_bary| over the given points and all terms.
double state_space_gap(const RationalNep &r, const SampleSet &points);

}  // namespace aaaeigs
