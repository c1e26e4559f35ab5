// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "aaaeigs/barycentric.hpp"
#include "aaaeigs/loewner.hpp"

namespace aaaeigs
{

// Snapshot handed to AaaOptions::observer after every weight solve.
struct AaaStep
{
  Index support_count;
  const LoewnerAccumulator &accumulator;
  const Vector &weights;
  // Support positions in the (finite-filtered) sample set, in selection order.
  const std::vector<Index> &support_index;
  // Rows of the accumulator: row r is (function row_function[r], sample row_sample[r]).
  const std::vector<Index> &row_function;
  const std::vector<Index> &row_sample;
  double max_error;
};

struct AaaOptions
{
  double tol = 1e-13;
  Index max_degree = 100;
  // Froissart-doublet cleanup after the greedy loop.
  bool cleanup = true;
  double weight_floor = 1e-13;
  std::function<void(const AaaStep &)> observer;
};

// Scalar AAA: a single function through the set-valued driver.
BarycentricRational aaa(const ScalarFn &g, const SampleSet &z, const AaaOptions &opts = {});

// Shared support points and weights for all functions; each function is
// scaled by 1 / max_j |g_i(z_j)| before fitting.
BarycentricRational set_valued_aaa(std::span<const ScalarFn> gs, const SampleSet &z,
                                   const AaaOptions &opts = {});

// Core driver on pre-sampled values: samples(i, k) = g_i(z_k).
BarycentricRational set_valued_aaa_sampled(const Matrix &samples, const SampleSet &z,
                                           const AaaOptions &opts = {});

// Evaluates every function on every sample point (s x M).
Matrix sample_functions(std::span<const ScalarFn> gs, const SampleSet &z);

// Drops support points whose weight is below weight_floor * max|ω| and
// re-solves the weights once on the remaining support. `samples` are the
// unscaled values on `z` (s x M) that produced `r`.
BarycentricRational remove_doublets(const BarycentricRational &r, const SampleSet &z,
                                    const Matrix &samples, double weight_floor = 1e-13);

// Stacked Loewner matrix of all functions (rows function-major) restricted to
// samples not in `support_index`. `scaled` are s x M function values.
Matrix explicit_loewner(const SampleSet &z, const Matrix &scaled,
                        std::span<const Index> support_index);

}  // namespace aaaeigs
