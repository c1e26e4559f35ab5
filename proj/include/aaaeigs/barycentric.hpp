// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "aaaeigs/common.hpp"

namespace aaaeigs
{

// Discretization of the approximation region. Points are pairwise distinct.
class SampleSet
{
public:
  SampleSet() = default;
  explicit SampleSet(std::vector<Complex> points);

  Index size() const { return static_cast<Index>(points_.size()); }
  const std::vector<Complex> &points() const { return points_; }
  Complex operator[](Index i) const { return points_[static_cast<std::size_t>(i)]; }

  bool active(Index i) const { return active_[static_cast<std::size_t>(i)]; }
  Index active_count() const { return active_count_; }
  void deactivate(Index i);
  void reset();

  // Largest pairwise distance estimated from the bounding box diagonal.
  double diameter() const;

private:
  std::vector<Complex> points_;
  std::vector<bool> active_;
  Index active_count_ = 0;
};

// r_i(λ) = Σ_j values(i,j) ω_j / (λ − z_j)  /  Σ_j ω_j / (λ − z_j).
//
// `values` holds the unscaled samples g_i(z_j). `scale(i)` is the factor
// 1/max|g_i| that was applied to function i while fitting (1 for a function
// that is zero on the samples). r_i is linear in the values, so storing
// unscaled data is the same as storing scaled data and re-applying the factor.
struct BarycentricRational
{
  std::vector<Complex> support;
  Vector weights;
  Matrix values;         // s x m
  RealVector scale;      // s
  bool converged = false;
  double max_error = 0;  // final scaled max deviation on the sample set
  std::vector<Index> support_index;  // positions of the support points in the sample set

  Index size() const { return static_cast<Index>(support.size()); }
  Index functions() const { return values.rows(); }
  Index poles_count() const { return size() > 0 ? size() - 1 : 0; }
};

}  // namespace aaaeigs
