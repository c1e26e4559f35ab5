// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <random>

#include "aaaeigs/approximate.hpp"
#include "aaaeigs/bench.hpp"
#include "aaaeigs/dense_eigen.hpp"
#include "aaaeigs/pencil.hpp"
#include "aaaeigs/ul_factor.hpp"

namespace aaaeigs::testing
{

inline Vector random_vector(Index n, std::mt19937_64 &rng)
{
  std::normal_distribution<double> d;
  Vector v(n);
  for (Index i = 0; i < n; ++i)
  {
    const double re = d(rng);
    v(i) = Complex(re, d(rng));
  }
  return v;
}

inline double rel_gap(Complex a, Complex b)
{
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

// Small random problem of the kind used by the linearization checks.
inline bench::RandomSpec random_spec(std::uint64_t seed)
{
  std::mt19937_64 rng(seed * 7919 + 3);
  bench::RandomSpec s;
  s.n = std::uniform_int_distribution<Index>(2, 8)(rng);
  s.k = std::uniform_int_distribution<Index>(1, 4)(rng);
  s.terms = std::uniform_int_distribution<Index>(1, 3)(rng);
  s.max_support = 6;
  s.chebyshev = seed % 3 == 0;
  return s;
}

inline RationalNep random_rational(std::uint64_t seed, ApproxMode mode = ApproxMode::PerFunction)
{
  const auto spec = random_spec(seed);
  ApproxOptions opts;
  opts.mode = mode;
  opts.max_degree = spec.max_support - 1;
  opts.test_count = 50;
  return approximate(bench::random_small(spec, seed), opts);
}

// Newton on log det R: each step divides by tr(R⁻¹ R').
inline Complex newton_det_root(const CorkPencil &p, Complex z, int max_steps = 50)
{
  for (int it = 0; it < max_steps; ++it)
  {
    const double h = 1e-6 * std::max(1.0, std::abs(z));
    const Matrix r = p.evaluate_r(z);
    const Matrix dr = (p.evaluate_r(z + h) - p.evaluate_r(z - h)) / (2.0 * h);
    const Complex tr = r.partialPivLu().solve(dr).trace();
    const Complex step = 1.0 / tr;
    z -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z)))
    {
      break;
    }
  }
  return z;
}

}  // namespace aaaeigs::testing

namespace aaaeigs::testing
{

// Finite pencil eigenvalues with |λ| ≤ 1e13 · diameter.
inline std::vector<Complex> finite_eigenvalues(const CorkPencil &pen)
{
  const auto eig = generalized_eigen(pen.assemble_a(), pen.assemble_b(), false);
  std::vector<Complex> out;
  for (auto lam : eig.values())
  {
    if (std::isfinite(lam.real()) && std::isfinite(lam.imag()) && std::abs(lam) <= 1e13 * pen.diameter)
    {
      out.push_back(lam);
    }
  }
  return out;
}

}  // namespace aaaeigs::testing
