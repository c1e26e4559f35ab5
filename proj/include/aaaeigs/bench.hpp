// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>

#include "aaaeigs/config.hpp"

namespace aaaeigs
{

// Registered scalar functions for "builtin:<name>" in config files:
// gun_sqrt1, gun_sqrt2, beam_modulus, car_hK, car_hM, car_lam_hM.
std::optional<ScalarFunction> builtin_function(std::string_view name);

namespace bench
{

inline constexpr double GUN_SIGMA1 = 0.0;
inline constexpr double GUN_SIGMA2 = 108.8774;
inline constexpr double GUN_CENTER = 62500.0;
inline constexpr double GUN_RADIUS = 50000.0;

// Symmetric positive semidefinite n x n matrix of the given rank, with
// eigenvalues drawn from [0.5, 1.5] · scale.
Matrix random_spsd(Index n, Index rank, double scale, std::mt19937_64 &rng);

// Upper half disk around 62500 with radius 50000; 500 random interior and
// 500 boundary points.
Region gun_region(std::uint64_t seed = 1);
std::vector<ScalarFunction> gun_functions();
// K − λM + i√(λ − σ₁²) W₁ + i√(λ − σ₂²) W₂ with W₁, W₂ of rank max(1, n/10).
std::shared_ptr<NepProblem> gun_analog(Index n = 60, std::uint64_t seed = 1);
// Three real shifts across the disk and two inside the upper half.
std::vector<Complex> gun_shifts();

ScalarFunction beam_modulus();
// 10⁴ equispaced points on [200, 30000].
Region beam_region();
// K − λ² M + h(λ) C, polynomial part in the monomial basis with k = 3.
std::shared_ptr<NepProblem> sandwich_beam(Index n = 24, std::uint64_t seed = 1);

struct CarFunctions
{
  ScalarFunction h_k;
  ScalarFunction h_m;
};
// Both functions of λ in Hz, evaluated at ω = 2πλ.
CarFunctions car_cavity_functions();
ParamTable car_parameters();
// Rectangle with corners 0 and 300 + i·top; random interior plus equispaced
// points on the real segment [1, 300].
Region car_region(double top, Index interior, Index edge, std::uint64_t seed = 1);
Region car_region_small(std::uint64_t seed = 1);
Region car_region_large(std::uint64_t seed = 1);
// K₀ + h_K K₁ − λ²(M₀ + h_M M₁).
std::shared_ptr<NepProblem> car_cavity(Index n = 20, std::uint64_t seed = 1, bool large = false);

// α_j equispaced on [−0.19, 22.3].
std::vector<double> branch_points(Index n_funcs);
// K − λM + Σ_j C_j exp(i√(λ − α_j)) with random C_j of rank 1 to 3, region
// [α₀, α_span] sampled at 2000 points. Terms carry low-rank factors.
std::shared_ptr<NepProblem> branch_chain(Index n = 8, Index n_funcs = 10, std::uint64_t seed = 1,
                                         Index span = 3);

// n = 1: (λ − 2) + sign · e^{−λ} on [0, 4].
std::shared_ptr<NepProblem> toy(double sign = 1.0);
// diag(1, 2, 3) − λI.
std::shared_ptr<NepProblem> linear_diag();

struct RandomSpec
{
  Index n = 6;
  Index k = 3;
  Index terms = 2;
  Index max_support = 6;
  bool chebyshev = false;
};
// Small dense problem with terms of mixed rank; the region is the square
// [−1, 1] × [−1, 1].
std::shared_ptr<NepProblem> random_small(const RandomSpec &spec, std::uint64_t seed);

// Problem plus default fitting and solver settings for the CLI built-ins:
// toy, toy-minus, linear, gun, beam, car, car-large, branch-chain, random.
ProblemConfig builtin_problem(std::string_view name, std::uint64_t seed = 1);
std::vector<std::string> builtin_names();

}  // namespace bench
}  // namespace aaaeigs
