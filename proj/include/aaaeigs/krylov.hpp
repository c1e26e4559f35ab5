// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "aaaeigs/pencil.hpp"

namespace aaaeigs
{

// 𝒜 V H̄ = ℬ V K̄ with K̄ = H̄ diag(σ) + T̄, T̄ column j = e_j.
struct KrylovState
{
  Matrix v;      // d x (j+1), or d x j after a breakdown
  Matrix h_bar;  // (j+1) x j, square after a breakdown
  Matrix k_bar;
  std::vector<Complex> shifts;  // shift used at each iteration
  Index iterations = 0;
  bool breakdown = false;
};

struct RitzPair
{
  Complex value;
  Vector x;  // recovered n-vector; empty when recovery failed
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
  Index first_converged = -1;  // iteration of the first crossing, tracked pairs only
};

struct KrylovOptions
{
  std::vector<Complex> shifts;
  Index max_iter = 60;
  double tol = 1e-10;
  Index track = 5;
  std::uint64_t seed = 1;
  std::optional<Vector> start;
  bool relative_residual = true;
  // Ritz pairs are only extracted (and residuals computed) when true.
  bool compute_ritz = true;
};

struct HistoryRow
{
  Index iteration;
  Index pair;
  Complex value;
  double residual;
};

struct KrylovResult
{
  KrylovState state;
  // history[j] holds the Ritz pairs after iteration j+1 (vectors dropped
  // except for the final iteration).
  std::vector<std::vector<RitzPair>> history;
  std::vector<RitzPair> final_pairs;
  std::vector<HistoryRow> tracked;  // convergence_history(history, track)
  std::vector<Complex> rejected_shifts;
};

// ρ = ‖A(λ)x‖₂ / (‖A(λ)‖₁ ‖x‖₂), or ‖A(λ)x‖₂ / ‖x‖₂ with relative = false.
double residual_norm(const NepProblem &p, Complex lambda, const Vector &x, bool relative = true);

KrylovResult rational_krylov(const CorkPencil &pencil, const NepProblem &problem,
                             const KrylovOptions &opts);

// The `top` pairs of the final iteration with the smallest residuals, followed
// backwards through earlier iterations by nearest Ritz value. Rows are sorted
// by (iteration, pair).
std::vector<HistoryRow> convergence_history(const std::vector<std::vector<RitzPair>> &history,
                                            Index top, double tol = 1e-10,
                                            std::vector<Index> *first_crossing = nullptr);

// ‖VᴴV − I‖_F and ‖𝒜VH̄ − ℬVK̄‖_F / ‖ℬVK̄‖_F.
double orthogonality_defect(const KrylovState &s);
double recurrence_residual(const CorkPencil &pencil, const KrylovState &s);

}  // namespace aaaeigs
