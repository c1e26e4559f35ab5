// SPDX-License-Identifier: Apache-2.0

#include "aaaeigs/krylov.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#include "aaaeigs/dense_eigen.hpp"
#include "aaaeigs/ul_factor.hpp"

namespace aaaeigs
{

namespace
{

constexpr double BREAKDOWN_TOL = 1e-14;

Vector random_start(Index d, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  Vector v(d);
  for (Index i = 0; i < d; ++i)
  {
    const double re = n(rng);
    v(i) = Complex(re, n(rng));
  }
  return v / v.norm();
}

std::vector<RitzPair> extract_ritz(const CorkPencil &pencil, const NepProblem &problem,
                                   const KrylovState &s, const KrylovOptions &opts)
{
  const Index j = s.iterations;
  const Matrix hj = s.h_bar.topLeftCorner(j, j);
  const Matrix kj = s.k_bar.topLeftCorner(j, j);
  // V_{j+1} H̄_j, or V_j H_j after a breakdown.
  const Index rows = s.breakdown ? j : j + 1;
  const Matrix vh = s.v.leftCols(rows) * s.h_bar.topLeftCorner(rows, j);
  const auto eig = generalized_eigen(kj, hj, true);
  std::vector<RitzPair> out;
  for (Index i = 0; i < j; ++i)
  {
    RitzPair rp;
    if (eig.beta(i) == 0.0)
    {
      rp.value = Complex(std::numeric_limits<double>::infinity(), 0.0);
      out.push_back(std::move(rp));
      continue;
    }
    rp.value = eig.alpha(i) / eig.beta(i);
    const Vector y = vh * eig.vectors.col(i);
    try
    {
      rp.x = recover_eigenvector(pencil, y);
      rp.residual = residual_norm(problem, rp.value, rp.x, opts.relative_residual);
    }
    catch (const Error &)
    {
      rp.x = Vector();
      rp.residual = std::numeric_limits<double>::infinity();
    }
    if (!std::isfinite(rp.residual))
    {
      rp.residual = std::numeric_limits<double>::infinity();
    }
    rp.converged = rp.residual <= opts.tol;
    out.push_back(std::move(rp));
  }
  // Stable order: by residual, then by value.
  std::stable_sort(out.begin(), out.end(), [](const RitzPair &a, const RitzPair &b) {
    if (a.residual != b.residual)
    {
      return a.residual < b.residual;
    }
    if (a.value.real() != b.value.real())
    {
      return a.value.real() < b.value.real();
    }
    return a.value.imag() < b.value.imag();
  });
  return out;
}

}  // namespace

double residual_norm(const NepProblem &p, Complex lambda, const Vector &x, bool relative)
{
  const double nx = x.norm();
  if (nx == 0.0)
  {
    throw Error(ErrorKind::InvalidInput, "residual of a zero vector");
  }
  const Matrix a = evaluate_nep(p, lambda);
  const double r = (a * x).norm() / nx;
  if (!relative)
  {
    return r;
  }
  const double na = norm1(a);
  return na > 0.0 ? r / na : r;
}

double orthogonality_defect(const KrylovState &s)
{
  const Index c = s.h_bar.rows();
  const Matrix v = s.v.leftCols(c);
  return (v.adjoint() * v - Matrix::Identity(c, c)).norm();
}

double recurrence_residual(const CorkPencil &pencil, const KrylovState &s)
{
  const Index c = s.h_bar.rows();
  if (s.iterations == 0)
  {
    return 0.0;
  }
  const Matrix vh = s.v.leftCols(c) * s.h_bar;
  const Matrix vk = s.v.leftCols(c) * s.k_bar;
  Matrix av(vh.rows(), vh.cols()), bv(vk.rows(), vk.cols());
  for (Index j = 0; j < vh.cols(); ++j)
  {
    av.col(j) = pencil.apply_a(vh.col(j));
    bv.col(j) = pencil.apply_b(vk.col(j));
  }
  const double denom = bv.norm();
  return denom > 0.0 ? (av - bv).norm() / denom : (av - bv).norm();
}

std::vector<HistoryRow> convergence_history(const std::vector<std::vector<RitzPair>> &history,
                                            Index top, double tol,
                                            std::vector<Index> *first_crossing)
{
  std::vector<HistoryRow> rows;
  if (history.empty())
  {
    return rows;
  }
  const auto &last = history.back();
  const Index count = std::min<Index>(top, static_cast<Index>(last.size()));
  if (first_crossing)
  {
    first_crossing->assign(static_cast<std::size_t>(count), -1);
  }
  for (Index p = 0; p < count; ++p)
  {
    Complex target = last[static_cast<std::size_t>(p)].value;
    std::vector<HistoryRow> trail;
    for (std::size_t it = history.size(); it-- > 0;)
    {
      const auto &pairs = history[it];
      if (pairs.empty())
      {
        break;
      }
      std::size_t best = 0;
      double dist = std::numeric_limits<double>::infinity();
      for (std::size_t q = 0; q < pairs.size(); ++q)
      {
        const double d = std::abs(pairs[q].value - target);
        if (d < dist)
        {
          dist = d;
          best = q;
        }
      }
      if (!std::isfinite(dist))
      {
        break;
      }
      target = pairs[best].value;
      trail.push_back({static_cast<Index>(it) + 1, p, target, pairs[best].residual});
    }
    std::reverse(trail.begin(), trail.end());
    if (first_crossing)
    {
      for (const auto &row : trail)
      {
        if (row.residual <= tol)
        {
          (*first_crossing)[static_cast<std::size_t>(p)] = row.iteration;
          break;
        }
      }
    }
    rows.insert(rows.end(), trail.begin(), trail.end());
  }
  std::stable_sort(rows.begin(), rows.end(), [](const HistoryRow &a, const HistoryRow &b) {
    return a.iteration != b.iteration ? a.iteration < b.iteration : a.pair < b.pair;
  });
  return rows;
}

KrylovResult rational_krylov(const CorkPencil &pencil, const NepProblem &problem,
                             const KrylovOptions &opts)
{
  if (opts.max_iter < 1)
  {
    throw Error(ErrorKind::Config, "max_iter must be at least 1");
  }
  if (opts.shifts.empty())
  {
    throw Error(ErrorKind::Config, "no shifts given");
  }
  KrylovResult res;
  // Factor each distinct shift once; drop shifts inside the pole guard.
  std::vector<Complex> shifts;
  std::vector<std::unique_ptr<ULFactors>> factors;
  std::string last_rejection;
  for (Complex sigma : opts.shifts)
  {
    if (std::find(shifts.begin(), shifts.end(), sigma) != shifts.end() ||
        std::find(res.rejected_shifts.begin(), res.rejected_shifts.end(), sigma) !=
            res.rejected_shifts.end())
    {
      if (std::find(shifts.begin(), shifts.end(), sigma) != shifts.end())
      {
        shifts.push_back(sigma);
        factors.push_back(nullptr);
      }
      continue;
    }
    try
    {
      factors.push_back(std::make_unique<ULFactors>(ul_factorize(pencil, sigma)));
      shifts.push_back(sigma);
    }
    catch (const Error &e)
    {
      if (e.kind() == ErrorKind::PoleShift)
      {
        last_rejection = e.what();
        log::warn("rejecting " + last_rejection);
        res.rejected_shifts.push_back(sigma);
        continue;
      }
      if (e.kind() != ErrorKind::ShiftIsEigenvalue)
      {
        throw;
      }
      // The shift is an eigenvalue: nudge it off and retry once.
      const Complex moved = sigma + 1e-8 * pencil.diameter * Complex(1.0, 1.0);
      log::warn("shift " + format_complex(sigma) + " is an eigenvalue; using " +
                format_complex(moved));
      factors.push_back(std::make_unique<ULFactors>(ul_factorize(pencil, moved)));
      shifts.push_back(moved);
    }
  }
  if (shifts.empty())
  {
    std::ostringstream msg;
    msg << "every shift lies within the pole guard; last: " << last_rejection;
    throw Error(ErrorKind::Config, msg.str());
  }
  // Repeated shifts point to the first factorization of the same value.
  std::vector<const ULFactors *> lookup;
  for (std::size_t i = 0; i < shifts.size(); ++i)
  {
    const ULFactors *f = factors[i].get();
    for (std::size_t q = 0; !f && q < i; ++q)
    {
      if (shifts[q] == shifts[i] && factors[q])
      {
        f = factors[q].get();
      }
    }
    lookup.push_back(f);
  }

  const Index d = pencil.dimension();
  const Index m = std::min<Index>(opts.max_iter, d);
  KrylovState &s = res.state;
  s.v = Matrix::Zero(d, m + 1);
  s.h_bar = Matrix::Zero(m + 1, m);
  s.k_bar = Matrix::Zero(m + 1, m);
  Vector v1 = opts.start ? *opts.start : random_start(d, opts.seed);
  if (v1.size() != d || v1.norm() == 0.0)
  {
    throw Error(ErrorKind::InvalidInput, "start vector has the wrong length or is zero");
  }
  s.v.col(0) = v1 / v1.norm();

  for (Index j = 0; j < m; ++j)
  {
    const std::size_t si = static_cast<std::size_t>(j) % shifts.size();
    const Complex sigma = shifts[si];
    Vector w = lookup[si]->solve(pencil.apply_b(s.v.col(j)));
    const double entry = w.norm();
    Vector h = Vector::Zero(j + 1);
    for (int pass = 0; pass < 2; ++pass)
    {
      const Vector c = s.v.leftCols(j + 1).adjoint() * w;
      w -= s.v.leftCols(j + 1) * c;
      h += c;
    }
    const double beta = w.norm();
    s.h_bar.col(j).head(j + 1) = h;
    s.h_bar(j + 1, j) = beta;
    s.k_bar.col(j) = sigma * s.h_bar.col(j);
    s.k_bar(j, j) += 1.0;
    s.shifts.push_back(sigma);
    s.iterations = j + 1;
    const bool broke = beta <= BREAKDOWN_TOL * entry;
    if (!broke)
    {
      s.v.col(j + 1) = w / beta;
    }
    else
    {
      s.breakdown = true;
    }
    if (broke)
    {
      // Invariant subspace: keep the square j x j pair.
      s.v.conservativeResize(d, j + 1);
      s.h_bar.conservativeResize(j + 1, j + 1);
      s.k_bar.conservativeResize(j + 1, j + 1);
    }
    if (opts.compute_ritz)
    {
      res.history.push_back(extract_ritz(pencil, problem, s, opts));
      if (!broke && j + 1 < m)
      {
        continue;
      }
    }
    if (broke)
    {
      break;
    }
  }
  if (!s.breakdown)
  {
    s.v.conservativeResize(d, s.iterations + 1);
    s.h_bar.conservativeResize(s.iterations + 1, s.iterations);
    s.k_bar.conservativeResize(s.iterations + 1, s.iterations);
  }
  if (opts.compute_ritz && !res.history.empty())
  {
    std::vector<Index> first;
    res.tracked = convergence_history(res.history, opts.track, opts.tol, &first);
    res.final_pairs = res.history.back();
    for (std::size_t p = 0; p < res.final_pairs.size(); ++p)
    {
      if (p < first.size())
      {
        res.final_pairs[p].first_converged = first[p];
      }
    }
    // Keep vectors only for the final iteration.
    for (std::size_t it = 0; it + 1 < res.history.size(); ++it)
    {
      for (auto &rp : res.history[it])
      {
        rp.x = Vector();
      }
    }
  }
  return res;
}

}  // namespace aaaeigs
