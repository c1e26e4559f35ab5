// SPDX-License-Identifier: Apache-2.0

#include "aaaeigs/aaa.hpp"

#include <algorithm>
#include <sstream>

namespace aaaeigs
{

namespace
{

// Values of the scaled approximants at the sample positions `at`.
Matrix eval_on_samples(const SampleSet &z, std::span<const Index> at, const Matrix &scaled,
                       std::span<const Index> support, const Vector &weights)
{
  const Index m = static_cast<Index>(support.size());
  const Index s = scaled.rows();
  Matrix out(s, static_cast<Index>(at.size()));
  Matrix wg(s, m);
  for (Index j = 0; j < m; ++j)
  {
    wg.col(j) = scaled.col(support[static_cast<std::size_t>(j)]) * weights(j);
  }
  Vector c(m);
  for (std::size_t a = 0; a < at.size(); ++a)
  {
    const Complex lam = z[at[a]];
    for (Index j = 0; j < m; ++j)
    {
      c(j) = 1.0 / (lam - z[support[static_cast<std::size_t>(j)]]);
    }
    const Complex den = (weights.array() * c.array()).sum();
    out.col(static_cast<Index>(a)) = (wg * c) / den;
  }
  return out;
}

struct Prepared
{
  SampleSet z;
  std::vector<Index> original_index;  // filtered position -> caller position
  Matrix samples;                     // unscaled, finite
  Matrix scaled;                      // zero functions left as zero rows
  RealVector scale;
  std::vector<Index> fitted;          // functions with nonzero data
};

Prepared prepare(const Matrix &samples, const SampleSet &z)
{
  if (samples.rows() < 1)
  {
    throw Error(ErrorKind::InvalidInput, "set-valued AAA needs at least one function");
  }
  if (samples.cols() != z.size())
  {
    throw Error(ErrorKind::InvalidInput, "sample matrix width does not match sample set");
  }
  std::vector<Index> keep;
  for (Index k = 0; k < z.size(); ++k)
  {
    bool finite = is_finite(z[k]);
    for (Index i = 0; i < samples.rows() && finite; ++i)
    {
      finite = is_finite(samples(i, k));
    }
    if (finite)
    {
      keep.push_back(k);
    }
  }
  if (keep.empty())
  {
    throw Error(ErrorKind::InvalidInput, "no finite samples on the sample set");
  }
  if (keep.size() < 2)
  {
    throw Error(ErrorKind::InvalidInput, "fewer than 2 finite samples on the sample set");
  }
  if (static_cast<Index>(keep.size()) < z.size())
  {
    std::ostringstream msg;
    msg << "dropped " << z.size() - static_cast<Index>(keep.size())
        << " sample points with non-finite function values";
    log::warn(msg.str());
  }
  Prepared p;
  std::vector<Complex> pts;
  pts.reserve(keep.size());
  for (Index k : keep)
  {
    pts.push_back(z[k]);
  }
  p.z = SampleSet(std::move(pts));
  p.original_index = keep;
  p.samples = samples(Eigen::all, keep);
  p.scaled = p.samples;
  p.scale = RealVector::Ones(samples.rows());
  for (Index i = 0; i < samples.rows(); ++i)
  {
    const double mx = p.samples.row(i).cwiseAbs().maxCoeff();
    if (mx == 0.0)
    {
      log::warn("function " + std::to_string(i) + " is identically zero on the sample set; "
                "represented as r = 0");
      continue;
    }
    p.scale(i) = 1.0 / mx;
    p.scaled.row(i) *= p.scale(i);
    p.fitted.push_back(i);
  }
  return p;
}

BarycentricRational assemble(const Prepared &p, const std::vector<Index> &support,
                             const Vector &weights)
{
  BarycentricRational r;
  r.weights = weights;
  r.scale = p.scale;
  r.values = p.samples(Eigen::all, support);
  for (Index k : support)
  {
    r.support.push_back(p.z[k]);
  }
  r.support_index = support;
  return r;
}

double max_deviation(const SampleSet &z, const Matrix &scaled, std::span<const Index> support,
                     const Vector &weights)
{
  std::vector<Index> rest;
  for (Index k = 0; k < z.size(); ++k)
  {
    if (std::find(support.begin(), support.end(), k) == support.end())
    {
      rest.push_back(k);
    }
  }
  if (rest.empty())
  {
    return 0.0;
  }
  const Matrix r = eval_on_samples(z, rest, scaled, support, weights);
  return (scaled(Eigen::all, rest) - r).cwiseAbs().maxCoeff();
}

BarycentricRational fit(const Prepared &p, const AaaOptions &opts)
{
  const SampleSet &z = p.z;
  const Index total = z.size();
  // Only the nonzero functions take part in the fit.
  const Matrix g = p.scaled(p.fitted, Eigen::all);
  const Index s = g.rows();

  std::vector<Index> support;
  Vector weights;
  std::vector<Index> active(static_cast<std::size_t>(total));
  for (Index k = 0; k < total; ++k)
  {
    active[static_cast<std::size_t>(k)] = k;
  }

  if (s == 0)
  {
    // Every function is zero: a single support point reproduces r = 0.
    support.push_back(0);
    weights = Vector::Ones(1);
    auto r = assemble(p, support, weights);
    r.converged = true;
    r.max_error = 0.0;
    return r;
  }

  // Residual used for the first pick: deviation from the per-function mean.
  Matrix residual = g.colwise() - g.rowwise().mean();
  LoewnerAccumulator acc(s * total);
  const Index max_support = std::max<Index>(1, opts.max_degree + 1);
  bool converged = false;
  double max_error = residual.cwiseAbs().maxCoeff();

  while (true)
  {
    if (static_cast<Index>(support.size()) >= max_support || active.size() <= 1)
    {
      break;
    }
    // Greedy pick over active samples; the first index wins ties.
    const Index ma = static_cast<Index>(active.size());
    Index best_pos = 0;
    double best = -1.0;
    for (Index a = 0; a < ma; ++a)
    {
      const double v = residual.col(a).cwiseAbs().maxCoeff();
      if (v > best)
      {
        best = v;
        best_pos = a;
      }
    }
    const Index pick = active[static_cast<std::size_t>(best_pos)];
    std::vector<Index> removed;
    removed.reserve(static_cast<std::size_t>(s));
    for (Index i = 0; i < s; ++i)
    {
      removed.push_back(i * ma + best_pos);
    }
    active.erase(active.begin() + best_pos);
    support.push_back(pick);

    const Index mb = ma - 1;
    Vector column(s * mb);
    const Complex zp = z[pick];
    for (Index i = 0; i < s; ++i)
    {
      for (Index a = 0; a < mb; ++a)
      {
        const Index k = active[static_cast<std::size_t>(a)];
        column(i * mb + a) = (g(i, k) - g(i, pick)) / (z[k] - zp);
      }
    }
    acc.push_support(column, removed);
    weights = support.size() == 1 ? Vector::Ones(1) : solve_weights(acc);

    const Matrix r = eval_on_samples(z, active, g, support, weights);
    residual = g(Eigen::all, active) - r;
    max_error = residual.size() > 0 ? residual.cwiseAbs().maxCoeff() : 0.0;

    if (opts.observer)
    {
      std::vector<Index> row_function(static_cast<std::size_t>(s * mb));
      std::vector<Index> row_sample(static_cast<std::size_t>(s * mb));
      for (Index row = 0; row < s * mb; ++row)
      {
        row_function[static_cast<std::size_t>(row)] = p.fitted[static_cast<std::size_t>(row / mb)];
        row_sample[static_cast<std::size_t>(row)] = active[static_cast<std::size_t>(row % mb)];
      }
      opts.observer(AaaStep{static_cast<Index>(support.size()), acc, weights, support,
                            row_function, row_sample, max_error});
    }
    if (max_error <= opts.tol)
    {
      converged = true;
      break;
    }
  }

  auto out = assemble(p, support, weights);
  out.converged = converged;
  out.max_error = max_error;
  return out;
}

void map_to_caller(BarycentricRational &r, const Prepared &p)
{
  for (auto &k : r.support_index)
  {
    k = p.original_index[static_cast<std::size_t>(k)];
  }
}

}  // namespace

Matrix sample_functions(std::span<const ScalarFn> gs, const SampleSet &z)
{
  Matrix out(static_cast<Index>(gs.size()), z.size());
  for (std::size_t i = 0; i < gs.size(); ++i)
  {
    for (Index k = 0; k < z.size(); ++k)
    {
      out(static_cast<Index>(i), k) = gs[i](z[k]);
    }
  }
  return out;
}

Matrix explicit_loewner(const SampleSet &z, const Matrix &scaled,
                        std::span<const Index> support_index)
{
  std::vector<Index> rest;
  for (Index k = 0; k < z.size(); ++k)
  {
    if (std::find(support_index.begin(), support_index.end(), k) == support_index.end())
    {
      rest.push_back(k);
    }
  }
  const Index s = scaled.rows();
  const Index mr = static_cast<Index>(rest.size());
  const Index m = static_cast<Index>(support_index.size());
  Matrix l(s * mr, m);
  for (Index j = 0; j < m; ++j)
  {
    const Index sj = support_index[static_cast<std::size_t>(j)];
    for (Index i = 0; i < s; ++i)
    {
      for (Index a = 0; a < mr; ++a)
      {
        const Index k = rest[static_cast<std::size_t>(a)];
        l(i * mr + a, j) = (scaled(i, k) - scaled(i, sj)) / (z[k] - z[sj]);
      }
    }
  }
  return l;
}

BarycentricRational remove_doublets(const BarycentricRational &r, const SampleSet &z,
                                    const Matrix &samples, double weight_floor)
{
  const double wmax = r.weights.cwiseAbs().maxCoeff();
  std::vector<Index> keep;
  for (Index j = 0; j < r.size(); ++j)
  {
    if (std::abs(r.weights(j)) >= weight_floor * wmax)
    {
      keep.push_back(j);
    }
  }
  if (static_cast<Index>(keep.size()) == r.size())
  {
    return r;
  }
  if (keep.empty())
  {
    log::warn("doublet cleanup would remove every support point; keeping the fit unchanged");
    return r;
  }
  const Prepared p = prepare(samples, z);
  auto to_filtered = [&](Index caller) -> Index {
    auto it = std::lower_bound(p.original_index.begin(), p.original_index.end(), caller);
    if (it == p.original_index.end() || *it != caller)
    {
      throw Error(ErrorKind::InvalidInput, "support point is not a finite sample of the set");
    }
    return static_cast<Index>(it - p.original_index.begin());
  };
  std::vector<Index> support;
  for (Index j : keep)
  {
    support.push_back(to_filtered(r.support_index[static_cast<std::size_t>(j)]));
  }
  std::ostringstream msg;
  msg << "removed " << r.size() - static_cast<Index>(keep.size())
      << " support points with negligible weight";
  log::info(msg.str());

  Vector weights = Vector::Ones(1);
  if (support.size() > 1)
  {
    weights = min_right_singular_vector(explicit_loewner(p.z, p.scaled, support));
  }
  auto out = assemble(p, support, weights);
  out.max_error = max_deviation(p.z, p.scaled, support, weights);
  out.converged = r.converged;
  map_to_caller(out, p);
  return out;
}

BarycentricRational set_valued_aaa_sampled(const Matrix &samples, const SampleSet &z,
                                           const AaaOptions &opts)
{
  const Prepared p = prepare(samples, z);
  auto r = fit(p, opts);
  map_to_caller(r, p);
  if (opts.cleanup && r.size() > 1)
  {
    r = remove_doublets(r, z, samples, opts.weight_floor);
  }
  return r;
}

BarycentricRational set_valued_aaa(std::span<const ScalarFn> gs, const SampleSet &z,
                                   const AaaOptions &opts)
{
  return set_valued_aaa_sampled(sample_functions(gs, z), z, opts);
}

BarycentricRational aaa(const ScalarFn &g, const SampleSet &z, const AaaOptions &opts)
{
  return set_valued_aaa(std::span<const ScalarFn>(&g, 1), z, opts);
}

}  // namespace aaaeigs
