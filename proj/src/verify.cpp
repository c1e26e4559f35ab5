// SPDX-License-Identifier: Apache-2.0

#include "aaaeigs/verify.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "aaaeigs/dense_eigen.hpp"
#include "aaaeigs/ul_factor.hpp"

namespace aaaeigs
{

namespace
{

constexpr double INF = std::numeric_limits<double>::infinity();

CheckResult check(std::string name, double value, double threshold)
{
  CheckResult c;
  c.name = std::move(name);
  c.value = value;
  c.threshold = threshold;
  c.passed = value <= threshold;
  return c;
}

CheckResult skipped(std::string name, std::string note)
{
  CheckResult c;
  c.name = std::move(name);
  c.value = std::numeric_limits<double>::quiet_NaN();
  c.passed = true;
  c.skipped = true;
  c.note = std::move(note);
  return c;
}

Vector random_vector(Index n, std::mt19937_64 &rng)
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

// Region points away from every pole where R is comfortably invertible.
std::vector<Complex> safe_points(const CorkPencil &pen, const Region &region, Index count,
                                 std::uint64_t seed)
{
  std::vector<Complex> out;
  const auto pts = region.test_points(std::max<Index>(4 * count, 16), seed);
  for (Index i = 0; i < pts.size() && static_cast<Index>(out.size()) < count; ++i)
  {
    if (pen.pole_distance(pts[i]) > 1e-6 * pen.diameter)
    {
      out.push_back(pts[i]);
    }
  }
  return out;
}

// Finite eigenvalues inside the region. An interval rarely contains eigenvalues
// of a complex pencil exactly, so there the quarter-diameter neighbourhood of
// the samples is used instead. Poles of
// multiplicity k appear as eigenvalue clusters of radius ~eps^(1/k), so the
// pole exclusion is 1e-2 * diam rather than a rounding-level margin.
std::vector<Complex> nearby_eigenvalues(const CorkPencil &pen, const Region &region,
                                        const SampleSet &z)
{
  const auto eig = generalized_eigen(pen.assemble_a(), pen.assemble_b(), false);
  const double reach = 0.25 * z.diameter();
  std::vector<Complex> out;
  for (auto lam : eig.values())
  {
    if (!is_finite(lam) || std::abs(lam) > 1e13 * pen.diameter ||
        pen.pole_distance(lam) <= 1e-2 * pen.diameter)
    {
      continue;
    }
    if (region.kind != Region::Kind::Interval)
    {
      if (region.contains(lam, 1e-8))
      {
        out.push_back(lam);
      }
      continue;
    }
    double near = INF;
    for (Index k = 0; k < z.size() && near > reach; ++k)
    {
      near = std::min(near, std::abs(lam - z[k]));
    }
    if (near <= reach)
    {
      out.push_back(lam);
    }
  }
  return out;
}

}  // namespace

double interpolation_deviation(const RationalNep &r)
{
  const NepProblem &p = r.nep();
  const SampleSet z = p.region.sample();
  double worst = 0.0;
  for (const auto &g : r.groups)
  {
    const auto &fit = g.fit;
    for (Index k = 0; k < z.size(); ++k)
    {
      if (std::find(fit.support_index.begin(), fit.support_index.end(), k) !=
          fit.support_index.end())
      {
        continue;
      }
      const Vector approx = eval_barycentric_all(fit, z[k]);
      for (std::size_t row = 0; row < g.terms.size(); ++row)
      {
        const Complex exact = p.terms[static_cast<std::size_t>(g.terms[row])].g(z[k]);
        if (!is_finite(exact))
        {
          continue;
        }
        const double dev =
            std::abs(exact - approx(static_cast<Index>(row))) * fit.scale(static_cast<Index>(row));
        worst = std::max(worst, std::isnan(dev) ? INF : dev);
      }
    }
  }
  return worst;
}

double state_space_gap(const RationalNep &r, const SampleSet &points)
{
  double worst = 0.0;
  for (Index t = 0; t < static_cast<Index>(r.terms.size()); ++t)
  {
    for (Index k = 0; k < points.size(); ++k)
    {
      Complex bary;
      try
      {
        bary = r.eval_term_barycentric(t, points[k]);
      }
      catch (const Error &)
      {
        continue;
      }
      if (bary == 0.0)
      {
        continue;
      }
      const double gap = std::abs(bary - r.eval_term(t, points[k])) / std::abs(bary);
      worst = std::max(worst, std::isnan(gap) ? INF : gap);
    }
  }
  return worst;
}

bool all_passed(const std::vector<CheckResult> &checks)
{
  return std::all_of(checks.begin(), checks.end(), [](const auto &c) { return c.passed; });
}

std::vector<CheckResult> verify_problem(const ProblemConfig &cfg, const VerifyOptions &opts)
{
  const NepProblem &p = *cfg.problem;
  RationalNep r = approximate(cfg.problem, cfg.approx);
  if (opts.tamper)
  {
    opts.tamper(r);
  }
  std::vector<CheckResult> out;
  std::mt19937_64 rng(opts.seed);

  double fit_error = 0.0;
  for (const auto &g : r.groups)
  {
    fit_error = std::max(fit_error, g.fit.max_error);
  }
  out.push_back(check("interpolation", interpolation_deviation(r),
                      10.0 * std::max(fit_error, cfg.approx.tol) + 1e-13));
  out.push_back(check("state-space-equivalence",
                      state_space_gap(r, p.region.test_points(200, opts.seed + 7)), 1e-10));

  std::vector<CorkPencil> pencils;
  for (auto v : {PencilVariant::Trimmed, PencilVariant::SharedCollapsed, PencilVariant::Full})
  {
    CorkPencil pen = build_pencil(r, v);
    const std::string tag = std::string("[") + to_string(v) + "]";
    if (pen.dimension() > opts.guard)
    {
      out.push_back(skipped("pencil" + tag, "dimension " + std::to_string(pen.dimension()) +
                                                " exceeds the dense limit"));
      continue;
    }
    const auto pts = safe_points(pen, p.region, 3, opts.seed + 11);
    if (pts.empty())
    {
      throw Error(ErrorKind::NumericalDegeneracy, "no region point away from the fitted poles");
    }
    double action = 0.0;
    for (Complex lam : pts)
    {
      const Vector x = random_vector(pen.n, rng);
      const Vector y = pen.apply(lam, expand_eigenvector(pen, x, lam));
      const Vector rx = evaluate_rational(r, lam) * x;
      const double scale = std::max(rx.norm(), 1e-300);
      action = std::max(action, std::max((y.head(pen.n) - rx).norm(),
                                         y.tail(y.size() - pen.n).norm()) / scale);
    }
    out.push_back(check("pencil-action" + tag, action, 1e-10));

    std::optional<ULFactors> f;
    for (Complex mu : pts)
    {
      try
      {
        f.emplace(ul_factorize(pen, mu));
        break;
      }
      catch (const Error &e)
      {
        if (e.kind() != ErrorKind::ShiftIsEigenvalue)
        {
          throw;
        }
      }
    }
    if (!f)
    {
      out.push_back(skipped("ul" + tag, "every trial shift is an eigenvalue"));
      pencils.push_back(std::move(pen));
      continue;
    }
    const Matrix lp = f->permuted_pencil();
    out.push_back(
        check("ul-product" + tag, (lp - f->explicit_u() * f->explicit_l()).norm() / lp.norm(), 1e-10));
    const auto [lhs, rhs] = f->log_det_sides();
    out.push_back(check("log-det-identity" + tag, std::abs(std::exp(lhs - rhs) - 1.0), 1e-8));
    // Normwise backward error; the forward error carries cond(L(μ)).
    const Vector b = random_vector(pen.dimension(), rng);
    const Vector x = f->solve(b);
    const double backward =
        (pen.apply(f->shift(), x) - b).norm() / (lp.norm() * x.norm() + b.norm());
    out.push_back(check("shifted-solve" + tag, backward, 1e-12));
    pencils.push_back(std::move(pen));
  }
  if (pencils.empty())
  {
    throw Error(ErrorKind::DimensionGuard,
                "every pencil variant exceeds the dense limit of " + std::to_string(opts.guard));
  }

  if (pencils.size() > 1)
  {
    const SampleSet z = p.region.sample();
    const auto ref = nearby_eigenvalues(pencils.front(), p.region, z);
    for (std::size_t i = 1; i < pencils.size(); ++i)
    {
      const auto other = nearby_eigenvalues(pencils[i], p.region, z);
      double gap = 0.0;
      for (auto lam : ref)
      {
        double best = INF;
        for (auto mu : other)
        {
          best = std::min(best, std::abs(lam - mu));
        }
        gap = std::max(gap, best / std::max(1.0, std::abs(lam)));
      }
      const std::string name = std::string("eigenvalues[") + to_string(pencils.front().variant) +
                               " vs " + to_string(pencils[i].variant) + "]";
      if (ref.empty())
      {
        out.push_back(skipped(name, "no eigenvalues near the region"));
        continue;
      }
      auto c = check(name, gap, 1e-8);
      std::ostringstream note;
      note << ref.size() << " eigenvalues near the region";
      c.note = note.str();
      out.push_back(c);
    }
  }
  else
  {
    out.push_back(skipped("eigenvalues", "only one pencil variant fits under the dense limit"));
  }

  KrylovOptions ko;
  ko.shifts = cfg.solve.shifts;
  ko.max_iter = std::min(opts.krylov_iters, cfg.solve.iters);
  ko.seed = opts.seed;
  ko.compute_ritz = false;
  if (ko.shifts.empty())
  {
    ko.shifts = safe_points(pencils.front(), p.region, 1, opts.seed + 13);
  }
  const auto kr = rational_krylov(pencils.front(), p, ko);
  out.push_back(check("krylov-orthogonality", orthogonality_defect(kr.state), 1e-10));
  out.push_back(check("krylov-recurrence", recurrence_residual(pencils.front(), kr.state), 1e-8));
  return out;
}

}  // namespace aaaeigs
