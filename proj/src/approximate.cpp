// SPDX-License-Identifier: Apache-2.0

#include "aaaeigs/approximate.hpp"

#include <algorithm>
#include <sstream>

namespace aaaeigs
{

ApproxMode parse_approx_mode(std::string_view name)
{
  if (name == "per-function" || name == "per_function")
  {
    return ApproxMode::PerFunction;
  }
  if (name == "set-valued" || name == "set_valued")
  {
    return ApproxMode::SetValued;
  }
  if (name == "grouped")
  {
    return ApproxMode::Grouped;
  }
  throw Error(ErrorKind::Config, "unknown approximation mode '" + std::string(name) + "'");
}

const char *to_string(ApproxMode mode)
{
  switch (mode)
  {
  case ApproxMode::PerFunction:
    return "per-function";
  case ApproxMode::SetValued:
    return "set-valued";
  case ApproxMode::Grouped:
    return "grouped";
  }
  return "?";
}

Index RationalNep::realization_size_full() const
{
  Index total = 0;
  for (const auto &t : terms)
  {
    total += groups[static_cast<std::size_t>(t.group)].size();
  }
  return total;
}

Index RationalNep::realization_size_collapsed() const
{
  Index total = 0;
  for (const auto &g : groups)
  {
    total += g.size();
  }
  return total;
}

Index RationalNep::total_degree() const
{
  Index total = 0;
  for (const auto &g : groups)
  {
    total += g.fit.poles_count();
  }
  return total;
}

Complex RationalNep::eval_term(Index term, Complex lambda) const
{
  const auto &t = terms[static_cast<std::size_t>(term)];
  const auto &g = groups[static_cast<std::size_t>(t.group)];
  StateSpaceRational ss{t.a, g.b, g.e, g.f};
  return eval_state_space(ss, lambda);
}

Complex RationalNep::eval_term_barycentric(Index term, Complex lambda) const
{
  const auto &t = terms[static_cast<std::size_t>(term)];
  return eval_barycentric(groups[static_cast<std::size_t>(t.group)].fit, t.row, lambda);
}

std::vector<std::pair<Complex, Index>> RationalNep::poles() const
{
  std::vector<std::pair<Complex, Index>> out;
  const double diam = problem->region.diameter();
  for (std::size_t g = 0; g < groups.size(); ++g)
  {
    for (auto p : aaaeigs::poles(groups[g].fit, diam))
    {
      out.emplace_back(p, static_cast<Index>(g));
    }
  }
  return out;
}

RationalNep make_rational_nep(std::shared_ptr<const NepProblem> p,
                              std::vector<std::pair<std::vector<Index>, BarycentricRational>> fits)
{
  RationalNep r;
  r.problem = std::move(p);
  const Index s = static_cast<Index>(r.problem->terms.size());
  r.terms.resize(static_cast<std::size_t>(s));
  std::vector<int> seen(static_cast<std::size_t>(s), 0);
  for (auto &[members, fit] : fits)
  {
    if (static_cast<Index>(members.size()) != fit.functions())
    {
      throw Error(ErrorKind::InvalidInput, "fit rows do not match its term list");
    }
    FitGroup g;
    g.terms = members;
    g.fit = std::move(fit);
    const auto ss = to_state_space(g.fit, 0);
    g.e = ss.e;
    g.f = ss.f;
    g.b = ss.b;
    const Index gi = static_cast<Index>(r.groups.size());
    for (std::size_t row = 0; row < members.size(); ++row)
    {
      const Index t = members[row];
      if (t < 0 || t >= s || seen[static_cast<std::size_t>(t)]++)
      {
        throw Error(ErrorKind::InvalidInput, "term " + std::to_string(t) +
                                                 " is missing or assigned twice");
      }
      auto &rt = r.terms[static_cast<std::size_t>(t)];
      rt.group = gi;
      rt.row = static_cast<Index>(row);
      rt.a = to_state_space(g.fit, static_cast<Index>(row)).a;
    }
    r.report.degrees.push_back(g.fit.poles_count());
    r.report.converged = r.report.converged && g.fit.converged;
    r.groups.push_back(std::move(g));
  }
  if (std::any_of(seen.begin(), seen.end(), [](int v) { return v != 1; }))
  {
    throw Error(ErrorKind::InvalidInput, "every term needs exactly one fit");
  }
  return r;
}

RationalNep approximate(std::shared_ptr<const NepProblem> p, const ApproxOptions &opts)
{
  p->validate();
  const Index s = static_cast<Index>(p->terms.size());
  std::vector<std::vector<Index>> partition;
  switch (opts.mode)
  {
  case ApproxMode::PerFunction:
    for (Index t = 0; t < s; ++t)
    {
      partition.push_back({t});
    }
    break;
  case ApproxMode::SetValued:
    if (s > 0)
    {
      partition.emplace_back();
      for (Index t = 0; t < s; ++t)
      {
        partition.back().push_back(t);
      }
    }
    break;
  case ApproxMode::Grouped:
    partition = opts.groups;
    break;
  }

  std::vector<std::pair<std::vector<Index>, BarycentricRational>> fits;
  if (!partition.empty())
  {
    const SampleSet z = p->region.sample();
    AaaOptions aopts;
    aopts.tol = opts.tol;
    aopts.max_degree = opts.max_degree;
    aopts.cleanup = opts.cleanup;
    for (const auto &members : partition)
    {
      if (members.empty())
      {
        throw Error(ErrorKind::Config, "empty fit group");
      }
      std::vector<ScalarFn> gs;
      for (Index t : members)
      {
        if (t < 0 || t >= s)
        {
          throw Error(ErrorKind::Config, "group references unknown term " + std::to_string(t));
        }
        gs.push_back(p->terms[static_cast<std::size_t>(t)].g.as_fn());
      }
      auto fit = set_valued_aaa(gs, z, aopts);
      if (!fit.converged)
      {
        std::ostringstream msg;
        msg << "fit of " << members.size() << " function(s) stopped at " << fit.size()
            << " support points without reaching tol (max error " << fit.max_error << ")";
        log::warn(msg.str());
      }
      fits.emplace_back(members, std::move(fit));
    }
  }
  auto r = make_rational_nep(p, std::move(fits));
  if (opts.test_count > 1)
  {
    const auto degrees = r.report.degrees;
    const bool converged = r.report.converged;
    r.report = approximation_errors(*p, r, approximation_test_set(*p, opts));
    r.report.degrees = degrees;
    r.report.converged = converged;
  }
  return r;
}

namespace
{

template <typename TermValue>
Matrix assemble_rational(const RationalNep &r, Complex lambda, TermValue value)
{
  const auto &p = r.nep();
  Matrix out = p.poly.evaluate(lambda, p.n);
  for (std::size_t t = 0; t < p.terms.size(); ++t)
  {
    out += value(static_cast<Index>(t)) * (p.terms[t].c - lambda * p.terms[t].d);
  }
  return out;
}

}  // namespace

Matrix evaluate_rational(const RationalNep &r, Complex lambda)
{
  // One resolvent per group serves all of its terms.
  std::vector<Vector> u;
  for (const auto &g : r.groups)
  {
    u.push_back(state_space_resolvent(StateSpaceRational{Vector(), g.b, g.e, g.f}, lambda));
  }
  return assemble_rational(r, lambda, [&](Index t) -> Complex {
    const auto &rt = r.terms[static_cast<std::size_t>(t)];
    return rt.a.cwiseProduct(u[static_cast<std::size_t>(rt.group)]).sum();
  });
}

Matrix evaluate_rational_barycentric(const RationalNep &r, Complex lambda)
{
  return assemble_rational(r, lambda,
                           [&](Index t) { return r.eval_term_barycentric(t, lambda); });
}

ErrorBaseline error_baseline(const NepProblem &p, const SampleSet &test)
{
  ErrorBaseline base;
  const Index s = static_cast<Index>(p.terms.size());
  std::vector<Vector> cols;
  std::vector<double> norms;
  for (Index k = 0; k < test.size(); ++k)
  {
    const Complex lam = test[k];
    Vector g(s);
    double na = 0.0;
    try
    {
      for (Index t = 0; t < s; ++t)
      {
        g(t) = p.terms[static_cast<std::size_t>(t)].g(lam);
      }
      if (!g.allFinite())
      {
        throw Error(ErrorKind::PoleEvaluation, "non-finite value");
      }
      na = norm1(evaluate_nep(p, lam));
    }
    catch (const Error &)
    {
      ++base.skipped;
      continue;
    }
    if (!std::isfinite(na))
    {
      ++base.skipped;
      continue;
    }
    base.points.push_back(lam);
    cols.push_back(std::move(g));
    norms.push_back(na);
  }
  base.g.resize(s, static_cast<Index>(cols.size()));
  base.norm_a.resize(static_cast<Index>(norms.size()));
  for (std::size_t k = 0; k < cols.size(); ++k)
  {
    base.g.col(static_cast<Index>(k)) = cols[k];
    base.norm_a(static_cast<Index>(k)) = norms[k];
  }
  return base;
}

ErrorReport approximation_errors(const NepProblem &p, const RationalNep &r,
                                 const ErrorBaseline &base)
{
  ErrorReport rep;
  rep.skipped = base.skipped;
  const Index s = static_cast<Index>(p.terms.size());
  RealVector num = RealVector::Zero(s), den = RealVector::Zero(s);
  double em2 = 0.0;
  Matrix diff(p.n, p.n);
  for (std::size_t k = 0; k < base.points.size(); ++k)
  {
    const Complex lam = base.points[k];
    const Vector g = base.g.col(static_cast<Index>(k));
    Vector rv(s);
    try
    {
      for (Index t = 0; t < s; ++t)
      {
        rv(t) = r.eval_term_barycentric(t, lam);
      }
      if (!rv.allFinite())
      {
        throw Error(ErrorKind::PoleEvaluation, "non-finite value");
      }
    }
    catch (const Error &)
    {
      ++rep.skipped;
      continue;
    }
    ++rep.test_points;
    num += (g - rv).cwiseAbs2();
    den += g.cwiseAbs2();
    const double na = base.norm_a(static_cast<Index>(k));
    if (na > 0.0 && s > 0)
    {
      // The polynomial parts cancel: A − R = Σ (C_t − λD_t)(g_t − r_t).
      diff.setZero();
      for (Index t = 0; t < s; ++t)
      {
        const auto &term = p.terms[static_cast<std::size_t>(t)];
        const Complex delta = g(t) - rv(t);
        diff += delta * term.c;
        if (!term.d.isZero(0.0))
        {
          diff -= (lam * delta) * term.d;
        }
      }
      const double ratio = norm1(diff) / na;
      em2 += ratio * ratio;
    }
  }
  double ef2 = 0.0;
  for (Index t = 0; t < s; ++t)
  {
    if (den(t) > 0.0)
    {
      ef2 += num(t) / den(t);
    }
  }
  rep.e_f = std::sqrt(ef2);
  rep.e_m = std::sqrt(em2);
  return rep;
}

ErrorReport approximation_errors(const NepProblem &p, const RationalNep &r,
                                 const SampleSet &test)
{
  return approximation_errors(p, r, error_baseline(p, test));
}

SampleSet approximation_test_set(const NepProblem &p, const ApproxOptions &opts)
{
  const std::uint64_t seed = opts.test_seed != 0 ? opts.test_seed : p.region.seed + 1;
  return p.region.test_points(opts.test_count, seed);
}

}  // namespace aaaeigs
