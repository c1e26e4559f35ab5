// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "aaaeigs/dense_eigen.hpp"
#include "support.hpp"

using namespace aaaeigs;
using namespace aaaeigs::testing;
using namespace std::complex_literals;

namespace
{

Complex random_point(const NepProblem &p, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  (void)p;
  const double re = u(rng);
  return Complex(re, u(rng));
}

const PencilVariant ALL_VARIANTS[] = {PencilVariant::Full, PencilVariant::SharedCollapsed,
                                      PencilVariant::Trimmed};

}  // namespace

TEST(Pencil, ActionIdentityOnRandomProblems)
{
  for (std::uint64_t seed = 1; seed <= 20; ++seed)
  {
    const auto r = random_rational(seed, seed % 2 ? ApproxMode::PerFunction : ApproxMode::SetValued);
    std::mt19937_64 rng(seed);
    for (auto v : ALL_VARIANTS)
    {
      const auto pen = build_pencil(r, v);
      const Complex lam = random_point(r.nep(), rng);
      const Vector x = random_vector(pen.n, rng);
      const Vector out = pen.apply(lam, expand_eigenvector(pen, x, lam));
      const Vector rx = evaluate_rational(r, lam) * x;
      const double scale = rx.norm() + out.norm();
      EXPECT_LE((out.head(pen.n) - rx).norm(), 1e-10 * scale) << seed << " " << to_string(v);
      EXPECT_LE(out.tail(out.size() - pen.n).norm(), 1e-10 * scale) << seed << " " << to_string(v);
    }
  }
}

TEST(Pencil, AssembledMatchesAction)
{
  const auto r = random_rational(4);
  std::mt19937_64 rng(2);
  for (auto v : ALL_VARIANTS)
  {
    const auto pen = build_pencil(r, v);
    const Vector x = random_vector(pen.dimension(), rng);
    EXPECT_LE((pen.assemble_a() * x - pen.apply_a(x)).norm(), 1e-12 * x.norm());
    EXPECT_LE((pen.assemble_b() * x - pen.apply_b(x)).norm(), 1e-12 * x.norm());
  }
}

TEST(Pencil, SizeFormulas)
{
  // s = 2 shared fit with 17 support points, k = 2, n = 10.
  auto p = std::make_shared<NepProblem>();
  p->n = 10;
  p->poly.a = {Matrix::Identity(10, 10), Matrix::Zero(10, 10)};
  p->poly.b = {Matrix::Zero(10, 10), Matrix::Identity(10, 10)};
  p->region = Region::interval(0.0, 1.0, 200);
  for (int t = 0; t < 2; ++t)
  {
    NonlinearTerm term;
    term.c = Matrix::Identity(10, 10);
    term.d = Matrix::Zero(10, 10);
    term.g = ScalarFunction::parse(t == 0 ? "1/(lam + 2)" : "1/(lam + 3)", {});
    p->terms.push_back(term);
  }
  std::vector<Complex> pts;
  for (int i = 0; i < 200; ++i)
  {
    pts.push_back(Complex(i / 199.0, 0.0));
  }
  BarycentricRational fit;
  fit.support.assign(pts.begin(), pts.begin() + 17);
  fit.weights = Vector::Ones(17);
  fit.values = Matrix::Ones(2, 17);
  fit.scale = RealVector::Ones(2);
  for (Index i = 0; i < 17; ++i)
  {
    fit.support_index.push_back(i);
  }
  const auto r = make_rational_nep(p, {{{0, 1}, fit}});
  EXPECT_EQ(build_pencil(r, PencilVariant::SharedCollapsed).dimension(), 190);
  EXPECT_EQ(build_pencil(r, PencilVariant::Full).dimension(), 360);
}

TEST(Pencil, NoTermsIsPlainCork)
{
  const auto p = bench::linear_diag();
  const auto r = approximate(p);
  const auto pen = build_pencil(r, PencilVariant::Full);
  EXPECT_EQ(pen.dimension(), pen.n * pen.k());
  const Vector x = Vector::Ones(3);
  EXPECT_LE((expand_eigenvector(pen, x, 0.3) - x).norm(), 1e-15);
}

TEST(Pencil, TrimmedSizeBelowFull)
{
  const auto cfg = bench::builtin_problem("branch-chain", 1);
  const auto r = approximate(cfg.problem, cfg.approx);
  const auto full = build_pencil(r, PencilVariant::Full);
  const auto trimmed = build_pencil(r, PencilVariant::Trimmed);
  Index expect = trimmed.n * trimmed.k();
  for (std::size_t t = 0; t < r.terms.size(); ++t)
  {
    const auto &g = r.groups[static_cast<std::size_t>(r.terms[t].group)];
    expect += g.size() * cfg.problem->terms[t].low_rank->rank();
  }
  EXPECT_EQ(trimmed.dimension(), expect);
  EXPECT_LT(trimmed.dimension(), full.dimension());
}

TEST(Pencil, ScalarToyEigenvaluesMatchRationalRoot)
{
  const auto p = bench::toy(1.0);
  const auto r = approximate(p);
  const auto pen = build_pencil(r, PencilVariant::Full);
  const Complex root = newton_det_root(pen, 2.0);
  double best = 1.0;
  for (auto lam : finite_eigenvalues(pen))
  {
    best = std::min(best, std::abs(lam - root));
  }
  EXPECT_LE(best, 1e-10);
  // Root of λ − 2 + e^{−λ}.
  EXPECT_NEAR(root.real(), 1.8414056604369606, 1e-10);
}

TEST(Pencil, RecoverEigenvector)
{
  std::mt19937_64 rng(5);
  const auto r = random_rational(6);
  const auto pen = build_pencil(r, PencilVariant::Trimmed);
  const Vector x = random_vector(pen.n, rng);
  const Vector got = recover_eigenvector(pen, 3.0i * expand_eigenvector(pen, x, 0.2));
  Vector want = x / x.norm();
  fix_phase(want);
  EXPECT_LE((got - want).norm(), 1e-14);
  Vector z = Vector::Zero(pen.dimension());
  z(z.size() - 1) = 1.0;
  EXPECT_THROW(recover_eigenvector(pen, z), Error);
}

TEST(Pencil, ExpandAtPoleThrows)
{
  const auto r = random_rational(2);
  const auto pen = build_pencil(r, PencilVariant::Full);
  const auto poles = pen.poles();
  ASSERT_FALSE(poles.empty());
  EXPECT_THROW(expand_eigenvector(pen, Vector::Ones(pen.n), poles.front()), Error);
}

TEST(Pencil, ExpandedEigenpairIsNullVector)
{
  const auto r = random_rational(8);
  const auto pen = build_pencil(r, PencilVariant::Trimmed);
  const Complex lam = newton_det_root(pen, 0.1 + 0.1i);
  Eigen::JacobiSVD<Matrix> svd(pen.evaluate_r(lam), Eigen::ComputeFullV);
  const Vector x = svd.matrixV().col(pen.n - 1);
  const Vector z = expand_eigenvector(pen, x, lam);
  EXPECT_LE(pen.apply(lam, z).norm(), 1e-9 * z.norm() * pen.assemble_a().norm());
}

TEST(UL, ProductDeterminantAndSolve)
{
  for (std::uint64_t seed = 1; seed <= 20; ++seed)
  {
    const auto r = random_rational(seed);
    std::mt19937_64 rng(seed + 100);
    for (auto v : ALL_VARIANTS)
    {
      const auto pen = build_pencil(r, v);
      const Complex mu = random_point(r.nep(), rng);
      const auto f = ul_factorize(pen, mu);
      const Matrix lp = f.permuted_pencil();
      EXPECT_LE((lp - f.explicit_u() * f.explicit_l()).norm(), 1e-10 * lp.norm())
          << seed << " " << to_string(v);
      const auto [lhs, rhs] = f.log_det_sides();
      const Complex gap = std::exp(lhs - rhs) - 1.0;
      EXPECT_LE(std::abs(gap), 1e-8) << seed << " " << to_string(v);
      const Vector w = random_vector(pen.dimension(), rng);
      const Vector got = f.solve(pen.apply(mu, w));
      EXPECT_LE((got - w).norm(), 1e-9 * w.norm()) << seed << " " << to_string(v);
      EXPECT_LE(f.solve(Vector::Zero(pen.dimension())).norm(), 0.0);
    }
  }
}

TEST(UL, MonomialPivotIsFirstColumn)
{
  bench::RandomSpec spec;
  spec.k = 3;
  const auto p = bench::random_small(spec, 3);
  ApproxOptions opts;
  opts.max_degree = 4;
  const auto pen = build_pencil(approximate(p, opts), PencilVariant::Full);
  const auto f = ul_factorize(pen, 0.3 - 0.2i);
  EXPECT_EQ(f.pivot(), 0);
  EXPECT_EQ(f.alpha(), Complex(1.0));
}

TEST(UL, AlphaNonzeroForRandomShifts)
{
  bench::RandomSpec spec;
  spec.k = 4;
  spec.chebyshev = true;
  const auto pen = build_pencil(approximate(bench::random_small(spec, 9)), PencilVariant::Trimmed);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100; ++i)
  {
    const double re = u(rng);
    const ULFactors f(pen, Complex(re, u(rng)));
    EXPECT_GT(std::abs(f.alpha()), 0.0);
    EXPECT_LE(std::abs(f.basis()(0) - 1.0), 1e-15);
  }
}

TEST(UL, LinearSingleBlockSolve)
{
  const auto pen = build_pencil(approximate(bench::linear_diag()), PencilVariant::Full);
  const auto f = ul_factorize(pen, 0.5);
  const Vector rhs = Vector::Ones(3);
  const Vector v = f.solve(rhs);
  EXPECT_NEAR(std::abs(v(0) - 1.0 / 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v(2) - 1.0 / 2.5), 0.0, 1e-15);
}

TEST(UL, ShiftGuards)
{
  const auto r = random_rational(2);
  const auto pen = build_pencil(r, PencilVariant::Full);
  try
  {
    ul_factorize(pen, pen.poles().front());
    FAIL() << "expected a pole-shift error";
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.kind(), ErrorKind::PoleShift);
    EXPECT_NE(std::string(e.what()).find("term"), std::string::npos);
  }
  const auto lin = build_pencil(approximate(bench::linear_diag()), PencilVariant::Full);
  try
  {
    ul_factorize(lin, 2.0);
    FAIL() << "expected a shift-is-eigenvalue error";
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.kind(), ErrorKind::ShiftIsEigenvalue);
  }
}

TEST(Pencil, EigenvaluesMatchNewtonOracleAndVariantsAgree)
{
  std::size_t checked = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed)
  {
    const auto r = random_rational(seed);
    const auto full = build_pencil(r, PencilVariant::Full);
    const auto trimmed = build_pencil(r, PencilVariant::Trimmed);
    auto inside = [&](const CorkPencil &pen) {
      std::vector<Complex> out;
      for (auto lam : finite_eigenvalues(pen))
      {
        if (r.nep().region.contains(lam, 0.0) &&
            pen.pole_distance(lam) > 1e-6)
        {
          out.push_back(lam);
        }
      }
      return out;
    };
    const auto ef = inside(full);
    const auto et = inside(trimmed);
    for (auto lam : et)
    {
      const Complex root = newton_det_root(trimmed, lam + 1e-4 * (1.0 + 1.0i));
      EXPECT_LE(std::abs(root - lam), 1e-8 * std::max(1.0, std::abs(lam))) << seed;
      double best = std::numeric_limits<double>::infinity();
      for (auto mu : ef)
      {
        best = std::min(best, std::abs(mu - lam));
      }
      EXPECT_LE(best, 1e-8 * std::max(1.0, std::abs(lam))) << seed;
    }
    EXPECT_EQ(ef.size(), et.size()) << seed;
    checked += et.size();
  }
  EXPECT_GE(checked, 10u);
}
