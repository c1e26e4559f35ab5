// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <Eigen/SVD>
#include <gtest/gtest.h>

#include "aaaeigs/aaa.hpp"
#include "aaaeigs/rational_forms.hpp"

using namespace aaaeigs;

namespace
{

SampleSet interval(double a, double b, Index count)
{
  std::vector<Complex> pts;
  for (Index k = 0; k < count; ++k)
  {
    pts.emplace_back(a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1), 0.0);
  }
  return SampleSet(std::move(pts));
}

SampleSet random_disk(Index count, unsigned seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> pts;
  while (static_cast<Index>(pts.size()) < count)
  {
    Complex z(u(rng), u(rng));
    if (std::abs(z) < 1.0)
    {
      pts.push_back(z);
    }
  }
  return SampleSet(std::move(pts));
}

double max_gap_on_grid(const BarycentricRational &r, Index fn, const ScalarFn &g,
                       const SampleSet &test)
{
  double gap = 0.0;
  for (Index k = 0; k < test.size(); ++k)
  {
    gap = std::max(gap, std::abs(eval_barycentric(r, fn, test[k]) - g(test[k])));
  }
  return gap;
}

}  // namespace

TEST(Aaa, ConstantUsesOneSupportPoint)
{
  const auto z = interval(-1, 1, 50);
  const auto r = aaa([](Complex) { return Complex(1.0); }, z);
  EXPECT_TRUE(r.converged);
  ASSERT_EQ(r.size(), 1);
  EXPECT_EQ(r.weights(0), Complex(1.0));
  EXPECT_EQ(eval_barycentric(r, 0, Complex(0.3, 0.7)), Complex(1.0));
}

TEST(Aaa, SimplePoleConvergesQuickly)
{
  const auto z = interval(-1, 1, 200);
  const ScalarFn g = [](Complex l) { return 1.0 / (l - 3.0); };
  const auto r = aaa(g, z);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.size(), 3);
  const auto test = random_disk(1000, 4);
  double gmax = 0.0;
  for (Index k = 0; k < z.size(); ++k)
  {
    gmax = std::max(gmax, std::abs(g(z[k])));
  }
  const auto fresh = interval(-0.999, 0.999, 1000);
  EXPECT_LE(max_gap_on_grid(r, 0, g, fresh), 1e-13 * gmax);
  EXPECT_NEAR(std::abs(eval_barycentric(r, 0, 0.5) - (-0.4)), 0.0, 1e-12);
}

TEST(Aaa, InterpolatesAtEverySupportPoint)
{
  const auto z = random_disk(300, 7);
  const std::vector<ScalarFn> gs = {[](Complex l) { return std::exp(l); },
                                    [](Complex l) { return 1.0 / (l - 1.5i); }};
  const auto r = set_valued_aaa(gs, z);
  for (Index j = 0; j < r.size(); ++j)
  {
    for (Index i = 0; i < 2; ++i)
    {
      EXPECT_EQ(eval_barycentric(r, i, r.support[static_cast<std::size_t>(j)]),
                gs[static_cast<std::size_t>(i)](r.support[static_cast<std::size_t>(j)]));
    }
  }
  EXPECT_NEAR(r.weights.norm(), 1.0, 1e-14);
}

TEST(Aaa, LinearPolynomialsNeedTwoSupportPoints)
{
  const auto z = interval(-1, 1, 100);
  const std::vector<ScalarFn> gs = {[](Complex) { return Complex(1.0); },
                                    [](Complex l) { return l; }};
  const auto r = set_valued_aaa(gs, z);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.size(), 2);
  const auto fresh = interval(-0.99, 0.99, 333);
  for (Index i = 0; i < 2; ++i)
  {
    EXPECT_LE(max_gap_on_grid(r, i, gs[static_cast<std::size_t>(i)], fresh), 1e-13);
  }
}

TEST(Aaa, DuplicatedFunctionMatchesScalarFit)
{
  const auto z = random_disk(400, 9);
  const ScalarFn g = [](Complex l) { return std::sqrt(l + 1.2) * std::exp(l); };
  const auto single = aaa(g, z);
  const std::vector<ScalarFn> twin = {g, g};
  const auto pair = set_valued_aaa(twin, z);
  ASSERT_EQ(single.support, pair.support);
  // Near convergence the weight vector is ill-conditioned, so compare the
  // approximants rather than the raw weights.
  for (Index k = 0; k < z.size(); ++k)
  {
    const Complex a = eval_barycentric(single, 0, z[k]);
    EXPECT_NEAR(std::abs(a - eval_barycentric(pair, 1, z[k])), 0.0, 1e-12 * std::abs(a));
  }
}

TEST(Aaa, NonConvergenceIsFlagged)
{
  const auto z = interval(-1, 1, 200);
  AaaOptions opts;
  opts.max_degree = 3;
  const auto r = aaa([](Complex l) { return std::abs(l.real()) + 0.0 * l; }, z, opts);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.size(), 4);
}

TEST(Aaa, NonFiniteSamplesAreDropped)
{
  const auto z = interval(-1, 1, 101);
  const ScalarFn g = [](Complex l) { return 1.0 / l; };  // infinite at 0
  const auto r = aaa(g, z);
  EXPECT_TRUE(r.converged);
  for (Index j = 0; j < r.size(); ++j)
  {
    EXPECT_NE(r.support[static_cast<std::size_t>(j)], Complex(0.0));
    EXPECT_EQ(z[r.support_index[static_cast<std::size_t>(j)]],
              r.support[static_cast<std::size_t>(j)]);
  }
}

TEST(Aaa, AllNonFiniteIsInvalidInput)
{
  const auto z = interval(-1, 1, 10);
  const ScalarFn g = [](Complex) { return Complex(std::nan(""), 0.0); };
  try
  {
    aaa(g, z);
    FAIL() << "expected an error";
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
  }
}

TEST(Aaa, ZeroFunctionIsRepresentedAsZero)
{
  log::set_level(log::Level::Silent);
  const auto z = interval(0, 1, 50);
  const std::vector<ScalarFn> gs = {[](Complex) { return Complex(0.0); },
                                    [](Complex l) { return 1.0 / (l + 2.0); }};
  const auto r = set_valued_aaa(gs, z);
  log::set_level(log::Level::Warning);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(eval_barycentric(r, 0, 0.37), Complex(0.0));
  EXPECT_NEAR(std::abs(eval_barycentric(r, 1, 0.37) - 1.0 / 2.37), 0.0, 1e-13);
}

TEST(Aaa, DeterministicSupportSequence)
{
  const auto z = random_disk(500, 13);
  const ScalarFn g = [](Complex l) { return std::tan(l); };
  const auto a = aaa(g, z);
  const auto b = aaa(g, z);
  EXPECT_EQ(a.support_index, b.support_index);
  EXPECT_EQ(a.weights, b.weights);
}

TEST(Aaa, ObserverSeesExplicitLoewnerWeights)
{
  const auto z = random_disk(120, 21);
  const std::vector<ScalarFn> gs = {[](Complex l) { return std::exp(2.0 * l); },
                                    [](Complex l) { return std::cos(3.0 * l); },
                                    [](Complex l) { return 1.0 / (l - 1.3); }};
  const Matrix samples = sample_functions(gs, z);
  Matrix scaled = samples;
  for (Index i = 0; i < 3; ++i)
  {
    scaled.row(i) /= samples.row(i).cwiseAbs().maxCoeff();
  }
  int checked = 0;
  AaaOptions opts;
  opts.observer = [&](const AaaStep &step) {
    if (step.support_count < 2)
    {
      return;
    }
    const Matrix l = explicit_loewner(z, scaled, step.support_index);
    const RealVector sv = Eigen::JacobiSVD<Matrix>(l).singularValues();
    const Index m = sv.size();
    // Singular-vector perturbation is bounded by eps·σ₁ / gap; only compare
    // where that bound is well under the tolerance.
    if (sv(m - 2) - sv(m - 1) < 1e-4 * sv(0))
    {
      return;
    }
    const Vector ref = min_right_singular_vector(l);
    EXPECT_LT((step.weights - ref).norm(), 1e-10) << "m = " << step.support_count;
    ++checked;
  };
  set_valued_aaa_sampled(samples, z, opts);
  EXPECT_GT(checked, 5);
}

TEST(RemoveDoublets, NoOpWhenWeightsAreLarge)
{
  const auto z = interval(-1, 1, 200);
  const ScalarFn g = [](Complex l) { return std::exp(l); };
  const Matrix samples = sample_functions(std::span<const ScalarFn>(&g, 1), z);
  AaaOptions opts;
  opts.cleanup = false;
  const auto r = set_valued_aaa_sampled(samples, z, opts);
  const auto c = remove_doublets(r, z, samples);
  EXPECT_EQ(c.support, r.support);
  EXPECT_EQ(c.weights, r.weights);
}

TEST(RemoveDoublets, TinyWeightIsRemoved)
{
  const auto z = interval(-1, 1, 200);
  const ScalarFn g = [](Complex l) { return 1.0 / (l - 2.0); };
  const Matrix samples = sample_functions(std::span<const ScalarFn>(&g, 1), z);
  auto r = aaa(g, z);
  const Index extra = 77;
  ASSERT_EQ(std::count(r.support_index.begin(), r.support_index.end(), extra), 0);
  BarycentricRational bad = r;
  bad.support.push_back(z[extra]);
  bad.support_index.push_back(extra);
  bad.weights.conservativeResize(r.size() + 1);
  bad.weights(r.size()) = 1e-16;
  bad.values.conservativeResize(1, r.size() + 1);
  bad.values(0, r.size()) = samples(0, extra);
  const auto c = remove_doublets(bad, z, samples);
  EXPECT_EQ(c.size(), r.size());
  double gap = 0.0;
  for (Index k = 0; k < z.size(); ++k)
  {
    gap = std::max(gap, std::abs(eval_barycentric(c, 0, z[k]) - eval_barycentric(r, 0, z[k])));
  }
  EXPECT_LT(gap, 1e-12);
}
