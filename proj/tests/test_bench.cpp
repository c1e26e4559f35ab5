// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "support.hpp"

using namespace aaaeigs;
using namespace aaaeigs::testing;
using namespace std::complex_literals;

namespace
{

Index shared_degree(const std::vector<ScalarFunction> &fs, const Region &reg)
{
  std::vector<ScalarFn> gs;
  for (const auto &f : fs)
  {
    gs.push_back(f.as_fn());
  }
  return set_valued_aaa(gs, reg.sample()).size() - 1;
}

Index per_function_degree(const std::vector<ScalarFunction> &fs, const Region &reg)
{
  Index total = 0;
  for (const auto &f : fs)
  {
    total += aaa(f.as_fn(), reg.sample()).size() - 1;
  }
  return total;
}

}  // namespace

TEST(Bench, GunFunctions)
{
  const auto f = bench::gun_functions();
  const double s2 = bench::GUN_SIGMA2 * bench::GUN_SIGMA2;
  EXPECT_EQ(f[1](s2), Complex(0.0));
  EXPECT_LE(std::abs(f[0](4.0) - 2.0), 1e-15);
  const auto reg = bench::gun_region();
  const Index shared = shared_degree(f, reg);
  EXPECT_GE(shared, 14);
  EXPECT_LE(shared, 22);
  EXPECT_GT(per_function_degree(f, reg), shared);
}

TEST(Bench, BeamModulus)
{
  const auto h = bench::beam_modulus();
  EXPECT_NEAR(std::abs(h(1e-12) - 350.4e3), 0.0, 1.0);
  const auto r = aaa(h.as_fn(), bench::beam_region().sample());
  EXPECT_NEAR(static_cast<double>(r.size() - 1), 11.0, 2.0);
  for (auto p : poles(r, bench::beam_region().diameter()))
  {
    EXPECT_LT(p.real(), -1.0) << p;
    EXPECT_GT(p.imag(), 0.0) << p;
  }
}

TEST(Bench, CarCavitySmall)
{
  const auto f = bench::car_cavity_functions();
  const Index d = shared_degree({f.h_k, f.h_m}, bench::car_region_small());
  EXPECT_GE(d, 8);
  EXPECT_LE(d, 14);
  // Growth toward the singularity near 514i.
  EXPECT_GT(std::abs(f.h_k(514.0i)), 1e3 * std::abs(f.h_k(100.0)));
}

TEST(Bench, BranchChain)
{
  const auto alpha = bench::branch_points(10);
  EXPECT_DOUBLE_EQ(alpha.front(), -0.19);
  EXPECT_DOUBLE_EQ(alpha.back(), 22.3);

  const auto p = bench::branch_chain(6, 10, 1, 3);
  std::vector<ScalarFunction> fs;
  for (const auto &t : p->terms)
  {
    fs.push_back(t.g);
    ASSERT_TRUE(t.low_rank);
    EXPECT_GE(t.low_rank->rank(), 1);
    EXPECT_LE(t.low_rank->rank(), 3);
  }
  EXPECT_LT(shared_degree(fs, p->region), per_function_degree(fs, p->region));

  // One function below its branch point is smooth.
  const auto below = Region::interval(-10.0, alpha.front() - 1.0, 1000);
  EXPECT_LE(aaa(fs[0].as_fn(), below.sample()).size() - 1, 15);
}

TEST(Bench, RandomSpsd)
{
  std::mt19937_64 rng(1);
  const Matrix a = bench::random_spsd(12, 4, 20.0, rng);
  EXPECT_LE((a - a.adjoint()).norm(), 1e-13 * a.norm());
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  const auto ev = es.eigenvalues();
  EXPECT_GE(ev.minCoeff(), -1e-10 * a.norm());
  Index nonzero = 0;
  for (Index i = 0; i < ev.size(); ++i)
  {
    nonzero += ev(i) > 1e-8 * ev.maxCoeff();
  }
  EXPECT_EQ(nonzero, 4);
}

TEST(Bench, SeededDeterminism)
{
  for (const auto &name : bench::builtin_names())
  {
    if (name == "car-large")
    {
      continue;
    }
    const auto a = bench::builtin_problem(name, 7);
    const auto b = bench::builtin_problem(name, 7);
    const auto c = bench::builtin_problem(name, 8);
    ASSERT_EQ(a.problem->poly.a.size(), b.problem->poly.a.size());
    for (std::size_t i = 0; i < a.problem->poly.a.size(); ++i)
    {
      EXPECT_EQ(a.problem->poly.a[i], b.problem->poly.a[i]) << name;
    }
    for (std::size_t t = 0; t < a.problem->terms.size(); ++t)
    {
      EXPECT_EQ(a.problem->terms[t].c, b.problem->terms[t].c) << name;
    }
    const Complex lam = a.problem->region.sample()[3];
    EXPECT_EQ(evaluate_nep(*a.problem, lam), evaluate_nep(*b.problem, lam)) << name;
    if (name != "toy" && name != "toy-minus" && name != "linear")
    {
      EXPECT_NE(evaluate_nep(*a.problem, lam), evaluate_nep(*c.problem, lam)) << name;
    }
  }
  EXPECT_THROW(bench::builtin_problem("nope"), Error);
}

TEST(Bench, GunAnalogMatricesArePsd)
{
  const auto p = bench::gun_analog(30, 2);
  auto check = [](const Matrix &m) {
    EXPECT_LE((m - m.adjoint()).norm(), 1e-12 * m.norm());
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10 * m.norm());
  };
  check(p->poly.a[0]);
  check(p->poly.b[0]);
  for (const auto &t : p->terms)
  {
    check(Matrix(t.c / 1.0i));
  }
}

TEST(Bench, BuiltinFunctionRegistry)
{
  for (const char *name : {"gun_sqrt1", "gun_sqrt2", "beam_modulus", "car_hK", "car_hM", "car_lam_hM"})
  {
    const auto f = builtin_function(name);
    ASSERT_TRUE(f) << name;
    EXPECT_TRUE(is_finite((*f)(50.0 + 10.0i))) << name;
  }
  EXPECT_FALSE(builtin_function("missing"));
}
