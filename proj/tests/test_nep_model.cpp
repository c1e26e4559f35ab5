// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "aaaeigs/matrix_market.hpp"
#include "support.hpp"

using namespace aaaeigs;
using namespace aaaeigs::testing;
using namespace std::complex_literals;

namespace
{

std::filesystem::path scratch_dir(const std::string &name)
{
  auto dir = std::filesystem::temp_directory_path() / ("aaaeigs_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_file(const std::filesystem::path &path, const std::string &text)
{
  std::ofstream(path) << text;
}

}  // namespace

TEST(NepModel, EvaluateScalarProblem)
{
  const auto p = bench::toy(1.0);
  const Complex lam = 0.7 + 0.2i;
  EXPECT_LE(std::abs(evaluate_nep(*p, lam)(0, 0) - (lam - 2.0 + std::exp(-lam))), 1e-15);
}

TEST(NepModel, EvaluateMatchesManualSum)
{
  const auto p = bench::random_small({}, 11);
  const Complex lam = -0.3 + 0.6i;
  Matrix want = p->poly.evaluate(lam, p->n);
  for (const auto &t : p->terms)
  {
    want += (t.c - lam * t.d) * t.g(lam);
  }
  EXPECT_LE((evaluate_nep(*p, lam) - want).norm(), 1e-14 * want.norm());
}

TEST(NepModel, ChebyshevBasis)
{
  PolynomialPart poly;
  poly.basis = BasisKind::Chebyshev;
  poly.lo = 1.0;
  poly.hi = 5.0;
  for (int i = 0; i < 4; ++i)
  {
    poly.a.push_back(Matrix::Zero(1, 1));
    poly.b.push_back(Matrix::Zero(1, 1));
  }
  const Complex lam = 2.2 + 0.4i;
  const Complex x = (2.0 * lam - 6.0) / 4.0;
  const Vector f = poly.basis_values(lam);
  EXPECT_LE(std::abs(f(0) - 1.0), 1e-15);
  EXPECT_LE(std::abs(f(1) - x), 1e-15);
  EXPECT_LE(std::abs(f(2) - (2.0 * x * x - 1.0)), 1e-14);
  EXPECT_LE(std::abs(f(3) - (4.0 * x * x * x - 3.0 * x)), 1e-14);
  EXPECT_LE(((poly.basis_m() - lam * poly.basis_n()) * f).norm(), 1e-14);
}

TEST(NepModel, EvaluationFailureNamesTerm)
{
  auto p = bench::toy(1.0);
  p->terms[0].g = ScalarFunction::builtin("boom", [](Complex) -> Complex {
    throw Error(ErrorKind::PoleEvaluation, "pole");
  });
  try
  {
    evaluate_nep(*p, 1.0);
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_NE(std::string(e.what()).find("term 0"), std::string::npos) << e.what();
  }
}

TEST(NepModel, ValidateRejectsBadSizes)
{
  auto p = bench::random_small({}, 1);
  p->terms[0].c = Matrix::Zero(2, 2);
  EXPECT_THROW(p->validate(), Error);
}

TEST(NepModel, LowRankFactorization)
{
  NonlinearTerm t;
  t.c = Matrix::Zero(5, 5);
  t.c(0, 0) = 1.0;
  t.d = Matrix::Zero(5, 5);
  t.g = ScalarFunction::parse("exp(lam)");
  const auto r1 = low_rank_factorize(t);
  ASSERT_TRUE(r1.low_rank);
  EXPECT_EQ(r1.low_rank->rank(), 1);

  t.c.setZero();
  EXPECT_EQ(low_rank_factorize(t).low_rank->rank(), 0);

  std::mt19937_64 rng(4);
  Matrix x(6, 3), y(6, 3), u(6, 2), v(6, 2);
  for (auto *m : {&x, &y, &u, &v})
  {
    for (Index j = 0; j < m->cols(); ++j)
    {
      m->col(j) = random_vector(6, rng);
    }
  }
  t.c = x * y.adjoint();
  t.d = u * v.adjoint();
  const auto r = low_rank_factorize(t);
  EXPECT_EQ(r.low_rank->rank(), 5);
  const auto &lr = *r.low_rank;
  EXPECT_LE((lr.z.adjoint() * lr.z - Matrix::Identity(5, 5)).norm(), 1e-13);
  EXPECT_LE((lr.c * lr.z.adjoint() - t.c).norm(), 1e-12 * t.c.norm());
  EXPECT_LE((lr.d * lr.z.adjoint() - t.d).norm(), 1e-12 * t.d.norm());

  t.c = Matrix::Identity(6, 6);
  const auto full = low_rank_factorize(t);
  EXPECT_EQ(full.low_rank->rank(), 6);
  EXPECT_EQ(full.low_rank->z, Matrix::Identity(6, 6));
}

TEST(NepModel, ApproximationModes)
{
  const auto p = bench::random_small({}, 7);
  ApproxOptions opts;
  opts.max_degree = 12;
  for (auto mode : {ApproxMode::PerFunction, ApproxMode::SetValued, ApproxMode::Grouped})
  {
    opts.mode = mode;
    opts.groups = {{1}, {0}};
    const auto r = approximate(p, opts);
    const std::size_t expect_groups = mode == ApproxMode::SetValued ? 1 : 2;
    EXPECT_EQ(r.groups.size(), expect_groups) << to_string(mode);
    EXPECT_LE(r.report.e_f, 1e-11) << to_string(mode);
    EXPECT_LE(r.report.e_m, 1e-11) << to_string(mode);
    for (Index t = 0; t < 2; ++t)
    {
      EXPECT_LE(std::abs(r.eval_term(t, 0.3i) - r.eval_term_barycentric(t, 0.3i)), 1e-12);
    }
    EXPECT_LE((evaluate_rational(r, 0.1) - evaluate_rational_barycentric(r, 0.1)).norm(),
              1e-12 * evaluate_rational(r, 0.1).norm());
  }
  opts.mode = ApproxMode::Grouped;
  opts.groups = {{0}};
  EXPECT_THROW(approximate(p, opts), Error);
  EXPECT_EQ(parse_approx_mode(to_string(ApproxMode::Grouped)), ApproxMode::Grouped);
}

TEST(NepModel, SharedRealizationSizes)
{
  const auto p = bench::random_small({}, 7);
  auto r = approximate(p);
  ASSERT_EQ(r.groups.size(), 1u);
  const Index ell = r.groups[0].size();
  EXPECT_EQ(r.realization_size_collapsed(), ell);
  EXPECT_EQ(r.realization_size_full(), 2 * ell);
  EXPECT_EQ(r.total_degree(), ell - 1);
}

TEST(NepModel, ErrorMeasuresOnExactFit)
{
  // Rational g is reproduced exactly, so both errors are at rounding level.
  auto p = bench::toy(1.0);
  p->terms[0].g = ScalarFunction::parse("1/(lam + 3)");
  const auto r = approximate(p);
  EXPECT_LE(r.report.e_f, 1e-13);
  EXPECT_LE(r.report.e_m, 1e-13);
  EXPECT_EQ(r.report.degrees, std::vector<Index>{1});
  EXPECT_EQ(r.report.test_points, 1000);
}

TEST(NepModel, ErrorMeasuresSkipFailingPoints)
{
  auto p = bench::toy(1.0);
  p->terms[0].g = ScalarFunction::parse("1/(lam + 3)");
  const auto r = approximate(p);
  const SampleSet test({Complex(-3.0), Complex(0.5), Complex(1.5)});
  const auto rep = approximation_errors(*p, r, test);
  EXPECT_EQ(rep.skipped, 1);
  EXPECT_EQ(rep.test_points, 2);
}

TEST(NepModel, NoTermsGiveZeroError)
{
  const auto r = approximate(bench::linear_diag());
  EXPECT_EQ(r.report.e_m, 0.0);
  EXPECT_TRUE(r.groups.empty());
}

TEST(Region, SamplingIsDeterministicAndInside)
{
  const auto reg = Region::half_disk(62500.0, 50000.0, 500, 500, 3);
  const auto a = reg.sample();
  const auto b = reg.sample();
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(a.size(), 1000);
  for (Index i = 0; i < a.size(); ++i)
  {
    EXPECT_EQ(a[i], b[i]);
    EXPECT_TRUE(reg.contains(a[i]));
  }
  const auto t = reg.test_points(1000, 4);
  for (Index i = 0; i < t.size(); ++i)
  {
    EXPECT_TRUE(reg.contains(t[i]));
  }
  EXPECT_FALSE(reg.contains(62500.0 - 10.0i));
  EXPECT_NEAR(reg.diameter(), 100000.0, 1e-9);
}

TEST(Region, RectangleWithEdge)
{
  auto reg = Region::rectangle(0.0, 300.0 + 510.0i, 100, 50, 1);
  reg.edge_from = 1.0;
  reg.edge_to = 300.0;
  const auto s = reg.sample();
  Index on_edge = 0;
  for (Index i = 0; i < s.size(); ++i)
  {
    EXPECT_TRUE(reg.contains(s[i]));
    on_edge += s[i].imag() == 0.0;
  }
  EXPECT_EQ(on_edge, 50);
  EXPECT_EQ(parse_region_kind("half-disk"), Region::Kind::HalfDisk);
  EXPECT_THROW(parse_region_kind("ellipse"), Error);
}

TEST(Config, ParseAndBuild)
{
  const auto dir = scratch_dir("config_build");
  save_matrix(dir / "a0.mtx", Matrix::Identity(2, 2) * -2.0);
  save_matrix(dir / "b0.mtx", -Matrix::Identity(2, 2));
  Matrix c = Matrix::Zero(2, 2);
  c(0, 0) = 1.0;
  save_matrix(dir / "c.mtx", c);
  write_file(dir / "p.toml", R"toml(# test problem
name = "tiny"
n = 2

[params]
s = 0.5

[[poly]]
index = 0
A = "a0.mtx"
B = "b0.mtx"

[[term]]
C = "c.mtx"
g = "exp(-s*lam)"
lowrank = true

[region]
kind = "interval"
lo = "0"
hi = "4"
samples = 300

[approx]
mode = "per-function"
tol = 1e-12

[solve]
shifts = ["1.5", "0.5+0.5i"]
iters = 12
variant = "full"
residual = "absolute"
)toml");
  const auto cfg = load_problem_config(dir / "p.toml");
  EXPECT_EQ(cfg.problem->name, "tiny");
  EXPECT_EQ(cfg.problem->n, 2);
  EXPECT_EQ(cfg.problem->terms[0].low_rank->rank(), 1);
  EXPECT_EQ(cfg.problem->region.sample().size(), 300);
  EXPECT_EQ(cfg.approx.mode, ApproxMode::PerFunction);
  EXPECT_EQ(cfg.approx.tol, 1e-12);
  ASSERT_EQ(cfg.solve.shifts.size(), 2u);
  EXPECT_EQ(cfg.solve.shifts[1], 0.5 + 0.5i);
  EXPECT_EQ(cfg.solve.iters, 12);
  EXPECT_FALSE(cfg.solve.relative_residual);
  const Complex lam = 1.0 + 0.1i;
  EXPECT_LE(std::abs(evaluate_nep(*cfg.problem, lam)(0, 0) - (lam - 2.0 + std::exp(-0.5 * lam))),
            1e-15);
}

TEST(Config, ErrorsCarryFileAndLine)
{
  const auto dir = scratch_dir("config_errors");
  save_matrix(dir / "a0.mtx", Matrix::Identity(2, 2));
  const std::pair<const char *, const char *> cases[] = {
      {"n = 2\n[[poly]]\nindex = 0\nA = \"missing.mtx\"\n", ":4:"},
      {"n = 2\n[[poly]]\nA = \"a0.mtx\"\n[[term]]\ng = \"sqrt(lam\"\n", ":5:"},
      {"n = 3\n[[poly]]\nA = \"a0.mtx\"\n", ":3:"},
      {"n = 2\nbogus line\n", ":2:"},
      {"n = 2\n[[poly]]\nA = \"a0.mtx\"\n[solve]\nvariant = 3\n", ":5:"},
  };
  for (const auto &[text, where] : cases)
  {
    write_file(dir / "bad.toml", text);
    try
    {
      load_problem_config(dir / "bad.toml");
      FAIL() << text;
    }
    catch (const Error &e)
    {
      EXPECT_EQ(e.kind(), ErrorKind::Config) << e.what();
      const std::string msg = e.what();
      EXPECT_NE(msg.find("bad.toml" + std::string(where)), std::string::npos) << msg;
    }
  }
}

TEST(Config, ExportRoundTrip)
{
  for (const char *name : {"random", "car", "branch-chain", "toy"})
  {
    const auto cfg = bench::builtin_problem(name, 2);
    const auto dir = scratch_dir(std::string("export_") + name);
    const auto path = export_problem(cfg, dir);
    const auto back = load_problem_config(path);
    EXPECT_EQ(back.problem->n, cfg.problem->n);
    EXPECT_EQ(back.problem->terms.size(), cfg.problem->terms.size());
    EXPECT_EQ(back.solve.shifts, cfg.solve.shifts);
    EXPECT_EQ(back.approx.mode, cfg.approx.mode);
    const auto s0 = cfg.problem->region.sample();
    const auto s1 = back.problem->region.sample();
    ASSERT_EQ(s0.size(), s1.size()) << name;
    for (Index i = 0; i < s0.size(); i += 97)
    {
      EXPECT_EQ(s0[i], s1[i]) << name;
    }
    for (Complex lam : {s0[0], s0[s0.size() / 2]})
    {
      const Matrix a0 = evaluate_nep(*cfg.problem, lam);
      const Matrix a1 = evaluate_nep(*back.problem, lam);
      EXPECT_LE((a0 - a1).norm(), 1e-14 * a0.norm()) << name;
    }
  }
}
