// SPDX-License-Identifier: Apache-2.0

#include "aaaeigs/bench.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

namespace aaaeigs
{

namespace
{

const ParamTable &gun_params()
{
  static const ParamTable p = {{"sigma1", bench::GUN_SIGMA1}, {"sigma2", bench::GUN_SIGMA2}};
  return p;
}

const ParamTable &beam_params()
{
  static const ParamTable p = {
      {"G0", 350.4e3}, {"Ginf", 3.062e6}, {"tau", 8.23e-9}, {"alpha", 0.675}};
  return p;
}

constexpr const char *GUN_SQRT1 = "sqrt(lam - sigma1^2)";
constexpr const char *GUN_SQRT2 = "sqrt(lam - sigma2^2)";
constexpr const char *BEAM_MODULUS =
    "(G0 + Ginf*(i*lam*tau)^alpha) / (1 + (i*lam*tau)^alpha)";
// ω = 2πλ with λ in Hz.
constexpr const char *CAR_HK =
    "phi / (ainf + sigma*phi/(i*(2*pi*lam)*rho0)"
    " * sqrt(1 + i*(2*pi*lam)*rho0*4*ainf^2*eta/(sigma^2*Lam^2*phi^2)))";
constexpr const char *CAR_HM =
    "phi*(gamma - (gamma - 1) / (1 + 8*eta/(i*(2*pi*lam)*rho0*Lamp^2*Pr)"
    " * sqrt(1 + i*(2*pi*lam)*rho0*Lamp^2*Pr/(16*eta))))";

std::string lam_times(const char *expr)
{
  return std::string("lam*(") + expr + ")";
}

Matrix random_gaussian(Index rows, Index cols, std::mt19937_64 &rng)
{
  std::normal_distribution<double> n;
  Matrix a(rows, cols);
  for (Index j = 0; j < cols; ++j)
  {
    for (Index i = 0; i < rows; ++i)
    {
      a(i, j) = n(rng);
    }
  }
  return a;
}

Matrix random_complex(Index rows, Index cols, std::mt19937_64 &rng)
{
  std::normal_distribution<double> n;
  Matrix a(rows, cols);
  for (Index j = 0; j < cols; ++j)
  {
    for (Index i = 0; i < rows; ++i)
    {
      const double re = n(rng);
      a(i, j) = Complex(re, n(rng));
    }
  }
  return a;
}

// Real orthonormal n x n matrix.
Matrix random_orthogonal(Index n, std::mt19937_64 &rng)
{
  Eigen::HouseholderQR<Matrix> qr(random_gaussian(n, n, rng));
  return qr.householderQ() * Matrix::Identity(n, n);
}

// Returns (K, M) SPD with generalized eigenvalues exactly `targets`.
std::pair<Matrix, Matrix> pencil_with_spectrum(const std::vector<double> &targets,
                                               std::mt19937_64 &rng)
{
  const Index n = static_cast<Index>(targets.size());
  Matrix m = bench::random_spsd(n, n, 1.0, rng);
  Eigen::LLT<Matrix> llt(m);
  const Matrix l = llt.matrixL();
  const Matrix q = random_orthogonal(n, rng);
  Vector d(n);
  for (Index i = 0; i < n; ++i)
  {
    d(i) = targets[static_cast<std::size_t>(i)];
  }
  Matrix k = l * q * d.asDiagonal() * q.adjoint() * l.adjoint();
  k = 0.5 * (k + k.adjoint()).eval();
  return {k.real().cast<Complex>(), m};
}

std::vector<double> uniform_values(Index n, double lo, double hi, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> out;
  for (Index i = 0; i < n; ++i)
  {
    out.push_back(u(rng));
  }
  return out;
}

}  // namespace

std::optional<ScalarFunction> builtin_function(std::string_view name)
{
  if (name == "gun_sqrt1")
  {
    return ScalarFunction::parse(GUN_SQRT1, gun_params());
  }
  if (name == "gun_sqrt2")
  {
    return ScalarFunction::parse(GUN_SQRT2, gun_params());
  }
  if (name == "beam_modulus")
  {
    return ScalarFunction::parse(BEAM_MODULUS, beam_params());
  }
  if (name == "car_hK")
  {
    return ScalarFunction::parse(CAR_HK, bench::car_parameters());
  }
  if (name == "car_hM")
  {
    return ScalarFunction::parse(CAR_HM, bench::car_parameters());
  }
  if (name == "car_lam_hM")
  {
    return ScalarFunction::parse(lam_times(CAR_HM), bench::car_parameters());
  }
  return std::nullopt;
}

namespace bench
{

Matrix random_spsd(Index n, Index rank, double scale, std::mt19937_64 &rng)
{
  const Matrix q = random_orthogonal(n, rng).leftCols(rank);
  const auto eig = uniform_values(rank, 0.5 * scale, 1.5 * scale, rng);
  Vector d(rank);
  for (Index i = 0; i < rank; ++i)
  {
    d(i) = eig[static_cast<std::size_t>(i)];
  }
  Matrix a = q * d.asDiagonal() * q.adjoint();
  return (0.5 * (a + a.adjoint())).real().cast<Complex>();
}

Region gun_region(std::uint64_t seed)
{
  return Region::half_disk(GUN_CENTER, GUN_RADIUS, 500, 500, seed);
}

std::vector<ScalarFunction> gun_functions()
{
  return {ScalarFunction::parse(GUN_SQRT1, gun_params()),
          ScalarFunction::parse(GUN_SQRT2, gun_params())};
}

std::shared_ptr<NepProblem> gun_analog(Index n, std::uint64_t seed)
{
  if (n < 2)
  {
    throw Error(ErrorKind::InvalidInput, "gun analog needs n >= 2");
  }
  std::mt19937_64 rng(seed);
  auto p = std::make_shared<NepProblem>();
  p->name = "gun";
  p->n = n;
  // Undamped spectrum spread over and beyond the real diameter of the disk.
  auto [k, m] = pencil_with_spectrum(uniform_values(n, 5.0e3, 1.5e5, rng), rng);
  p->poly.a = {k};
  p->poly.b = {m};
  const Index rank = std::max<Index>(1, n / 10);
  const auto fns = gun_functions();
  for (int t = 0; t < 2; ++t)
  {
    NonlinearTerm term;
    term.c = Complex(0.0, 1.0) * random_spsd(n, rank, 20.0, rng);
    term.d = Matrix::Zero(n, n);
    term.g = fns[static_cast<std::size_t>(t)];
    p->terms.push_back(low_rank_factorize(term));
  }
  p->params = gun_params();
  p->region = gun_region(seed);
  return p;
}

std::vector<Complex> gun_shifts()
{
  return {Complex(37500.0, 0.0), Complex(62500.0, 0.0), Complex(87500.0, 0.0),
          Complex(50000.0, 20000.0), Complex(75000.0, 20000.0)};
}

ScalarFunction beam_modulus()
{
  return ScalarFunction::parse(BEAM_MODULUS, beam_params());
}

Region beam_region()
{
  return Region::interval(200.0, 30000.0, 10000);
}

std::shared_ptr<NepProblem> sandwich_beam(Index n, std::uint64_t seed)
{
  if (n < 2)
  {
    throw Error(ErrorKind::InvalidInput, "sandwich beam needs n >= 2");
  }
  std::mt19937_64 rng(seed);
  auto p = std::make_shared<NepProblem>();
  p->name = "beam";
  p->n = n;
  std::vector<double> omega2;
  for (double w : uniform_values(n, 300.0, 2.9e4, rng))
  {
    omega2.push_back(w * w);
  }
  auto [k, m] = pencil_with_spectrum(omega2, rng);
  // The modulus is O(1e6); scale C so the term perturbs K by a few percent.
  const Matrix c = random_spsd(n, n, 1e-8 * k.norm() / std::sqrt(static_cast<double>(n)), rng);
  p->poly.a = {k, Matrix::Zero(n, n), -m};
  p->poly.b = {Matrix::Zero(n, n), Matrix::Zero(n, n), Matrix::Zero(n, n)};
  NonlinearTerm term{c, Matrix::Zero(n, n), beam_modulus(), std::nullopt};
  p->terms.push_back(low_rank_factorize(term));
  p->params = beam_params();
  p->region = beam_region();
  return p;
}

ParamTable car_parameters()
{
  return {{"ainf", 1.7},   {"sigma", 13500.0}, {"phi", 0.98},   {"eta", 1.839e-5},
          {"Lam", 80e-6},  {"Lamp", 160e-6},   {"gamma", 1.4},  {"rho0", 1.213},
          {"Pr", 0.7217}};
}

CarFunctions car_cavity_functions()
{
  const auto params = car_parameters();
  return {ScalarFunction::parse(CAR_HK, params), ScalarFunction::parse(CAR_HM, params)};
}

Region car_region(double top, Index interior, Index edge, std::uint64_t seed)
{
  Region r = Region::rectangle(0.0, Complex(300.0, top), interior, edge, seed);
  r.edge_from = 1.0;
  r.edge_to = 300.0;
  return r;
}

Region car_region_small(std::uint64_t seed)
{
  return car_region(510.0, 5000, 5000, seed);
}

Region car_region_large(std::uint64_t seed)
{
  return car_region(1.0e4, 50000, 50000, seed);
}

std::shared_ptr<NepProblem> car_cavity(Index n, std::uint64_t seed, bool large)
{
  if (n < 2)
  {
    throw Error(ErrorKind::InvalidInput, "car cavity needs n >= 2");
  }
  std::mt19937_64 rng(seed);
  auto p = std::make_shared<NepProblem>();
  p->name = large ? "car-large" : "car";
  p->n = n;
  std::vector<double> omega2;
  for (double w : uniform_values(n, 5.0, 320.0, rng))
  {
    omega2.push_back(w * w);
  }
  auto [k0, m0] = pencil_with_spectrum(omega2, rng);
  const Index rank = std::max<Index>(1, n / 4);
  const Matrix k1 = random_spsd(n, rank, 0.05 * k0.norm() / std::sqrt(static_cast<double>(n)), rng);
  const Matrix m1 = random_spsd(n, rank, 0.05, rng);
  p->poly.a = {k0, Matrix::Zero(n, n), -m0};
  p->poly.b = {Matrix::Zero(n, n), Matrix::Zero(n, n), Matrix::Zero(n, n)};
  const auto params = car_parameters();
  // −λ² h_M M₁ = (0 − λ M₁) · λ h_M.
  p->terms.push_back(
      low_rank_factorize({k1, Matrix::Zero(n, n), ScalarFunction::parse(CAR_HK, params), {}}));
  p->terms.push_back(low_rank_factorize(
      {Matrix::Zero(n, n), m1, ScalarFunction::parse(lam_times(CAR_HM), params), {}}));
  p->params = params;
  p->region = large ? car_region_large(seed) : car_region_small(seed);
  return p;
}

std::vector<double> branch_points(Index n_funcs)
{
  std::vector<double> out;
  for (Index j = 0; j < n_funcs; ++j)
  {
    out.push_back(n_funcs == 1 ? -0.19
                               : -0.19 + 22.49 * static_cast<double>(j) /
                                             static_cast<double>(n_funcs - 1));
  }
  return out;
}

std::shared_ptr<NepProblem> branch_chain(Index n, Index n_funcs, std::uint64_t seed, Index span)
{
  if (n_funcs < 2)
  {
    throw Error(ErrorKind::InvalidInput, "branch chain needs at least 2 functions");
  }
  if (n < 2)
  {
    throw Error(ErrorKind::InvalidInput, "branch chain needs n >= 2");
  }
  std::mt19937_64 rng(seed);
  const auto alpha = branch_points(n_funcs);
  const double lo = alpha.front();
  const double hi = alpha[static_cast<std::size_t>(std::clamp<Index>(span, 1, n_funcs - 1))];
  auto p = std::make_shared<NepProblem>();
  p->name = "branch-chain";
  p->n = n;
  auto [k, m] = pencil_with_spectrum(uniform_values(n, lo, hi, rng), rng);
  p->poly.a = {k};
  p->poly.b = {m};
  std::uniform_int_distribution<Index> rank_pick(1, std::min<Index>(3, n));
  for (Index j = 0; j < n_funcs; ++j)
  {
    const std::string name = "a" + std::to_string(j);
    p->params[name] = alpha[static_cast<std::size_t>(j)];
    const Index rank = rank_pick(rng);
    const Matrix x = random_gaussian(n, rank, rng);
    const Matrix y = random_gaussian(n, rank, rng);
    NonlinearTerm term;
    term.c = 0.1 * x * y.transpose() / static_cast<double>(n);
    term.d = Matrix::Zero(n, n);
    term.g = ScalarFunction::parse("exp(i*sqrt(lam - " + name + "))", p->params);
    p->terms.push_back(low_rank_factorize(term));
  }
  p->region = Region::interval(lo, hi, 2000);
  return p;
}

std::shared_ptr<NepProblem> toy(double sign)
{
  auto p = std::make_shared<NepProblem>();
  p->name = sign > 0 ? "toy" : "toy-minus";
  p->n = 1;
  p->poly.a = {Matrix::Constant(1, 1, -2.0)};
  p->poly.b = {Matrix::Constant(1, 1, -1.0)};
  p->terms.push_back({Matrix::Constant(1, 1, sign), Matrix::Zero(1, 1),
                      ScalarFunction::parse("exp(-lam)"), std::nullopt});
  p->region = Region::interval(0.0, 4.0, 1000);
  return p;
}

std::shared_ptr<NepProblem> linear_diag()
{
  auto p = std::make_shared<NepProblem>();
  p->name = "linear";
  p->n = 3;
  Matrix a = Matrix::Zero(3, 3);
  a.diagonal() << 1.0, 2.0, 3.0;
  p->poly.a = {a};
  p->poly.b = {Matrix::Identity(3, 3)};
  p->region = Region::interval(0.0, 4.0, 100);
  return p;
}

std::shared_ptr<NepProblem> random_small(const RandomSpec &spec, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  const Index n = spec.n;
  auto p = std::make_shared<NepProblem>();
  p->name = "random";
  p->n = n;
  p->poly.basis = spec.chebyshev ? BasisKind::Chebyshev : BasisKind::Monomial;
  p->poly.lo = -1.0;
  p->poly.hi = 1.0;
  const double decay = 1.0 / static_cast<double>(std::max<Index>(spec.k, 1));
  for (Index i = 0; i < spec.k; ++i)
  {
    const double w = std::pow(decay, static_cast<double>(i));
    p->poly.a.push_back(w * random_complex(n, n, rng));
    p->poly.b.push_back(i == 0 ? Matrix(Matrix::Identity(n, n) + 0.1 * random_complex(n, n, rng))
                               : Matrix(w * 0.1 * random_complex(n, n, rng)));
  }
  // Poles of every function sit well outside the square.
  const std::vector<std::string> family = {"exp(-c*lam)", "1/(lam - c - 3)", "sqrt(lam + c + 2.5)",
                                           "exp(i*c*lam)/(lam + 4)"};
  std::uniform_real_distribution<double> cpick(0.2, 1.0);
  std::uniform_int_distribution<Index> rank_pick(1, n);
  for (Index t = 0; t < spec.terms; ++t)
  {
    const std::string c_name = "c" + std::to_string(t);
    p->params[c_name] = cpick(rng);
    std::string expr = family[static_cast<std::size_t>(t) % family.size()];
    expr.replace(expr.find('c'), 1, c_name);
    // Mixed ranks: alternate full rank and a random lower rank.
    const Index rank = t % 2 == 0 ? n : std::max<Index>(1, rank_pick(rng) / 2);
    const Matrix z = random_complex(n, rank, rng);
    NonlinearTerm term;
    term.c = random_complex(n, rank, rng) * z.adjoint() / static_cast<double>(n);
    term.d = 0.3 * random_complex(n, rank, rng) * z.adjoint() / static_cast<double>(n);
    term.g = ScalarFunction::parse(expr, p->params);
    p->terms.push_back(low_rank_factorize(term));
  }
  p->region = Region::rectangle(Complex(-1.0, -1.0), Complex(1.0, 1.0), 300, 200, seed);
  return p;
}

namespace
{

SolveSettings solve_settings(std::vector<Complex> shifts, Index iters, std::string variant,
                             Index track, std::uint64_t seed, bool relative = true)
{
  SolveSettings s;
  s.shifts = std::move(shifts);
  s.iters = iters;
  s.variant = std::move(variant);
  s.track = track;
  s.seed = seed;
  s.relative_residual = relative;
  return s;
}

}  // namespace

ProblemConfig builtin_problem(std::string_view name, std::uint64_t seed)
{
  ProblemConfig cfg;
  if (name == "toy" || name == "toy-minus")
  {
    cfg.problem = toy(name == "toy" ? 1.0 : -1.0);
    // Relative residual is identically 1 for n = 1.
    cfg.solve = solve_settings({1.5}, 20, "full", 1, seed, false);
  }
  else if (name == "linear")
  {
    cfg.problem = linear_diag();
    cfg.solve = solve_settings({0.0}, 3, "full", 3, seed);
  }
  else if (name == "gun")
  {
    cfg.problem = gun_analog(60, seed);
    cfg.solve = solve_settings(gun_shifts(), 60, "trimmed", 5, seed);
  }
  else if (name == "beam")
  {
    cfg.problem = sandwich_beam(24, seed);
    cfg.approx.mode = ApproxMode::PerFunction;
    cfg.solve = solve_settings({5000.0, 12000.0, 20000.0}, 40, "trimmed", 5, seed);
  }
  else if (name == "car" || name == "car-large")
  {
    cfg.problem = car_cavity(20, seed, name == "car-large");
    std::vector<Complex> shifts;
    for (int s = 0; s < 10; ++s)
    {
      shifts.emplace_back(1.0 + 299.0 * s / 9.0, 0.0);
    }
    cfg.solve = solve_settings(shifts, 60, "trimmed", 5, seed);
  }
  else if (name == "branch-chain")
  {
    // Two branch points keep the full pencil under the dense verification limit.
    cfg.problem = branch_chain(6, 4, seed, 1);
    cfg.solve = solve_settings({1.0, 4.0, 7.0}, 40, "trimmed", 5, seed);
  }
  else if (name == "random")
  {
    cfg.problem = random_small(RandomSpec{}, seed);
    cfg.approx.mode = ApproxMode::PerFunction;
    cfg.approx.max_degree = 5;
    cfg.solve = solve_settings({0.1 + 0.1i, -0.5 - 0.2i}, 30, "trimmed", 5, seed);
  }
  else
  {
    throw Error(ErrorKind::Config, "unknown builtin problem '" + std::string(name) + "'");
  }
  cfg.problem->name = std::string(name);
  return cfg;
}

std::vector<std::string> builtin_names()
{
  return {"toy", "toy-minus", "linear", "gun", "beam", "car", "car-large", "branch-chain",
          "random"};
}

}  // namespace bench
}  // namespace aaaeigs
