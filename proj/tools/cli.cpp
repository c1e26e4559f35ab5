// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "aaaeigs/bench.hpp"
#include "aaaeigs/krylov.hpp"
#include "aaaeigs/verify.hpp"

namespace aaaeigs::cli
{

namespace
{

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct CommonArgs
{
  std::string config;
  std::string builtin;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  bool quiet = false;
  bool verbose = false;
};

struct ApproxArgs
{
  std::optional<std::string> mode;
  std::optional<double> tol;
  std::optional<Index> max_degree;
  std::optional<Index> degree_sweep;
};

struct SolveArgs
{
  std::optional<std::string> shifts;
  std::optional<Index> iters;
  std::optional<double> tol;
  std::optional<std::string> variant;
  std::optional<Index> track;
  std::optional<std::string> residual;
};

struct VerifyArgs
{
  bool corrupt_weights = false;
  Index guard = 2000;
};

class Timer
{
public:
  double lap()
  {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

std::uint64_t default_seed()
{
  if (const char *env = std::getenv("AAAEIGS_SEED"))
  {
    try
    {
      return std::stoull(env);
    }
    catch (const std::exception &)
    {
      throw Error(ErrorKind::Config, std::string("AAAEIGS_SEED is not an integer: ") + env);
    }
  }
  return 1;
}

// FNV-1a over the configuration source, for run identification.
std::string source_hash(const std::string &text)
{
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text)
  {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

struct Loaded
{
  ProblemConfig cfg;
  std::string source;  // "builtin:<name>" or the config path
  std::string hash;
};

Loaded load(const CommonArgs &a)
{
  if (a.config.empty() == a.builtin.empty())
  {
    throw Error(ErrorKind::Config, "give exactly one of a config path or --builtin");
  }
  Loaded l;
  if (!a.builtin.empty())
  {
    l.cfg = bench::builtin_problem(a.builtin, a.seed);
    l.source = "builtin:" + a.builtin;
    l.hash = source_hash(l.source + ":" + std::to_string(a.seed));
    return l;
  }
  std::ifstream in(a.config);
  if (!in)
  {
    throw Error(ErrorKind::Config, "cannot open config file " + a.config);
  }
  std::stringstream text;
  text << in.rdbuf();
  l.cfg = load_problem_config(a.config);
  l.cfg.solve.seed = a.seed;
  l.source = a.config;
  l.hash = source_hash(text.str());
  return l;
}

void apply(ApproxOptions &o, const ApproxArgs &a)
{
  if (a.mode)
  {
    o.mode = parse_approx_mode(*a.mode);
  }
  if (a.tol)
  {
    o.tol = *a.tol;
  }
  if (a.max_degree)
  {
    o.max_degree = *a.max_degree;
  }
}

std::vector<Complex> parse_shift_list(const std::string &text)
{
  std::vector<Complex> out;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ','))
  {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos)
    {
      continue;
    }
    const auto e = item.find_last_not_of(" \t");
    try
    {
      out.push_back(parse_complex(item.substr(b, e - b + 1)));
    }
    catch (const Error &err)
    {
      throw Error(ErrorKind::Config, std::string("--shifts: ") + err.what());
    }
  }
  if (out.empty())
  {
    throw Error(ErrorKind::Config, "--shifts needs at least one value");
  }
  return out;
}

void apply(SolveSettings &s, const SolveArgs &a)
{
  if (a.shifts)
  {
    s.shifts = parse_shift_list(*a.shifts);
  }
  if (a.iters)
  {
    s.iters = *a.iters;
  }
  if (a.tol)
  {
    s.tol = *a.tol;
  }
  if (a.variant)
  {
    s.variant = *a.variant;
  }
  if (a.track)
  {
    s.track = *a.track;
  }
  if (a.residual)
  {
    if (*a.residual != "relative" && *a.residual != "absolute")
    {
      throw Error(ErrorKind::Config, "--residual must be relative or absolute");
    }
    s.relative_residual = *a.residual == "relative";
  }
}

std::ofstream open_output(const fs::path &dir, const std::string &name)
{
  std::ofstream f(dir / name);
  if (!f)
  {
    throw Error(ErrorKind::Io, "cannot write " + (dir / name).string());
  }
  f << std::setprecision(17);
  return f;
}

void write_json(const fs::path &dir, const json &report)
{
  auto f = open_output(dir, "report.json");
  f << report.dump(2) << "\n";
}

json complex_json(Complex z)
{
  return json::array({z.real(), z.imag()});
}

json complex_list_json(const std::vector<Complex> &zs)
{
  json out = json::array();
  for (auto z : zs)
  {
    out.push_back(complex_json(z));
  }
  return out;
}

json config_json(const Loaded &l, const CommonArgs &a)
{
  const auto &cfg = l.cfg;
  json groups = json::array();
  for (const auto &g : cfg.approx.groups)
  {
    groups.push_back(g);
  }
  return {
      {"source", l.source},
      {"hash", l.hash},
      {"seed", a.seed},
      {"problem", {{"name", cfg.problem->name}, {"n", cfg.problem->n}, {"k", cfg.problem->poly.k()},
                   {"terms", cfg.problem->terms.size()},
                   {"region", cfg.problem->region.kind_name()},
                   {"region_seed", cfg.problem->region.seed},
                   {"samples", cfg.problem->region.sample().size()}}},
      {"approx", {{"mode", to_string(cfg.approx.mode)}, {"tol", cfg.approx.tol},
                  {"max_degree", cfg.approx.max_degree}, {"cleanup", cfg.approx.cleanup},
                  {"groups", groups}, {"test_points", cfg.approx.test_count},
                  {"test_seed", cfg.approx.test_seed}}},
      {"solve", {{"shifts", complex_list_json(cfg.solve.shifts)}, {"iters", cfg.solve.iters},
                 {"tol", cfg.solve.tol}, {"variant", cfg.solve.variant}, {"track", cfg.solve.track},
                 {"seed", cfg.solve.seed},
                 {"residual", cfg.solve.relative_residual ? "relative" : "absolute"}}},
  };
}

json fit_json(const RationalNep &r)
{
  return {{"degrees", r.report.degrees}, {"total_degree", r.total_degree()},
          {"E_f", r.report.e_f}, {"E_m", r.report.e_m},
          {"test_points", r.report.test_points}, {"skipped_points", r.report.skipped},
          {"converged", r.report.converged}};
}

void write_poles(const fs::path &dir, const RationalNep &r)
{
  auto f = open_output(dir, "poles.csv");
  f << "re,im,group\n";
  auto poles = r.poles();
  std::stable_sort(poles.begin(), poles.end(), [](const auto &a, const auto &b) {
    if (a.second != b.second)
    {
      return a.second < b.second;
    }
    if (a.first.real() != b.first.real())
    {
      return a.first.real() < b.first.real();
    }
    return a.first.imag() < b.first.imag();
  });
  for (const auto &[z, g] : poles)
  {
    f << z.real() << "," << z.imag() << "," << g << "\n";
  }
}

fs::path prepare_dir(const CommonArgs &a)
{
  fs::path dir(a.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
  {
    throw Error(ErrorKind::Io, "cannot create output directory " + dir.string());
  }
  return dir;
}

struct SweepRow
{
  Index degree;
  double e_f;
  double e_m;
};

// Fits along a tolerance ladder (or a degree cap ladder); one row per
// distinct total degree, keeping the most accurate fit for that degree.
std::vector<SweepRow> sweep(const ProblemConfig &cfg, std::optional<Index> degree_sweep)
{
  std::map<Index, SweepRow> rows;
  const auto base = error_baseline(*cfg.problem, approximation_test_set(*cfg.problem, cfg.approx));
  auto add = [&](ApproxOptions o) {
    o.test_count = 0;
    const auto r = approximate(cfg.problem, o);
    const auto rep = approximation_errors(*cfg.problem, r, base);
    SweepRow row{r.total_degree(), rep.e_f, rep.e_m};
    auto [it, fresh] = rows.emplace(row.degree, row);
    if (!fresh && row.e_f < it->second.e_f)
    {
      it->second = row;
    }
  };
  if (cfg.problem->terms.empty())
  {
    add(cfg.approx);
  }
  else if (degree_sweep)
  {
    for (Index d = 0; d <= *degree_sweep; ++d)
    {
      ApproxOptions o = cfg.approx;
      o.max_degree = d;
      add(o);
    }
  }
  else
  {
    for (double tol = 1e-1; tol > cfg.approx.tol * 1.0001; tol /= 10.0)
    {
      ApproxOptions o = cfg.approx;
      o.tol = tol;
      add(o);
    }
    add(cfg.approx);
  }
  std::vector<SweepRow> out;
  for (const auto &[d, row] : rows)
  {
    out.push_back(row);
  }
  return out;
}

int cmd_approx(const CommonArgs &a, const ApproxArgs &aa, std::ostream &out)
{
  Timer timer;
  auto l = load(a);
  apply(l.cfg.approx, aa);
  const fs::path dir = prepare_dir(a);
  const double t_load = timer.lap();
  const auto rows = sweep(l.cfg, aa.degree_sweep);
  const double t_sweep = timer.lap();
  const auto r = approximate(l.cfg.problem, l.cfg.approx);
  const double t_fit = timer.lap();

  {
    auto f = open_output(dir, "approx.csv");
    f << "degree,E_f,E_m\n";
    for (const auto &row : rows)
    {
      f << row.degree << "," << row.e_f << "," << row.e_m << "\n";
    }
  }
  write_poles(dir, r);
  json report = {{"command", "approx"},
                 {"config", config_json(l, a)},
                 {"degree_sweep", aa.degree_sweep ? json(*aa.degree_sweep) : json(nullptr)},
                 {"fit", fit_json(r)},
                 {"sweep_rows", rows.size()},
                 {"times", {{"load", t_load}, {"sweep", t_sweep}, {"fit", t_fit}}}};
  write_json(dir, report);
  out << "fit: degree " << r.total_degree() << ", E_f " << r.report.e_f << ", E_m " << r.report.e_m
      << (r.report.converged ? "" : " (not converged)") << "\n";
  out << "wrote " << (dir / "approx.csv").string() << ", poles.csv, report.json\n";
  return Ok;
}

int cmd_solve(const CommonArgs &a, const ApproxArgs &aa, const SolveArgs &sa, std::ostream &out)
{
  Timer timer;
  auto l = load(a);
  apply(l.cfg.approx, aa);
  apply(l.cfg.solve, sa);
  const auto &s = l.cfg.solve;
  const auto variant = parse_pencil_variant(s.variant);
  if (s.shifts.empty())
  {
    throw Error(ErrorKind::Config, "no shifts: set [solve] shifts or pass --shifts");
  }
  const fs::path dir = prepare_dir(a);
  const double t_load = timer.lap();
  const auto r = approximate(l.cfg.problem, l.cfg.approx);
  const double t_fit = timer.lap();
  const auto pen = build_pencil(r, variant);
  const double t_pencil = timer.lap();
  KrylovOptions ko;
  ko.shifts = s.shifts;
  ko.max_iter = s.iters;
  ko.tol = s.tol;
  ko.track = s.track;
  ko.seed = s.seed;
  ko.relative_residual = s.relative_residual;
  const auto res = rational_krylov(pen, *l.cfg.problem, ko);
  const double t_solve = timer.lap();

  Index converged = 0;
  {
    auto f = open_output(dir, "ritz.csv");
    f << "re,im,residual,converged,first_converged\n";
    for (const auto &rp : res.final_pairs)
    {
      converged += rp.converged;
      f << rp.value.real() << "," << rp.value.imag() << "," << rp.residual << ","
        << (rp.converged ? 1 : 0) << "," << rp.first_converged << "\n";
    }
  }
  {
    auto f = open_output(dir, "history.csv");
    f << "iteration,pair,re,im,residual\n";
    for (const auto &row : res.tracked)
    {
      f << row.iteration << "," << row.pair << "," << row.value.real() << "," << row.value.imag()
        << "," << row.residual << "\n";
    }
  }
  write_poles(dir, r);
  json history = json::array();
  for (const auto &row : res.tracked)
  {
    history.push_back({row.iteration, row.pair, row.value.real(), row.value.imag(), row.residual});
  }
  const double orth = orthogonality_defect(res.state);
  const double recur = recurrence_residual(pen, res.state);
  json report = {
      {"command", "solve"},
      {"config", config_json(l, a)},
      {"fit", fit_json(r)},
      {"pencil", {{"variant", to_string(variant)}, {"dimension", pen.dimension()},
                  {"blocks", pen.blocks.size()}}},
      {"krylov", {{"iterations", res.state.iterations}, {"breakdown", res.state.breakdown},
                  {"shifts_used", complex_list_json(res.state.shifts)},
                  {"rejected_shifts", complex_list_json(res.rejected_shifts)},
                  {"converged", converged}, {"orthogonality", orth}, {"recurrence", recur}}},
      {"history", history},
      {"times", {{"load", t_load}, {"fit", t_fit}, {"pencil", t_pencil}, {"solve", t_solve}}}};
  write_json(dir, report);
  out << "pencil " << to_string(variant) << " of dimension " << pen.dimension() << ", "
      << res.state.iterations << " iterations, " << converged << " converged pair(s)\n";
  for (const auto &rp : res.final_pairs)
  {
    if (rp.converged)
    {
      out << "  " << format_complex(rp.value) << "  residual " << rp.residual << "\n";
    }
  }
  return Ok;
}

int cmd_verify(const CommonArgs &a, const ApproxArgs &aa, const VerifyArgs &va, std::ostream &out)
{
  auto l = load(a);
  apply(l.cfg.approx, aa);
  VerifyOptions vo;
  vo.seed = a.seed;
  vo.guard = va.guard;
  if (va.corrupt_weights)
  {
    vo.tamper = [](RationalNep &r) {
      for (auto &g : r.groups)
      {
        if (g.fit.weights.size() > 1)
        {
          g.fit.weights(g.fit.weights.size() - 1) *= -3.0;
        }
      }
    };
  }
  const auto checks = verify_problem(l.cfg, vo);
  json items = json::array();
  for (const auto &c : checks)
  {
    out << std::left << std::setw(44) << c.name;
    if (c.skipped)
    {
      out << "SKIP  " << c.note << "\n";
    }
    else
    {
      out << std::scientific << std::setprecision(3) << std::setw(12) << c.value << " <= "
          << std::setw(11) << c.threshold << (c.passed ? "  PASS" : "  FAIL")
          << (c.note.empty() ? "" : "  (" + c.note + ")") << "\n"
          << std::defaultfloat;
    }
    items.push_back({{"name", c.name}, {"value", c.skipped ? json(nullptr) : json(c.value)},
                     {"threshold", c.threshold}, {"passed", c.passed}, {"skipped", c.skipped},
                     {"note", c.note}});
  }
  const bool ok = all_passed(checks);
  out << (ok ? "all checks passed" : "verification FAILED") << "\n";
  const fs::path dir = prepare_dir(a);
  write_json(dir, {{"command", "verify"}, {"config", config_json(l, a)},
                   {"corrupt_weights", va.corrupt_weights}, {"checks", items}, {"passed", ok}});
  return ok ? Ok : VerifyFailed;
}

int exit_code(ErrorKind k)
{
  switch (k)
  {
  case ErrorKind::InvalidInput:
  case ErrorKind::Parse:
  case ErrorKind::Io:
  case ErrorKind::Config:
  case ErrorKind::DimensionGuard:
    return Usage;
  default:
    return Numerical;
  }
}

void add_common(CLI::App *sub, CommonArgs &a, ApproxArgs &aa)
{
  sub->add_option("config", a.config, "Problem config file (TOML subset)");
  sub->add_option("--builtin", a.builtin, "Built-in problem")
      ->check(CLI::IsMember(bench::builtin_names()));
  sub->add_option("--seed", a.seed, "Seed for generated data and the Krylov start vector")
      ->capture_default_str();
  sub->add_option("-o,--out", a.out_dir, "Output directory")->capture_default_str();
  sub->add_option("--mode", aa.mode, "Fit mode: per-function, set-valued, grouped");
  sub->add_option("--fit-tol", aa.tol, "AAA tolerance");
  sub->add_option("--max-degree", aa.max_degree, "AAA degree cap");
  sub->add_flag("-q,--quiet", a.quiet, "Only print errors");
  sub->add_flag("-v,--verbose", a.verbose, "Print progress messages");
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Nonlinear eigenvalue solver built on AAA rational approximation"};
  app.require_subcommand(1);
  CommonArgs common;
  ApproxArgs approx_args;
  SolveArgs solve_args;
  VerifyArgs verify_args;
  try
  {
    common.seed = default_seed();
  }
  catch (const Error &e)
  {
    err << "error: " << e.what() << "\n";
    return Usage;
  }

  auto *approx = app.add_subcommand("approx", "Fit the nonlinear terms and sweep the degree");
  add_common(approx, common, approx_args);
  approx->add_option("--degree-sweep", approx_args.degree_sweep,
                     "Sweep the degree cap 0..N instead of the tolerance ladder");

  auto *solve = app.add_subcommand("solve", "Compute eigenpairs with rational Krylov");
  add_common(solve, common, approx_args);
  solve->add_option("--shifts", solve_args.shifts, "Comma-separated complex shifts, e.g. \"1+2i,3\"");
  solve->add_option("--iters", solve_args.iters, "Maximum Krylov iterations");
  solve->add_option("--tol", solve_args.tol, "Residual tolerance for convergence");
  solve->add_option("--variant", solve_args.variant, "Pencil: full, shared-collapsed, trimmed");
  solve->add_option("--track", solve_args.track, "Number of pairs in history.csv");
  solve->add_option("--residual", solve_args.residual, "relative or absolute");

  auto *verify = app.add_subcommand("verify", "Run the invariant suite on a small problem");
  add_common(verify, common, approx_args);
  verify->add_option("--guard", verify_args.guard, "Dense assembly limit")->capture_default_str();
  // Fault injection used by the test suite.
  verify->add_flag("--corrupt-weights", verify_args.corrupt_weights)->group("");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try
  {
    app.parse(reversed);
  }
  catch (const CLI::ParseError &e)
  {
    std::ostringstream o, x;
    const int code = app.exit(e, o, x);
    out << o.str();
    err << x.str();
    return code == 0 ? Ok : Usage;
  }

  const auto previous_level = log::level();
  auto previous_sink = log::set_sink([&err](log::Level lvl, std::string_view msg) {
    err << (lvl == log::Level::Warning ? "warning: " : "") << msg << "\n";
  });
  log::set_level(common.quiet ? log::Level::Silent
                              : common.verbose ? log::Level::Info : log::Level::Warning);
  int code = Ok;
  try
  {
    if (*approx)
    {
      code = cmd_approx(common, approx_args, out);
    }
    else if (*solve)
    {
      code = cmd_solve(common, approx_args, solve_args, out);
    }
    else
    {
      code = cmd_verify(common, approx_args, verify_args, out);
    }
  }
  catch (const Error &e)
  {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    code = exit_code(e.kind());
  }
  catch (const std::exception &e)
  {
    err << "error: " << e.what() << "\n";
    code = Numerical;
  }
  log::set_sink(std::move(previous_sink));
  log::set_level(previous_level);
  return code;
}

}  // namespace aaaeigs::cli
