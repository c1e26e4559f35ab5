// SPDX-License-Identifier: Apache-2.0

#include "aaaeigs/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "aaaeigs/bench.hpp"
#include "aaaeigs/matrix_market.hpp"

namespace aaaeigs
{

namespace
{

[[noreturn]] void fail(const std::string &source, long line, const std::string &what)
{
  throw Error(ErrorKind::Config, source + ":" + std::to_string(line) + ": " + what);
}

class LineParser
{
public:
  LineParser(std::string_view text, const std::string &source, long line)
    : text_(text), source_(source), line_(line)
  {
  }

  ConfigValue value()
  {
    skip();
    if (pos_ >= text_.size())
    {
      fail(source_, line_, "missing value");
    }
    ConfigValue v;
    v.line = line_;
    const char c = text_[pos_];
    if (c == '"')
    {
      v.type = ConfigValue::Type::String;
      v.string = quoted();
    }
    else if (c == '[')
    {
      ++pos_;
      v.type = ConfigValue::Type::List;
      skip();
      if (peek() != ']')
      {
        while (true)
        {
          v.list.push_back(value());
          skip();
          if (peek() == ',')
          {
            ++pos_;
            skip();
            if (peek() == ']')
            {
              break;
            }
            continue;
          }
          break;
        }
      }
      if (peek() != ']')
      {
        fail(source_, line_, "expected ']'");
      }
      ++pos_;
    }
    else
    {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' &&
             text_[pos_] != '#' && !std::isspace(static_cast<unsigned char>(text_[pos_])))
      {
        ++pos_;
      }
      const std::string tok(text_.substr(start, pos_ - start));
      if (tok == "true" || tok == "false")
      {
        v.type = ConfigValue::Type::Bool;
        v.boolean = tok == "true";
      }
      else
      {
        char *end = nullptr;
        v.number = std::strtod(tok.c_str(), &end);
        if (tok.empty() || end != tok.c_str() + tok.size())
        {
          fail(source_, line_, "cannot parse value '" + tok + "'");
        }
        v.type = ConfigValue::Type::Number;
      }
    }
    return v;
  }

  void finish()
  {
    skip();
    if (pos_ < text_.size() && text_[pos_] != '#')
    {
      fail(source_, line_, "trailing characters after value");
    }
  }

private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip()
  {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
    {
      ++pos_;
    }
  }

  std::string quoted()
  {
    ++pos_;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"')
    {
      char c = text_[pos_++];
      if (c == '\\' && pos_ < text_.size())
      {
        const char e = text_[pos_++];
        c = e == 'n' ? '\n' : e == 't' ? '\t' : e;
      }
      out.push_back(c);
    }
    if (pos_ >= text_.size())
    {
      fail(source_, line_, "unterminated string");
    }
    ++pos_;
    return out;
  }

  std::string_view text_;
  const std::string &source_;
  long line_;
  std::size_t pos_ = 0;
};

std::string trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
  {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

const char *type_name(ConfigValue::Type t)
{
  switch (t)
  {
  case ConfigValue::Type::Number:
    return "number";
  case ConfigValue::Type::Bool:
    return "boolean";
  case ConfigValue::Type::String:
    return "string";
  case ConfigValue::Type::List:
    return "list";
  }
  return "?";
}

Complex value_to_complex(const ConfigValue &v, const std::string &source)
{
  if (v.type == ConfigValue::Type::Number)
  {
    return v.number;
  }
  if (v.type == ConfigValue::Type::String)
  {
    try
    {
      return parse_complex(v.string);
    }
    catch (const Error &e)
    {
      fail(source, v.line, e.what());
    }
  }
  fail(source, v.line, "expected a complex number");
}

std::string fmt(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quote(const std::string &s)
{
  std::string out = "\"";
  for (char c : s)
  {
    if (c == '"' || c == '\\')
    {
      out.push_back('\\');
    }
    out.push_back(c);
  }
  return out + "\"";
}

std::string quote_complex(Complex z)
{
  return quote(format_complex(z));
}

}  // namespace

const ConfigValue &ConfigTable::at(const std::string &key) const
{
  auto it = values_.find(key);
  if (it == values_.end())
  {
    fail(source, line, "missing key '" + key + "'");
  }
  return it->second;
}

const ConfigValue &ConfigTable::typed(const std::string &key, ConfigValue::Type t) const
{
  const auto &v = at(key);
  if (v.type != t)
  {
    fail(source, v.line,
         "key '" + key + "' should be a " + type_name(t) + ", found " + type_name(v.type));
  }
  return v;
}

double ConfigTable::number(const std::string &key, double fallback) const
{
  return has(key) ? typed(key, ConfigValue::Type::Number).number : fallback;
}

Index ConfigTable::integer(const std::string &key, Index fallback) const
{
  if (!has(key))
  {
    return fallback;
  }
  const auto &v = typed(key, ConfigValue::Type::Number);
  if (v.number != std::floor(v.number))
  {
    fail(source, v.line, "key '" + key + "' should be an integer");
  }
  return static_cast<Index>(v.number);
}

bool ConfigTable::boolean(const std::string &key, bool fallback) const
{
  return has(key) ? typed(key, ConfigValue::Type::Bool).boolean : fallback;
}

std::string ConfigTable::string(const std::string &key, const std::string &fallback) const
{
  return has(key) ? typed(key, ConfigValue::Type::String).string : fallback;
}

Complex ConfigTable::complex(const std::string &key, Complex fallback) const
{
  return has(key) ? value_to_complex(at(key), source) : fallback;
}

std::vector<Complex> ConfigTable::complex_list(const std::string &key) const
{
  std::vector<Complex> out;
  if (!has(key))
  {
    return out;
  }
  const auto &v = at(key);
  if (v.type != ConfigValue::Type::List)
  {
    out.push_back(value_to_complex(v, source));
    return out;
  }
  for (const auto &e : v.list)
  {
    out.push_back(value_to_complex(e, source));
  }
  return out;
}

const ConfigTable *ConfigDocument::table(const std::string &name) const
{
  auto it = tables.find(name);
  return it == tables.end() ? nullptr : &it->second;
}

const std::vector<ConfigTable> &ConfigDocument::array(const std::string &name) const
{
  static const std::vector<ConfigTable> empty;
  auto it = arrays.find(name);
  return it == arrays.end() ? empty : it->second;
}

ConfigDocument parse_config(std::string_view text, const std::string &source)
{
  ConfigDocument doc;
  doc.root.source = source;
  ConfigTable *current = &doc.root;
  std::istringstream in{std::string(text)};
  std::string raw;
  long lineno = 0;
  while (std::getline(in, raw))
  {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#')
    {
      continue;
    }
    if (line.starts_with("[["))
    {
      const auto close = line.find("]]");
      if (close == std::string::npos)
      {
        fail(source, lineno, "expected ']]'");
      }
      const std::string name = trim(std::string_view(line).substr(2, close - 2));
      auto &list = doc.arrays[name];
      list.emplace_back();
      current = &list.back();
      current->source = source;
      current->line = lineno;
      continue;
    }
    if (line[0] == '[')
    {
      const auto close = line.find(']');
      if (close == std::string::npos)
      {
        fail(source, lineno, "expected ']'");
      }
      const std::string name = trim(std::string_view(line).substr(1, close - 1));
      if (doc.tables.contains(name))
      {
        fail(source, lineno, "duplicate table [" + name + "]");
      }
      current = &doc.tables[name];
      current->source = source;
      current->line = lineno;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
    {
      fail(source, lineno, "expected 'key = value'");
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.size() >= 2 && key.front() == '"' && key.back() == '"')
    {
      key = key.substr(1, key.size() - 2);
    }
    if (key.empty())
    {
      fail(source, lineno, "empty key");
    }
    if (current->has(key))
    {
      fail(source, lineno, "duplicate key '" + key + "'");
    }
    LineParser lp(std::string_view(line).substr(eq + 1), source, lineno);
    ConfigValue v = lp.value();
    lp.finish();
    current->set(key, std::move(v));
  }
  return doc;
}

ConfigDocument read_config(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw Error(ErrorKind::Config, "cannot open config file " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

ProblemConfig build_problem(const ConfigDocument &doc, const std::filesystem::path &base)
{
  ProblemConfig cfg;
  auto p = std::make_shared<NepProblem>();
  const ConfigTable &root = doc.root;
  p->name = root.string("name", "problem");
  p->n = root.integer("n", 0);
  if (p->n < 1)
  {
    fail(root.source, root.line, "key 'n' must be a positive integer");
  }
  const std::string basis = root.string("basis", "monomial");
  if (basis == "monomial")
  {
    p->poly.basis = BasisKind::Monomial;
  }
  else if (basis == "chebyshev")
  {
    p->poly.basis = BasisKind::Chebyshev;
    p->poly.lo = root.number("basis_lo", -1.0);
    p->poly.hi = root.number("basis_hi", 1.0);
  }
  else
  {
    fail(root.source, root.has("basis") ? root.at("basis").line : 0,
         "basis must be \"monomial\" or \"chebyshev\"");
  }

  if (const auto *params = doc.table("params"))
  {
    for (const auto &[k, v] : params->values())
    {
      if (v.type != ConfigValue::Type::Number)
      {
        fail(params->source, v.line, "parameter '" + k + "' must be a number");
      }
      p->params[k] = v.number;
    }
  }

  auto matrix = [&](const ConfigTable &t, const std::string &key) -> Matrix {
    if (!t.has(key))
    {
      return Matrix::Zero(p->n, p->n);
    }
    const std::string rel = t.string(key, "");
    Matrix m;
    try
    {
      m = load_matrix(base / rel);
    }
    catch (const Error &e)
    {
      fail(t.source, t.at(key).line, e.what());
    }
    if (m.rows() != p->n)
    {
      fail(t.source, t.at(key).line,
           rel + " is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
               " but n = " + std::to_string(p->n));
    }
    return m;
  };

  const auto &polys = doc.array("poly");
  if (polys.empty())
  {
    fail(root.source, 0, "at least one [[poly]] block is required");
  }
  Index kmax = 0;
  for (const auto &t : polys)
  {
    kmax = std::max(kmax, t.integer("index", 0) + 1);
  }
  p->poly.a.assign(static_cast<std::size_t>(kmax), Matrix::Zero(p->n, p->n));
  p->poly.b.assign(static_cast<std::size_t>(kmax), Matrix::Zero(p->n, p->n));
  std::set<Index> used;
  for (const auto &t : polys)
  {
    const Index idx = t.integer("index", 0);
    if (idx < 0 || !used.insert(idx).second)
    {
      fail(t.source, t.line, "poly index " + std::to_string(idx) + " is negative or repeated");
    }
    p->poly.a[static_cast<std::size_t>(idx)] = matrix(t, "A");
    p->poly.b[static_cast<std::size_t>(idx)] = matrix(t, "B");
  }

  std::vector<Index> term_groups;
  for (const auto &t : doc.array("term"))
  {
    NonlinearTerm term;
    term.c = matrix(t, "C");
    term.d = matrix(t, "D");
    const std::string g = t.string("g", "");
    if (g.empty())
    {
      fail(t.source, t.line, "term needs a function 'g'");
    }
    try
    {
      if (g.starts_with("builtin:"))
      {
        const auto fn = builtin_function(g.substr(8));
        if (!fn)
        {
          throw Error(ErrorKind::Config, "unknown builtin '" + g.substr(8) + "'");
        }
        term.g = *fn;
      }
      else
      {
        term.g = ScalarFunction::parse(g, p->params);
      }
    }
    catch (const Error &e)
    {
      fail(t.source, t.at("g").line, e.what());
    }
    if (t.boolean("lowrank", false))
    {
      term = low_rank_factorize(term, t.number("rank_tol", 1e-12));
    }
    term_groups.push_back(t.integer("group", -1));
    p->terms.push_back(std::move(term));
  }

  if (const auto *r = doc.table("region"))
  {
    const auto kind = parse_region_kind(r->string("kind", "interval"));
    const auto seed = static_cast<std::uint64_t>(r->integer("seed", 1));
    switch (kind)
    {
    case Region::Kind::Interval:
      p->region = Region::interval(r->complex("lo", 0.0), r->complex("hi", 1.0),
                                   r->integer("samples", r->integer("samples_boundary", 1000)));
      break;
    case Region::Kind::Rectangle:
      p->region = Region::rectangle(r->complex("corner0", 0.0), r->complex("corner1", 1.0),
                                    r->integer("samples_interior", 500),
                                    r->integer("samples_boundary", 500), seed);
      if (r->has("edge_from") || r->has("edge_to"))
      {
        p->region.edge_from = r->complex("edge_from", p->region.lo);
        p->region.edge_to = r->complex("edge_to", Complex(p->region.hi.real(), p->region.lo.imag()));
      }
      break;
    case Region::Kind::HalfDisk:
      p->region = Region::half_disk(r->number("center", 0.0), r->number("radius", 1.0),
                                    r->integer("samples_interior", 500),
                                    r->integer("samples_boundary", 500), seed);
      break;
    case Region::Kind::Points:
      p->region = Region::explicit_points(r->complex_list("points"));
      if (p->region.points.size() < 2)
      {
        fail(r->source, r->line, "points region needs at least 2 points");
      }
      break;
    }
    p->region.seed = seed;
  }
  else if (!p->terms.empty())
  {
    fail(root.source, 0, "a [region] block is required when terms are present");
  }

  try
  {
    p->validate();
  }
  catch (const Error &e)
  {
    fail(root.source, 0, e.what());
  }

  if (const auto *a = doc.table("approx"))
  {
    try
    {
      cfg.approx.mode = parse_approx_mode(a->string("mode", "set-valued"));
    }
    catch (const Error &e)
    {
      fail(a->source, a->at("mode").line, e.what());
    }
    cfg.approx.tol = a->number("tol", cfg.approx.tol);
    cfg.approx.max_degree = a->integer("max_degree", cfg.approx.max_degree);
    cfg.approx.cleanup = a->boolean("cleanup", cfg.approx.cleanup);
    cfg.approx.test_count = a->integer("test_points", cfg.approx.test_count);
    cfg.approx.test_seed = static_cast<std::uint64_t>(a->integer("test_seed", 0));
  }
  if (cfg.approx.mode == ApproxMode::Grouped)
  {
    std::map<Index, std::vector<Index>> groups;
    for (std::size_t t = 0; t < term_groups.size(); ++t)
    {
      if (term_groups[t] < 0)
      {
        fail(root.source, 0, "grouped mode needs 'group' on every [[term]]");
      }
      groups[term_groups[t]].push_back(static_cast<Index>(t));
    }
    for (auto &[g, members] : groups)
    {
      cfg.approx.groups.push_back(members);
    }
  }

  if (const auto *s = doc.table("solve"))
  {
    cfg.solve.shifts = s->complex_list("shifts");
    cfg.solve.iters = s->integer("iters", cfg.solve.iters);
    cfg.solve.tol = s->number("tol", cfg.solve.tol);
    cfg.solve.variant = s->string("variant", cfg.solve.variant);
    cfg.solve.track = s->integer("track", cfg.solve.track);
    cfg.solve.seed = static_cast<std::uint64_t>(s->integer("seed", 1));
    const std::string res = s->string("residual", "relative");
    if (res != "relative" && res != "absolute")
    {
      fail(s->source, s->at("residual").line, "residual must be \"relative\" or \"absolute\"");
    }
    cfg.solve.relative_residual = res == "relative";
  }
  cfg.problem = std::move(p);
  return cfg;
}

ProblemConfig load_problem_config(const std::filesystem::path &path)
{
  return build_problem(read_config(path), path.parent_path());
}

std::filesystem::path export_problem(const ProblemConfig &cfg, const std::filesystem::path &dir)
{
  std::filesystem::create_directories(dir);
  const NepProblem &p = *cfg.problem;
  std::ostringstream out;
  out << "name = " << quote(p.name) << "\n";
  out << "n = " << p.n << "\n";
  if (p.poly.basis == BasisKind::Chebyshev)
  {
    out << "basis = \"chebyshev\"\nbasis_lo = " << fmt(p.poly.lo)
        << "\nbasis_hi = " << fmt(p.poly.hi) << "\n";
  }
  else
  {
    out << "basis = \"monomial\"\n";
  }
  ParamTable params = p.params;
  for (const auto &t : p.terms)
  {
    params.insert(t.g.params().begin(), t.g.params().end());
  }
  if (!params.empty())
  {
    out << "\n[params]\n";
    for (const auto &[k, v] : params)
    {
      out << k << " = " << fmt(v) << "\n";
    }
  }

  const Region &r = p.region;
  out << "\n[region]\nkind = " << quote(r.kind_name()) << "\nseed = " << r.seed << "\n";
  switch (r.kind)
  {
  case Region::Kind::Interval:
    out << "lo = " << quote_complex(r.lo) << "\nhi = " << quote_complex(r.hi)
        << "\nsamples = " << r.boundary << "\n";
    break;
  case Region::Kind::Rectangle:
    out << "corner0 = " << quote_complex(r.lo) << "\ncorner1 = " << quote_complex(r.hi)
        << "\nsamples_interior = " << r.interior << "\nsamples_boundary = " << r.boundary
        << "\n";
    if (r.edge_from && r.edge_to)
    {
      out << "edge_from = " << quote_complex(*r.edge_from)
          << "\nedge_to = " << quote_complex(*r.edge_to) << "\n";
    }
    break;
  case Region::Kind::HalfDisk:
    out << "center = " << fmt(r.lo.real()) << "\nradius = " << fmt(r.radius)
        << "\nsamples_interior = " << r.interior << "\nsamples_boundary = " << r.boundary
        << "\n";
    break;
  case Region::Kind::Points:
    out << "points = [";
    for (std::size_t k = 0; k < r.points.size(); ++k)
    {
      out << (k ? ", " : "") << quote_complex(r.points[k]);
    }
    out << "]\n";
    break;
  }

  auto write = [&](const Matrix &m, const std::string &name) {
    save_matrix(dir / name, m);
    return quote(name);
  };
  for (Index i = 0; i < p.poly.k(); ++i)
  {
    const auto si = std::to_string(i);
    out << "\n[[poly]]\nindex = " << i << "\n";
    out << "A = " << write(p.poly.a[static_cast<std::size_t>(i)], "A" + si + ".mtx") << "\n";
    out << "B = " << write(p.poly.b[static_cast<std::size_t>(i)], "B" + si + ".mtx") << "\n";
  }
  for (std::size_t t = 0; t < p.terms.size(); ++t)
  {
    const auto st = std::to_string(t);
    const auto &term = p.terms[t];
    out << "\n[[term]]\n";
    out << "C = " << write(term.c, "C" + st + ".mtx") << "\n";
    out << "D = " << write(term.d, "D" + st + ".mtx") << "\n";
    out << "g = " << quote(term.g.text()) << "\n";
    if (term.low_rank)
    {
      out << "lowrank = true\n";
    }
    for (std::size_t g = 0; g < cfg.approx.groups.size(); ++g)
    {
      const auto &members = cfg.approx.groups[g];
      if (std::find(members.begin(), members.end(), static_cast<Index>(t)) != members.end())
      {
        out << "group = " << g << "\n";
      }
    }
  }

  const ApproxOptions &a = cfg.approx;
  out << "\n[approx]\nmode = " << quote(to_string(a.mode)) << "\ntol = " << fmt(a.tol)
      << "\nmax_degree = " << a.max_degree << "\ncleanup = " << (a.cleanup ? "true" : "false")
      << "\ntest_points = " << a.test_count << "\ntest_seed = " << a.test_seed << "\n";

  const SolveSettings &s = cfg.solve;
  out << "\n[solve]\nshifts = [";
  for (std::size_t k = 0; k < s.shifts.size(); ++k)
  {
    out << (k ? ", " : "") << quote_complex(s.shifts[k]);
  }
  out << "]\niters = " << s.iters << "\ntol = " << fmt(s.tol) << "\nvariant = "
      << quote(s.variant) << "\ntrack = " << s.track << "\nseed = " << s.seed
      << "\nresidual = " << (s.relative_residual ? "\"relative\"" : "\"absolute\"") << "\n";

  const auto path = dir / "problem.toml";
  std::ofstream f(path);
  if (!f)
  {
    throw Error(ErrorKind::Io, "cannot write " + path.string());
  }
  f << out.str();
  return path;
}

}  // namespace aaaeigs
