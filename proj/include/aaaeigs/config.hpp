// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "aaaeigs/approximate.hpp"

namespace aaaeigs
{

// Minimal TOML subset: `key = value` pairs, `[table]` and `[[array-of-tables]]`
// headers, `#` comments. Values are strings, numbers, booleans, or single-line
// arrays of those.
struct ConfigValue
{
  enum class Type
  {
    Number,
    Bool,
    String,
    List,
  };
  Type type = Type::Number;
  double number = 0.0;
  bool boolean = false;
  std::string string;
  std::vector<ConfigValue> list;
  long line = 0;
};

class ConfigTable
{
public:
  bool has(const std::string &key) const { return values_.contains(key); }
  const ConfigValue &at(const std::string &key) const;
  void set(const std::string &key, ConfigValue v) { values_[key] = std::move(v); }
  const std::map<std::string, ConfigValue> &values() const { return values_; }

  double number(const std::string &key, double fallback) const;
  Index integer(const std::string &key, Index fallback) const;
  bool boolean(const std::string &key, bool fallback) const;
  std::string string(const std::string &key, const std::string &fallback) const;
  Complex complex(const std::string &key, Complex fallback) const;
  std::vector<Complex> complex_list(const std::string &key) const;

  std::string source;  // file name used in messages
  long line = 0;       // header line

private:
  const ConfigValue &typed(const std::string &key, ConfigValue::Type t) const;
  std::map<std::string, ConfigValue> values_;
};

struct ConfigDocument
{
  ConfigTable root;
  std::map<std::string, ConfigTable> tables;
  std::map<std::string, std::vector<ConfigTable>> arrays;

  const ConfigTable *table(const std::string &name) const;
  const std::vector<ConfigTable> &array(const std::string &name) const;
};

ConfigDocument parse_config(std::string_view text, const std::string &source = "<config>");
ConfigDocument read_config(const std::filesystem::path &path);

// [solve] section.
struct SolveSettings
{
  std::vector<Complex> shifts;
  Index iters = 60;
  double tol = 1e-10;
  std::string variant = "trimmed";
  Index track = 5;
  std::uint64_t seed = 1;
  bool relative_residual = true;
};

struct ProblemConfig
{
  std::shared_ptr<NepProblem> problem;
  ApproxOptions approx;
  SolveSettings solve;
};

// Builds a problem from a parsed document; matrix paths are relative to `base`.
// Expressions of the form "builtin:<name>" resolve to registered benchmark
// functions.
ProblemConfig build_problem(const ConfigDocument &doc, const std::filesystem::path &base);
ProblemConfig load_problem_config(const std::filesystem::path &path);

// Writes `dir/problem.toml` plus one Matrix Market file per matrix. The result
// loads back through load_problem_config.
std::filesystem::path export_problem(const ProblemConfig &cfg, const std::filesystem::path &dir);

}  // namespace aaaeigs
