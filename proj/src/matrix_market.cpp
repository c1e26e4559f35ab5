// SPDX-License-Identifier: Apache-2.0

#include "aaaeigs/matrix_market.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace aaaeigs
{

namespace
{

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] void fail(const std::string &source, long line, const std::string &what)
{
  throw Error(ErrorKind::Parse, source + ":" + std::to_string(line) + ": " + what);
}

// Next non-comment, non-blank line.
bool next_line(std::istream &in, std::string &line, long &lineno)
{
  while (std::getline(in, line))
  {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%')
    {
      continue;
    }
    return true;
  }
  return false;
}

std::string format_double(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Matrix read_matrix_market(std::istream &in, const std::string &source)
{
  std::string line;
  long lineno = 0;
  if (!std::getline(in, line))
  {
    fail(source, 1, "empty file");
  }
  ++lineno;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
  {
    fail(source, lineno, "malformed Matrix Market header");
  }
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if ((format != "coordinate" && format != "array") ||
      (field != "real" && field != "integer" && field != "complex" && field != "pattern") ||
      (symmetry != "general" && symmetry != "symmetric" && symmetry != "hermitian" &&
       symmetry != "skew-symmetric"))
  {
    fail(source, lineno, "unsupported Matrix Market header '" + line + "'");
  }
  if (format == "array" && field == "pattern")
  {
    fail(source, lineno, "pattern field requires coordinate format");
  }
  if (!next_line(in, line, lineno))
  {
    fail(source, lineno, "missing size line");
  }
  std::istringstream size_line(line);
  long long rows = -1, cols = -1, nnz = -1;
  size_line >> rows >> cols;
  if (format == "coordinate")
  {
    size_line >> nnz;
  }
  if (!size_line || rows < 0 || cols < 0 || (format == "coordinate" && nnz < 0))
  {
    fail(source, lineno, "malformed size line");
  }
  if (rows != cols)
  {
    fail(source, lineno, "matrix is not square");
  }
  if (rows > 100000)
  {
    fail(source, lineno, "matrix too large for dense storage");
  }
  const Index n = static_cast<Index>(rows);
  Matrix a = Matrix::Zero(n, n);
  const bool complex = field == "complex";

  auto read_value = [&](std::istringstream &ss) -> Complex {
    if (field == "pattern")
    {
      return 1.0;
    }
    double re = 0.0, im = 0.0;
    ss >> re;
    if (complex)
    {
      ss >> im;
    }
    if (!ss)
    {
      fail(source, lineno, "malformed value");
    }
    return {re, im};
  };
  auto place = [&](Index i, Index j, Complex v) {
    a(i, j) = v;
    if (i != j)
    {
      if (symmetry == "symmetric")
      {
        a(j, i) = v;
      }
      else if (symmetry == "hermitian")
      {
        a(j, i) = std::conj(v);
      }
      else if (symmetry == "skew-symmetric")
      {
        a(j, i) = -v;
      }
    }
  };

  if (format == "coordinate")
  {
    for (long long e = 0; e < nnz; ++e)
    {
      if (!next_line(in, line, lineno))
      {
        fail(source, lineno, "expected " + std::to_string(nnz) + " entries");
      }
      std::istringstream ss(line);
      long long i = 0, j = 0;
      ss >> i >> j;
      if (!ss)
      {
        fail(source, lineno, "malformed entry");
      }
      if (i < 1 || j < 1 || i > rows || j > cols)
      {
        fail(source, lineno, "index out of range");
      }
      place(static_cast<Index>(i - 1), static_cast<Index>(j - 1), read_value(ss));
    }
  }
  else
  {
    // Column-major; symmetric variants store the lower triangle only.
    for (Index j = 0; j < n; ++j)
    {
      const Index start = symmetry == "general" ? 0 : (symmetry == "skew-symmetric" ? j + 1 : j);
      for (Index i = start; i < n; ++i)
      {
        if (!next_line(in, line, lineno))
        {
          fail(source, lineno, "array data ended early");
        }
        std::istringstream ss(line);
        place(i, j, read_value(ss));
      }
    }
  }
  return a;
}

Matrix load_matrix(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw Error(ErrorKind::Io, "cannot open matrix file " + path.string());
  }
  return read_matrix_market(in, path.string());
}

void write_matrix_market(std::ostream &out, const Matrix &a)
{
  const bool real = a.imag().cwiseAbs().maxCoeff() == 0.0 || a.size() == 0;
  Index nnz = 0;
  for (Index j = 0; j < a.cols(); ++j)
  {
    for (Index i = 0; i < a.rows(); ++i)
    {
      nnz += a(i, j) != 0.0 ? 1 : 0;
    }
  }
  out << "%%MatrixMarket matrix coordinate " << (real ? "real" : "complex") << " general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << nnz << '\n';
  for (Index j = 0; j < a.cols(); ++j)
  {
    for (Index i = 0; i < a.rows(); ++i)
    {
      const Complex v = a(i, j);
      if (v == 0.0)
      {
        continue;
      }
      out << i + 1 << ' ' << j + 1 << ' ' << format_double(v.real());
      if (!real)
      {
        out << ' ' << format_double(v.imag());
      }
      out << '\n';
    }
  }
}

void save_matrix(const std::filesystem::path &path, const Matrix &a)
{
  std::ofstream out(path);
  if (!out)
  {
    throw Error(ErrorKind::Io, "cannot write matrix file " + path.string());
  }
  write_matrix_market(out, a);
}

}  // namespace aaaeigs
