// SPDX-License-Identifier: Apache-2.0

#include "aaaeigs/common.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <mutex>

namespace aaaeigs
{

const char *to_string(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::InvalidInput:
      return "invalid-input";
    case ErrorKind::NumericalDegeneracy:
      return "numerical-degeneracy";
    case ErrorKind::PoleEvaluation:
      return "pole-evaluation";
    case ErrorKind::PoleShift:
      return "pole-shift";
    case ErrorKind::ShiftIsEigenvalue:
      return "shift-is-eigenvalue";
    case ErrorKind::RecoveryFailure:
      return "recovery-failure";
    case ErrorKind::Parse:
      return "parse";
    case ErrorKind::Io:
      return "io";
    case ErrorKind::Config:
      return "config";
    case ErrorKind::DimensionGuard:
      return "dimension-guard";
  }
  return "unknown";
}

namespace log
{

namespace
{

struct State
{
  std::mutex mutex;
  Level threshold = Level::Warning;
  Sink sink = [](Level lvl, std::string_view msg)
  {
    const char *tag = lvl == Level::Warning ? "warning" : lvl == Level::Info ? "info" : "debug";
    std::cerr << "[aaaeigs " << tag << "] " << msg << '\n';
  };
};

State &state()
{
  static State s;
  return s;
}

}  // namespace

void set_level(Level lvl)
{
  std::lock_guard lock(state().mutex);
  state().threshold = lvl;
}

Level level()
{
  std::lock_guard lock(state().mutex);
  return state().threshold;
}

Sink set_sink(Sink sink)
{
  std::lock_guard lock(state().mutex);
  std::swap(state().sink, sink);
  return sink;
}

void write(Level lvl, std::string_view message)
{
  std::lock_guard lock(state().mutex);
  if (lvl < state().threshold || state().threshold == Level::Silent)
  {
    return;
  }
  if (state().sink)
  {
    state().sink(lvl, message);
  }
}

}  // namespace log

namespace
{

std::string strip(std::string_view s)
{
  std::string out;
  for (char c : s)
  {
    if (!std::isspace(static_cast<unsigned char>(c)))
    {
      out.push_back(c);
    }
  }
  return out;
}

// Reads a real number starting at pos; returns false if none.
bool read_real(const std::string &s, std::size_t &pos, double &value)
{
  const char *begin = s.c_str() + pos;
  char *end = nullptr;
  value = std::strtod(begin, &end);
  if (end == begin)
  {
    return false;
  }
  pos += static_cast<std::size_t>(end - begin);
  return true;
}

}  // namespace

Complex parse_complex(std::string_view text)
{
  const std::string s = strip(text);
  if (s.empty())
  {
    throw Error(ErrorKind::Parse, "empty complex literal");
  }
  double re = 0.0, im = 0.0;
  std::size_t pos = 0;
  bool any = false;
  while (pos < s.size())
  {
    double sign = 1.0;
    std::size_t start = pos;
    if (s[pos] == '+' || s[pos] == '-')
    {
      sign = s[pos] == '-' ? -1.0 : 1.0;
      ++pos;
    }
    double value = 1.0;
    std::size_t num_pos = pos;
    bool has_number = false;
    if (pos < s.size() && s[pos] != 'i' && s[pos] != 'j')
    {
      // strtod would eat a leading sign again; we already consumed it.
      if (!read_real(s, num_pos, value))
      {
        throw Error(ErrorKind::Parse, "malformed complex literal '" + std::string(text) + "'");
      }
      has_number = true;
      pos = num_pos;
    }
    if (pos < s.size() && (s[pos] == 'i' || s[pos] == 'j'))
    {
      im += sign * value;
      ++pos;
    }
    else if (has_number)
    {
      re += sign * value;
    }
    else
    {
      throw Error(ErrorKind::Parse, "malformed complex literal '" + std::string(text) + "'");
    }
    if (pos == start)
    {
      throw Error(ErrorKind::Parse, "malformed complex literal '" + std::string(text) + "'");
    }
    any = true;
  }
  if (!any)
  {
    throw Error(ErrorKind::Parse, "malformed complex literal '" + std::string(text) + "'");
  }
  return {re, im};
}

std::string format_complex(Complex z)
{
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

}  // namespace aaaeigs
