// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace aaaeigs
{

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

using namespace std::complex_literals;

// Scalar nonlinearity g: C -> C.
using ScalarFn = std::function<Complex(Complex)>;

enum class ErrorKind
{
  InvalidInput,
  NumericalDegeneracy,
  PoleEvaluation,
  PoleShift,
  ShiftIsEigenvalue,
  RecoveryFailure,
  Parse,
  Io,
  Config,
  DimensionGuard,
};

const char *to_string(ErrorKind kind);

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string &what)
    : std::runtime_error(what), kind_(kind)
  {
  }

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

namespace log
{

enum class Level
{
  Debug,
  Info,
  Warning,
  Silent,
};

using Sink = std::function<void(Level, std::string_view)>;

// Messages below the threshold are discarded. Default threshold is Warning.
void set_level(Level level);
Level level();

// Replaces the sink (default writes to stderr). Returns the previous one.
Sink set_sink(Sink sink);

void write(Level level, std::string_view message);
inline void debug(std::string_view m) { write(Level::Debug, m); }
inline void info(std::string_view m) { write(Level::Info, m); }
inline void warn(std::string_view m) { write(Level::Warning, m); }

}  // namespace log

inline bool is_finite(Complex z)
{
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Parses "a+bi", "3.5", "-2i", "1e4-3e2i" style complex literals.
Complex parse_complex(std::string_view text);
std::string format_complex(Complex z);

}  // namespace aaaeigs
