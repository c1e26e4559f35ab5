// SPDX-License-Identifier: Apache-2.0

#include "aaaeigs/rational_forms.hpp"

#include <Eigen/LU>

#include "aaaeigs/dense_eigen.hpp"

namespace aaaeigs
{

namespace
{

// Eigenvalues beyond this multiple of the region scale are infinite.
constexpr double INFINITE_POLE_FACTOR = 1e13;

std::vector<Complex> finite_eigenvalues(const Matrix &a, const Matrix &b, double diameter)
{
  const auto eig = generalized_eigen(a, b);
  std::vector<Complex> out;
  const Vector vals = eig.values();
  for (Index i = 0; i < vals.size(); ++i)
  {
    if (is_finite(vals(i)) && std::abs(vals(i)) <= INFINITE_POLE_FACTOR * diameter)
    {
      out.push_back(vals(i));
    }
  }
  return out;
}

}  // namespace

Vector eval_barycentric_all(const BarycentricRational &r, Complex lambda)
{
  const Index m = r.size();
  for (Index j = 0; j < m; ++j)
  {
    if (lambda == r.support[static_cast<std::size_t>(j)])
    {
      return r.values.col(j);
    }
  }
  Vector c(m);
  for (Index j = 0; j < m; ++j)
  {
    c(j) = r.weights(j) / (lambda - r.support[static_cast<std::size_t>(j)]);
  }
  const Complex den = c.sum();
  if (den == 0.0 || !is_finite(den))
  {
    throw Error(ErrorKind::PoleEvaluation,
                "barycentric denominator vanishes at " + format_complex(lambda));
  }
  return (r.values * c) / den;
}

Complex eval_barycentric(const BarycentricRational &r, Index function_index, Complex lambda)
{
  if (function_index < 0 || function_index >= r.functions())
  {
    throw Error(ErrorKind::InvalidInput, "function index out of range");
  }
  const Index m = r.size();
  for (Index j = 0; j < m; ++j)
  {
    if (lambda == r.support[static_cast<std::size_t>(j)])
    {
      return r.values(function_index, j);
    }
  }
  Complex num = 0.0, den = 0.0;
  for (Index j = 0; j < m; ++j)
  {
    const Complex c = r.weights(j) / (lambda - r.support[static_cast<std::size_t>(j)]);
    num += r.values(function_index, j) * c;
    den += c;
  }
  if (den == 0.0 || !is_finite(den))
  {
    throw Error(ErrorKind::PoleEvaluation,
                "barycentric denominator vanishes at " + format_complex(lambda));
  }
  return num / den;
}

StateSpaceRational to_state_space(const BarycentricRational &r, Index function_index)
{
  const Index m = r.size();
  if (m < 1)
  {
    throw Error(ErrorKind::InvalidInput, "state-space form needs at least one support point");
  }
  StateSpaceRational ss;
  ss.a = r.values.row(function_index).transpose().cwiseProduct(r.weights);
  ss.b = Vector::Zero(m);
  ss.b(0) = 1.0;
  ss.e = Matrix::Zero(m, m);
  ss.f = Matrix::Zero(m, m);
  ss.e.row(0) = r.weights.transpose();
  for (Index j = 1; j < m; ++j)
  {
    ss.e(j, j - 1) = -r.support[static_cast<std::size_t>(j - 1)];
    ss.e(j, j) = r.support[static_cast<std::size_t>(j)];
    ss.f(j, j - 1) = -1.0;
    ss.f(j, j) = 1.0;
  }
  return ss;
}

Vector state_space_resolvent(const StateSpaceRational &ss, Complex lambda)
{
  Eigen::PartialPivLU<Matrix> lu(ss.e - lambda * ss.f);
  Vector u = lu.solve(ss.b);
  if (!u.allFinite())
  {
    throw Error(ErrorKind::PoleEvaluation,
                "E - lambda F is singular at " + format_complex(lambda));
  }
  return u;
}

Complex eval_state_space(const StateSpaceRational &ss, Complex lambda)
{
  return ss.a.cwiseProduct(state_space_resolvent(ss, lambda)).sum();
}

std::vector<Complex> poles(const BarycentricRational &r, double diameter)
{
  const Index m = r.size();
  if (m < 2)
  {
    return {};
  }
  // Arrowhead pencil: det(A − λB) is proportional to Π(λ − z_j) d(λ).
  Matrix a = Matrix::Zero(m + 1, m + 1);
  Matrix b = Matrix::Identity(m + 1, m + 1);
  b(0, 0) = 0.0;
  for (Index j = 0; j < m; ++j)
  {
    a(0, j + 1) = r.weights(j);
    a(j + 1, 0) = 1.0;
    a(j + 1, j + 1) = r.support[static_cast<std::size_t>(j)];
  }
  return finite_eigenvalues(a, b, diameter);
}

std::vector<Complex> state_space_poles(const StateSpaceRational &ss, double diameter)
{
  return finite_eigenvalues(ss.e, ss.f, diameter);
}

}  // namespace aaaeigs
