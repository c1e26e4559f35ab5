// SPDX-License-Identifier: Apache-2.0

#include "aaaeigs/nep_problem.hpp"

#include <Eigen/SVD>

namespace aaaeigs
{

Vector PolynomialPart::basis_values(Complex lambda) const
{
  const Index kk = k();
  Vector f(kk);
  if (kk == 0)
  {
    return f;
  }
  f(0) = 1.0;
  if (basis == BasisKind::Monomial)
  {
    for (Index i = 1; i < kk; ++i)
    {
      f(i) = f(i - 1) * lambda;
    }
    return f;
  }
  const Complex x = (2.0 * lambda - lo - hi) / (hi - lo);
  if (kk > 1)
  {
    f(1) = x;
  }
  for (Index i = 2; i < kk; ++i)
  {
    f(i) = 2.0 * x * f(i - 1) - f(i - 2);
  }
  return f;
}

Matrix PolynomialPart::basis_m() const
{
  const Index kk = k();
  Matrix m = Matrix::Zero(std::max<Index>(kk - 1, 0), kk);
  const double d = -(lo + hi) / (hi - lo);
  for (Index i = 0; i + 1 < kk; ++i)
  {
    m(i, i + 1) = -1.0;
    if (basis == BasisKind::Chebyshev)
    {
      m(i, i) = i == 0 ? d : 2.0 * d;
      if (i > 0)
      {
        m(i, i - 1) = -1.0;
      }
    }
  }
  return m;
}

Matrix PolynomialPart::basis_n() const
{
  const Index kk = k();
  Matrix n = Matrix::Zero(std::max<Index>(kk - 1, 0), kk);
  const double c = 2.0 / (hi - lo);
  for (Index i = 0; i + 1 < kk; ++i)
  {
    if (basis == BasisKind::Monomial)
    {
      n(i, i) = -1.0;
    }
    else
    {
      n(i, i) = i == 0 ? -c : -2.0 * c;
    }
  }
  return n;
}

Matrix PolynomialPart::evaluate(Complex lambda, Index n) const
{
  Matrix out = Matrix::Zero(n, n);
  const Vector f = basis_values(lambda);
  for (Index i = 0; i < k(); ++i)
  {
    out += f(i) * (a[static_cast<std::size_t>(i)] - lambda * b[static_cast<std::size_t>(i)]);
  }
  return out;
}

void NepProblem::validate() const
{
  if (n < 1)
  {
    throw Error(ErrorKind::InvalidInput, "problem dimension must be positive");
  }
  if (poly.k() < 1)
  {
    throw Error(ErrorKind::InvalidInput, "polynomial part needs at least one coefficient");
  }
  if (poly.a.size() != poly.b.size())
  {
    throw Error(ErrorKind::InvalidInput, "polynomial A and B lists differ in length");
  }
  auto check = [&](const Matrix &m, const std::string &what) {
    if (m.rows() != n || m.cols() != n)
    {
      throw Error(ErrorKind::InvalidInput,
                  what + " is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                      ", expected " + std::to_string(n) + "x" + std::to_string(n));
    }
  };
  for (std::size_t i = 0; i < poly.a.size(); ++i)
  {
    check(poly.a[i], "A" + std::to_string(i));
    check(poly.b[i], "B" + std::to_string(i));
  }
  if (poly.basis == BasisKind::Chebyshev && !(poly.hi > poly.lo))
  {
    throw Error(ErrorKind::InvalidInput, "Chebyshev interval must satisfy lo < hi");
  }
  for (std::size_t t = 0; t < terms.size(); ++t)
  {
    check(terms[t].c, "C of term " + std::to_string(t));
    check(terms[t].d, "D of term " + std::to_string(t));
    if (const auto &lr = terms[t].low_rank)
    {
      if (lr->z.rows() != n || lr->c.rows() != n || lr->d.rows() != n ||
          lr->c.cols() != lr->rank() || lr->d.cols() != lr->rank())
      {
        throw Error(ErrorKind::InvalidInput,
                    "low-rank factors of term " + std::to_string(t) + " have inconsistent sizes");
      }
    }
  }
}

Matrix evaluate_nep(const NepProblem &p, Complex lambda)
{
  Matrix out = p.poly.evaluate(lambda, p.n);
  for (std::size_t t = 0; t < p.terms.size(); ++t)
  {
    const auto &term = p.terms[t];
    Complex g;
    try
    {
      g = term.g(lambda);
    }
    catch (const Error &e)
    {
      throw Error(e.kind(), "term " + std::to_string(t) + ": " + e.what());
    }
    if (!is_finite(g))
    {
      throw Error(ErrorKind::PoleEvaluation, "term " + std::to_string(t) +
                                                 ": function is not finite at " +
                                                 format_complex(lambda));
    }
    out += g * (term.c - lambda * term.d);
  }
  return out;
}

NonlinearTerm low_rank_factorize(const NonlinearTerm &term, double rank_tol)
{
  const Index n = term.c.rows();
  Matrix stacked(n, 2 * n);
  stacked << term.c.adjoint(), term.d.adjoint();
  Eigen::BDCSVD<Matrix> svd(stacked, Eigen::ComputeThinU);
  const RealVector &sv = svd.singularValues();
  Index rank = 0;
  if (sv.size() > 0 && sv(0) > 0.0)
  {
    while (rank < sv.size() && sv(rank) > rank_tol * sv(0))
    {
      ++rank;
    }
  }
  NonlinearTerm out = term;
  LowRankFactors lr;
  lr.z = rank == n ? Matrix::Identity(n, n) : Matrix(svd.matrixU().leftCols(rank));
  lr.c = term.c * lr.z;
  lr.d = term.d * lr.z;
  out.low_rank = std::move(lr);
  return out;
}

double norm1(const Matrix &a)
{
  if (a.size() == 0)
  {
    return 0.0;
  }
  // Plain sqrt(re² + im²): hypot's overflow protection is not needed here and
  // dominates the cost of the error sweeps.
  const Eigen::ArrayXXd mag = (a.real().array().square() + a.imag().array().square()).sqrt();
  return mag.colwise().sum().maxCoeff();
}

}  // namespace aaaeigs
