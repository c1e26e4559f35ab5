// SPDX-License-Identifier: Apache-2.0

#include "aaaeigs/dense_eigen.hpp"

#include <limits>

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

namespace aaaeigs
{

Vector PencilEigen::values(double cutoff) const
{
  Vector out(alpha.size());
  const double inf = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < alpha.size(); ++i)
  {
    if (std::abs(beta(i)) <= cutoff * std::abs(alpha(i)) || beta(i) == 0.0)
    {
      out(i) = Complex(inf, inf);
    }
    else
    {
      out(i) = alpha(i) / beta(i);
    }
  }
  return out;
}

PencilEigen generalized_eigen(const Matrix &a, const Matrix &b, bool want_vectors)
{
  const Index n = a.rows();
  if (a.cols() != n || b.rows() != n || b.cols() != n)
  {
    throw Error(ErrorKind::InvalidInput, "generalized eigenproblem needs square matrices");
  }
  PencilEigen out;
  out.alpha.resize(n);
  out.beta.resize(n);
  if (n == 0)
  {
    return out;
  }
  Matrix aa = a;
  Matrix bb = b;
  Matrix vr(want_vectors ? n : 1, want_vectors ? n : 1);
  lapack_complex_double dummy;
  const auto ni = static_cast<lapack_int>(n);
  const lapack_int info = LAPACKE_zggev(
      LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', ni,
      reinterpret_cast<lapack_complex_double *>(aa.data()), ni,
      reinterpret_cast<lapack_complex_double *>(bb.data()), ni,
      reinterpret_cast<lapack_complex_double *>(out.alpha.data()),
      reinterpret_cast<lapack_complex_double *>(out.beta.data()), &dummy, 1,
      want_vectors ? reinterpret_cast<lapack_complex_double *>(vr.data()) : &dummy,
      want_vectors ? ni : 1);
  if (info != 0)
  {
    throw Error(ErrorKind::NumericalDegeneracy,
                "zggev failed with info " + std::to_string(info));
  }
  if (want_vectors)
  {
    out.vectors = std::move(vr);
  }
  return out;
}

}  // namespace aaaeigs
