// SPDX-License-Identifier: Apache-2.0

#include "aaaeigs/ul_factor.hpp"

#include <limits>
#include <sstream>

#include <Eigen/SVD>

namespace aaaeigs
{

namespace
{

double sigma_min(const Matrix &a)
{
  if (a.size() == 0)
  {
    return std::numeric_limits<double>::infinity();
  }
  const RealVector s = Eigen::JacobiSVD<Matrix>(a).singularValues();
  return s(s.size() - 1);
}

Matrix drop_column(const Matrix &a, Index j)
{
  Matrix out(a.rows(), a.cols() - 1);
  out << a.leftCols(j), a.rightCols(a.cols() - j - 1);
  return out;
}

}  // namespace

Complex log_det(const Matrix &a)
{
  if (a.rows() == 0)
  {
    return 0.0;
  }
  Eigen::PartialPivLU<Matrix> lu(a);
  const Matrix &f = lu.matrixLU();
  Complex acc = 0.0;
  for (Index i = 0; i < f.rows(); ++i)
  {
    acc += std::log(f(i, i));
  }
  const Eigen::VectorXi idx = lu.permutationP().indices();
  // Sign of the row permutation from its cycle decomposition.
  std::vector<bool> seen(static_cast<std::size_t>(idx.size()), false);
  int sign = 1;
  for (Index i = 0; i < idx.size(); ++i)
  {
    if (seen[static_cast<std::size_t>(i)])
    {
      continue;
    }
    Index len = 0;
    for (Index j = i; !seen[static_cast<std::size_t>(j)]; j = idx(j))
    {
      seen[static_cast<std::size_t>(j)] = true;
      ++len;
    }
    if (len % 2 == 0)
    {
      sign = -sign;
    }
  }
  if (sign < 0)
  {
    acc += Complex(0.0, std::acos(-1.0));
  }
  return acc;
}

ULFactors::ULFactors(const CorkPencil &pencil, Complex mu)
  : p_(&pencil), mu_(mu), m1_sigma_(std::numeric_limits<double>::infinity())
{
  const Index k = pencil.k();
  const Index n = pencil.n;
  f_ = Vector::Zero(k);
  f_(0) = 1.0;
  if (k > 1)
  {
    // Pivot out the column whose removal leaves the best-conditioned M₁ − μN₁.
    const Matrix mm = pencil.m - mu * pencil.nn;
    double best = -1.0;
    for (Index j = 0; j < k; ++j)
    {
      const double s = sigma_min(drop_column(mm, j));
      if (s > best)
      {
        best = s;
        pivot_ = j;
      }
    }
    m1_sigma_ = best;
    m1_ = drop_column(mm, pivot_);
    m1_lu_.compute(m1_);
    // (M − μN) f = 0 with f_j = 1, then rescaled so that f_0 = 1.
    Vector rest = -m1_lu_.solve(mm.col(pivot_));
    Vector f(k);
    for (Index i = 0, r = 0; i < k; ++i)
    {
      f(i) = i == pivot_ ? Complex(1.0) : rest(r++);
    }
    if (f(0) == 0.0 || !f.allFinite())
    {
      throw Error(ErrorKind::NumericalDegeneracy, "basis pencil has no f_0 = 1 null vector at " +
                                                      format_complex(mu));
    }
    f_ = f / f(0);
  }
  alpha_ = f_(pivot_);

  r_ = Matrix::Zero(n, n);
  for (Index i = 0; i < k; ++i)
  {
    r_ += f_(i) * (pencil.a[static_cast<std::size_t>(i)] - mu * pencil.b[static_cast<std::size_t>(i)]);
  }
  for (const auto &blk : pencil.blocks)
  {
    e_lu_.emplace_back(blk.e - mu * blk.f);
    const Vector u = e_lu_.back().solve(blk.b);
    for (const auto &t : blk.terms)
    {
      const Complex s = t.a.cwiseProduct(u).sum();
      const Matrix cd = t.c - mu * t.d;
      r_ += s * (blk.identity_z ? cd : Matrix(cd * blk.z.adjoint()));
    }
  }
  r_lu_.compute(r_);
  // The LU estimate alone misses exact zero pivots.
  const RealVector piv = r_lu_.matrixLU().diagonal().cwiseAbs();
  const double ratio = piv.maxCoeff() > 0.0 ? piv.minCoeff() / piv.maxCoeff() : 0.0;
  rcond_ = std::min(r_lu_.rcond(), ratio);
}

Vector ULFactors::apply_g21(const Vector &y) const
{
  const CorkPencil &p = *p_;
  const Index n = p.n, k = p.k();
  Vector out = Vector::Zero(p.dimension() - n);
  if (k > 1)
  {
    const Vector col = p.m.col(pivot_) - mu_ * p.nn.col(pivot_);
    Eigen::Map<Matrix> mid(out.data(), n, k - 1);
    mid = y * col.transpose();
  }
  if (pivot_ == 0)
  {
    for (const auto &blk : p.blocks)
    {
      const Vector zy = blk.identity_z ? y : Vector(blk.z.adjoint() * y);
      Eigen::Map<Matrix> rows(out.data() + blk.offset - n, blk.width(), blk.ell());
      rows = -zy * blk.b.transpose();
    }
  }
  return out;
}

Vector ULFactors::apply_g12(const Vector &rest) const
{
  const CorkPencil &p = *p_;
  const Index n = p.n, k = p.k();
  Vector top = Vector::Zero(n);
  for (Index i = 0, c = 0; i < k; ++i)
  {
    if (i == pivot_)
    {
      continue;
    }
    top += (p.a[static_cast<std::size_t>(i)] - mu_ * p.b[static_cast<std::size_t>(i)]) *
           rest.segment(c * n, n);
    ++c;
  }
  for (const auto &blk : p.blocks)
  {
    const Eigen::Map<const Matrix> u(rest.data() + blk.offset - n, blk.width(), blk.ell());
    for (const auto &t : blk.terms)
    {
      top += (t.c - mu_ * t.d) * (u * t.a);
    }
  }
  return top;
}

Vector ULFactors::solve_g22(const Vector &rest) const
{
  const CorkPencil &p = *p_;
  const Index n = p.n, k = p.k();
  Vector out(rest.size());
  Vector y0;  // y_0 when it is among the remaining unknowns
  if (k > 1)
  {
    // (M₁ − μN₁) ⊗ I acts as Y ↦ Y (M₁ − μN₁)ᵀ on the n x (k−1) matrix Y.
    const Eigen::Map<const Matrix> r(rest.data(), n, k - 1);
    Eigen::Map<Matrix> y(out.data(), n, k - 1);
    y = m1_lu_.solve(r.transpose()).transpose();
    if (pivot_ != 0)
    {
      y0 = y.col(0);
    }
  }
  for (std::size_t bi = 0; bi < p.blocks.size(); ++bi)
  {
    const auto &blk = p.blocks[bi];
    const Index off = blk.offset - n;
    Matrix r = Eigen::Map<const Matrix>(rest.data() + off, blk.width(), blk.ell());
    if (y0.size() > 0)
    {
      const Vector zy = blk.identity_z ? y0 : Vector(blk.z.adjoint() * y0);
      r += zy * blk.b.transpose();
    }
    // U (E − μF)ᵀ = r.
    Eigen::Map<Matrix> u(out.data() + off, blk.width(), blk.ell());
    u = e_lu_[bi].solve(r.transpose()).transpose();
  }
  return out;
}

std::vector<Index> ULFactors::permutation() const
{
  const CorkPencil &p = *p_;
  const Index n = p.n, k = p.k(), d = p.dimension();
  std::vector<Index> perm;
  perm.reserve(static_cast<std::size_t>(d));
  for (Index r = 0; r < n; ++r)
  {
    perm.push_back(pivot_ * n + r);
  }
  for (Index i = 0; i < k; ++i)
  {
    if (i == pivot_)
    {
      continue;
    }
    for (Index r = 0; r < n; ++r)
    {
      perm.push_back(i * n + r);
    }
  }
  for (Index c = n * k; c < d; ++c)
  {
    perm.push_back(c);
  }
  return perm;
}

Vector ULFactors::solve(const Vector &rhs) const
{
  const CorkPencil &p = *p_;
  const Index n = p.n, d = p.dimension();
  if (rhs.size() != d)
  {
    throw Error(ErrorKind::InvalidInput, "right-hand side has the wrong length");
  }
  const Vector rest = rhs.tail(d - n);
  const Vector t = solve_g22(rest);
  const Vector w_top = rhs.head(n) - apply_g12(t);
  const Vector y1 = alpha_ * r_lu_.solve(w_top);
  const Vector y2 = solve_g22(rest - apply_g21(y1));
  // Undo 𝒫: y1 is y_j, y2 carries the other y_i then the u-blocks.
  Vector v(d);
  const auto perm = permutation();
  for (Index c = 0; c < n; ++c)
  {
    v(perm[static_cast<std::size_t>(c)]) = y1(c);
  }
  for (Index c = n; c < d; ++c)
  {
    v(perm[static_cast<std::size_t>(c)]) = y2(c - n);
  }
  return v;
}

Matrix ULFactors::permuted_pencil() const
{
  const Matrix full = p_->assemble_a() - mu_ * p_->assemble_b();
  const auto perm = permutation();
  return full(Eigen::all, perm);
}

Matrix ULFactors::explicit_l() const
{
  const Matrix lp = permuted_pencil();
  const Index n = p_->n, d = lp.rows();
  Matrix l = Matrix::Zero(d, d);
  l.topLeftCorner(n, n) = r_ / alpha_;
  l.bottomRows(d - n) = lp.bottomRows(d - n);
  return l;
}

Matrix ULFactors::explicit_u() const
{
  const Matrix lp = permuted_pencil();
  const Index n = p_->n, d = lp.rows();
  Matrix u = Matrix::Identity(d, d);
  // G12 G22⁻¹ through a transposed solve.
  if (d > n)
  {
    const Matrix g22 = lp.bottomRightCorner(d - n, d - n);
    const Matrix g12 = lp.topRightCorner(n, d - n);
    u.topRightCorner(n, d - n) = g22.transpose().partialPivLu().solve(g12.transpose()).transpose();
  }
  return u;
}

std::pair<Complex, Complex> ULFactors::log_det_sides() const
{
  const CorkPencil &p = *p_;
  const Index n = p.n;
  const Matrix full = p.assemble_a() - mu_ * p.assemble_b();
  Complex lhs = static_cast<double>(n) * std::log(alpha_) + log_det(full);
  // sgn(𝒫) = sgn(Π)^n with sgn(Π) = (−1)^j for moving column j to the front.
  if ((pivot_ * n) % 2 == 1)
  {
    lhs += Complex(0.0, std::acos(-1.0));
  }
  Complex rhs = log_det(r_);
  if (p.k() > 1)
  {
    rhs += static_cast<double>(n) * log_det(m1_);
  }
  for (const auto &blk : p.blocks)
  {
    rhs += static_cast<double>(blk.width()) * log_det(blk.e - mu_ * blk.f);
  }
  return {lhs, rhs};
}

ULFactors ul_factorize(const CorkPencil &pencil, Complex mu)
{
  for (const auto &blk : pencil.blocks)
  {
    for (auto pole : blk.poles)
    {
      if (std::abs(mu - pole) <= POLE_GUARD * pencil.diameter)
      {
        std::ostringstream msg;
        msg << "shift " << format_complex(mu) << " is within the pole guard of pole "
            << format_complex(pole) << " (term " << (blk.terms.empty() ? -1 : blk.terms[0].term)
            << ")";
        throw Error(ErrorKind::PoleShift, msg.str());
      }
    }
  }
  ULFactors f(pencil, mu);
  if (!(f.r_rcond() > std::numeric_limits<double>::epsilon()))
  {
    throw Error(ErrorKind::ShiftIsEigenvalue,
                "R(mu) is singular to working precision at " + format_complex(mu));
  }
  return f;
}

}  // namespace aaaeigs
