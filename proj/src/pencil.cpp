// SPDX-License-Identifier: Apache-2.0

#include "aaaeigs/pencil.hpp"

#include <limits>

#include <Eigen/LU>

#include "aaaeigs/loewner.hpp"

namespace aaaeigs
{

PencilVariant parse_pencil_variant(std::string_view name)
{
  if (name == "full")
  {
    return PencilVariant::Full;
  }
  if (name == "shared" || name == "shared-collapsed" || name == "collapsed")
  {
    return PencilVariant::SharedCollapsed;
  }
  if (name == "trimmed")
  {
    return PencilVariant::Trimmed;
  }
  throw Error(ErrorKind::Config, "unknown pencil variant '" + std::string(name) + "'");
}

const char *to_string(PencilVariant v)
{
  switch (v)
  {
  case PencilVariant::Full:
    return "full";
  case PencilVariant::SharedCollapsed:
    return "shared-collapsed";
  case PencilVariant::Trimmed:
    return "trimmed";
  }
  return "?";
}

Index CorkPencil::dimension() const
{
  Index d = n * k();
  for (const auto &blk : blocks)
  {
    d += blk.size();
  }
  return d;
}

Vector CorkPencil::apply_impl(const Vector &x, bool b_part) const
{
  const Index kk = k();
  if (x.size() != dimension())
  {
    throw Error(ErrorKind::InvalidInput, "pencil vector has the wrong length");
  }
  Vector out = Vector::Zero(x.size());
  const Eigen::Map<const Matrix> y(x.data(), n, kk);
  auto top = out.head(n);
  for (Index i = 0; i < kk; ++i)
  {
    top += (b_part ? b : a)[static_cast<std::size_t>(i)] * y.col(i);
  }
  if (kk > 1)
  {
    Eigen::Map<Matrix> mid(out.data() + n, n, kk - 1);
    mid = y * (b_part ? nn : m).transpose();
  }
  for (const auto &blk : blocks)
  {
    const Eigen::Map<const Matrix> u(x.data() + blk.offset, blk.width(), blk.ell());
    for (const auto &t : blk.terms)
    {
      top += (b_part ? t.d : t.c) * (u * t.a);
    }
    Eigen::Map<Matrix> rows(out.data() + blk.offset, blk.width(), blk.ell());
    rows = u * (b_part ? blk.f : blk.e).transpose();
    if (!b_part)
    {
      const Vector zy = blk.identity_z ? Vector(y.col(0)) : Vector(blk.z.adjoint() * y.col(0));
      rows -= zy * blk.b.transpose();
    }
  }
  return out;
}

Vector CorkPencil::apply_a(const Vector &x) const
{
  return apply_impl(x, false);
}

Vector CorkPencil::apply_b(const Vector &x) const
{
  return apply_impl(x, true);
}

Vector CorkPencil::apply(Complex lambda, const Vector &x) const
{
  return apply_a(x) - lambda * apply_b(x);
}

Matrix CorkPencil::assemble_impl(bool b_part, Index guard) const
{
  const Index d = dimension();
  if (d > guard)
  {
    throw Error(ErrorKind::DimensionGuard, "pencil dimension " + std::to_string(d) +
                                               " exceeds the dense limit " +
                                               std::to_string(guard));
  }
  const Index kk = k();
  Matrix out = Matrix::Zero(d, d);
  for (Index i = 0; i < kk; ++i)
  {
    out.block(0, i * n, n, n) = (b_part ? b : a)[static_cast<std::size_t>(i)];
  }
  const Matrix &basis = b_part ? nn : m;
  for (Index r = 0; r + 1 < kk; ++r)
  {
    for (Index i = 0; i < kk; ++i)
    {
      if (basis(r, i) != 0.0)
      {
        out.block(n + r * n, i * n, n, n).diagonal().setConstant(basis(r, i));
      }
    }
  }
  for (const auto &blk : blocks)
  {
    const Index w = blk.width();
    for (Index j = 0; j < blk.ell(); ++j)
    {
      auto col = out.block(0, blk.offset + j * w, n, w);
      for (const auto &t : blk.terms)
      {
        col += t.a(j) * (b_part ? t.d : t.c);
      }
    }
    const Matrix &ef = b_part ? blk.f : blk.e;
    for (Index r = 0; r < blk.ell(); ++r)
    {
      for (Index j = 0; j < blk.ell(); ++j)
      {
        if (ef(r, j) != 0.0)
        {
          out.block(blk.offset + r * w, blk.offset + j * w, w, w).diagonal().setConstant(ef(r, j));
        }
      }
      if (!b_part && blk.b(r) != 0.0)
      {
        out.block(blk.offset + r * w, 0, w, n) = -blk.b(r) * blk.z.adjoint();
      }
    }
  }
  return out;
}

Matrix CorkPencil::assemble_a(Index guard) const
{
  return assemble_impl(false, guard);
}

Matrix CorkPencil::assemble_b(Index guard) const
{
  return assemble_impl(true, guard);
}

Vector CorkPencil::basis_values(Complex lambda) const
{
  const Index kk = k();
  Vector f = Vector::Zero(kk);
  f(0) = 1.0;
  if (kk == 1)
  {
    return f;
  }
  const Matrix p = m - lambda * nn;
  // f_0 = 1 and the remaining entries solve p(:, 1:) f_rest = −p(:, 0).
  Eigen::PartialPivLU<Matrix> lu(p.rightCols(kk - 1));
  f.tail(kk - 1) = -lu.solve(p.col(0));
  if (!f.allFinite())
  {
    throw Error(ErrorKind::NumericalDegeneracy, "basis pencil is singular at " +
                                                    format_complex(lambda));
  }
  return f;
}

Matrix CorkPencil::evaluate_r(Complex lambda) const
{
  const Vector f = basis_values(lambda);
  Matrix r = Matrix::Zero(n, n);
  for (Index i = 0; i < k(); ++i)
  {
    r += f(i) * (a[static_cast<std::size_t>(i)] - lambda * b[static_cast<std::size_t>(i)]);
  }
  for (const auto &blk : blocks)
  {
    Eigen::PartialPivLU<Matrix> lu(blk.e - lambda * blk.f);
    const Vector u = lu.solve(blk.b);
    for (const auto &t : blk.terms)
    {
      const Complex s = t.a.cwiseProduct(u).sum();
      const Matrix cd = t.c - lambda * t.d;
      r += s * (blk.identity_z ? cd : Matrix(cd * blk.z.adjoint()));
    }
  }
  return r;
}

std::vector<Complex> CorkPencil::poles() const
{
  std::vector<Complex> out;
  for (const auto &blk : blocks)
  {
    out.insert(out.end(), blk.poles.begin(), blk.poles.end());
  }
  return out;
}

double CorkPencil::pole_distance(Complex lambda) const
{
  double d = std::numeric_limits<double>::infinity();
  for (const auto &blk : blocks)
  {
    for (auto p : blk.poles)
    {
      d = std::min(d, std::abs(lambda - p));
    }
  }
  return d;
}

CorkPencil build_pencil(const RationalNep &r, PencilVariant variant)
{
  const NepProblem &p = r.nep();
  CorkPencil pen;
  pen.variant = variant;
  pen.n = p.n;
  pen.a = p.poly.a;
  pen.b = p.poly.b;
  pen.m = p.poly.basis_m();
  pen.nn = p.poly.basis_n();
  pen.diameter = p.region.diameter();
  const Index n = p.n;

  auto make_block = [&](const FitGroup &g, Index group) {
    PencilBlock blk;
    blk.e = g.e;
    blk.f = g.f;
    blk.b = g.b;
    blk.group = group;
    blk.poles = state_space_poles(StateSpaceRational{Vector(), g.b, g.e, g.f}, pen.diameter);
    return blk;
  };

  for (std::size_t gi = 0; gi < r.groups.size(); ++gi)
  {
    const auto &g = r.groups[gi];
    if (variant == PencilVariant::SharedCollapsed)
    {
      PencilBlock blk = make_block(g, static_cast<Index>(gi));
      blk.z = Matrix::Identity(n, n);
      blk.identity_z = true;
      for (Index t : g.terms)
      {
        const auto &term = p.terms[static_cast<std::size_t>(t)];
        blk.terms.push_back({t, r.terms[static_cast<std::size_t>(t)].a, term.c, term.d});
      }
      pen.blocks.push_back(std::move(blk));
      continue;
    }
    for (Index t : g.terms)
    {
      const auto &term = p.terms[static_cast<std::size_t>(t)];
      PencilBlock blk = make_block(g, static_cast<Index>(gi));
      const Vector &at = r.terms[static_cast<std::size_t>(t)].a;
      if (variant == PencilVariant::Trimmed && term.low_rank && term.low_rank->rank() < n)
      {
        if (term.low_rank->rank() == 0)
        {
          continue;  // C = D = 0 contributes nothing
        }
        blk.z = term.low_rank->z;
        blk.terms.push_back({t, at, term.low_rank->c, term.low_rank->d});
      }
      else
      {
        blk.z = Matrix::Identity(n, n);
        blk.identity_z = true;
        blk.terms.push_back({t, at, term.c, term.d});
      }
      pen.blocks.push_back(std::move(blk));
    }
  }
  Index offset = n * pen.k();
  for (auto &blk : pen.blocks)
  {
    blk.offset = offset;
    offset += blk.size();
  }
  return pen;
}

Vector expand_eigenvector(const CorkPencil &p, const Vector &x, Complex lambda)
{
  if (p.pole_distance(lambda) <= 1e-10 * p.diameter)
  {
    throw Error(ErrorKind::PoleEvaluation,
                "cannot expand an eigenvector at the pole " + format_complex(lambda));
  }
  Vector out(p.dimension());
  const Vector f = p.basis_values(lambda);
  for (Index i = 0; i < p.k(); ++i)
  {
    out.segment(i * p.n, p.n) = f(i) * x;
  }
  for (const auto &blk : p.blocks)
  {
    Eigen::PartialPivLU<Matrix> lu(blk.e - lambda * blk.f);
    const Vector rb = lu.solve(blk.b);
    const Vector zx = blk.identity_z ? x : Vector(blk.z.adjoint() * x);
    Eigen::Map<Matrix> u(out.data() + blk.offset, blk.width(), blk.ell());
    u = zx * rb.transpose();
  }
  return out;
}

Vector recover_eigenvector(const CorkPencil &p, const Vector &z)
{
  Vector x = z.head(p.n);
  const double nx = x.norm();
  if (!(nx >= 1e-12 * z.norm()) || nx == 0.0)
  {
    throw Error(ErrorKind::RecoveryFailure, "leading block of the pencil vector vanishes");
  }
  x /= nx;
  fix_phase(x);
  return x;
}

}  // namespace aaaeigs
