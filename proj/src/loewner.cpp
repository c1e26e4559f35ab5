// SPDX-License-Identifier: Apache-2.0

#include "aaaeigs/loewner.hpp"

#include <algorithm>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace aaaeigs
{

namespace
{

// Downdates with a Cholesky pivot below this are replaced by a fresh QR; the
// orthogonality loss of Q̂ S U⁻¹ grows like cond(U)².
constexpr double MIN_DOWNDATE_PIVOT = 1e-3;

std::vector<Index> kept_rows(Index rows, std::span<const Index> removed)
{
  std::vector<bool> drop(static_cast<std::size_t>(rows), false);
  for (Index r : removed)
  {
    if (r < 0 || r >= rows)
    {
      throw Error(ErrorKind::InvalidInput, "removed row index out of range");
    }
    drop[static_cast<std::size_t>(r)] = true;
  }
  std::vector<Index> keep;
  keep.reserve(static_cast<std::size_t>(rows));
  for (Index r = 0; r < rows; ++r)
  {
    if (!drop[static_cast<std::size_t>(r)])
    {
      keep.push_back(r);
    }
  }
  return keep;
}

}  // namespace

LoewnerAccumulator::LoewnerAccumulator(Index rows)
  : rows_(rows), q_(rows, 0), s_(0, 0), h_(0, 0)
{
}

Matrix LoewnerAccumulator::basis() const
{
  return q_ * s_;
}

Matrix LoewnerAccumulator::reconstruct() const
{
  return q_ * (s_ * h_);
}

void LoewnerAccumulator::push_support(const Eigen::Ref<const Vector> &column,
                                      std::span<const Index> removed_rows)
{
  remove_rows(removed_rows);
  if (column.size() != rows_)
  {
    throw Error(ErrorKind::InvalidInput, "Loewner column length does not match row count");
  }
  append_column(column);
}

void LoewnerAccumulator::remove_rows(std::span<const Index> removed_rows)
{
  if (removed_rows.empty())
  {
    return;
  }
  const auto keep = kept_rows(rows_, removed_rows);
  std::vector<Index> gone(removed_rows.begin(), removed_rows.end());
  const Index m = cols();
  rows_ = static_cast<Index>(keep.size());
  if (m == 0)
  {
    q_.resize(rows_, 0);
    return;
  }
  const Matrix qr = q_(gone, Eigen::all) * s_;
  Matrix gram = Matrix::Identity(m, m) - qr.adjoint() * qr;
  Eigen::LLT<Matrix> llt(gram);
  bool ok = llt.info() == Eigen::Success;
  if (ok)
  {
    const auto lower = llt.matrixL().toDenseMatrix();
    ok = lower.diagonal().cwiseAbs().minCoeff() >= MIN_DOWNDATE_PIVOT;
  }
  Matrix q_kept = q_(keep, Eigen::all);
  if (!ok)
  {
    log::info("Loewner downdate lost positive definiteness; refactorizing");
    const Matrix explicit_loewner = q_kept * (s_ * h_);
    refactorize(explicit_loewner);
    return;
  }
  // gram = L Lᴴ, so U = Lᴴ and Q̃ S U⁻¹ is orthonormal.
  const Matrix upper = llt.matrixU();
  q_ = std::move(q_kept);
  const Matrix s_new = upper.transpose().triangularView<Eigen::Lower>()
                           .solve(s_.transpose())
                           .transpose();
  s_ = s_new;
  h_ = upper.triangularView<Eigen::Upper>() * h_;
}

void LoewnerAccumulator::refactorize(const Matrix &loewner)
{
  ++refactorizations_;
  const Index m = loewner.cols();
  Eigen::HouseholderQR<Matrix> qr(loewner);
  q_ = qr.householderQ() * Matrix::Identity(loewner.rows(), m);
  h_ = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  s_ = Matrix::Identity(m, m);
}

void LoewnerAccumulator::append_column(Vector column)
{
  const Index m = cols();
  Vector coeff = Vector::Zero(m);
  const double input_norm = column.norm();
  // Classical Gram-Schmidt against Q = Q̂ S with one reorthogonalization pass.
  for (int pass = 0; pass < 2 && m > 0; ++pass)
  {
    const Vector proj = s_.adjoint() * (q_.adjoint() * column);
    column -= q_ * (s_ * proj);
    coeff += proj;
  }
  double beta = column.norm();
  Vector q_new;
  if (beta > 1e-14 * input_norm && beta > 0.0)
  {
    q_new = column / beta;
  }
  else
  {
    // Column lies in the current span to working precision: any unit vector
    // orthogonal to Q keeps L = QH because its H entry is zero.
    beta = 0.0;
    q_new = Vector::Zero(rows_);
    for (Index trial = 0; trial < rows_; ++trial)
    {
      Vector e = Vector::Zero(rows_);
      e(trial) = 1.0;
      for (int pass = 0; pass < 2 && m > 0; ++pass)
      {
        e -= q_ * (s_ * (s_.adjoint() * (q_.adjoint() * e)));
      }
      if (e.norm() > 0.5)
      {
        q_new = e / e.norm();
        break;
      }
    }
  }
  const Index rows = rows_;
  Matrix q(rows, m + 1);
  q.leftCols(m) = q_;
  q.col(m) = q_new;
  q_ = std::move(q);

  Matrix s = Matrix::Zero(m + 1, m + 1);
  s.topLeftCorner(m, m) = s_;
  s(m, m) = 1.0;
  s_ = std::move(s);

  Matrix h = Matrix::Zero(m + 1, m + 1);
  h.topLeftCorner(m, m) = h_;
  h.col(m).head(m) = coeff;
  h(m, m) = beta;
  h_ = std::move(h);
}

void fix_phase(Vector &v)
{
  Index arg = 0;
  double best = -1.0;
  for (Index i = 0; i < v.size(); ++i)
  {
    const double a = std::abs(v(i));
    if (a > best)
    {
      best = a;
      arg = i;
    }
  }
  if (best > 0)
  {
    v *= std::conj(v(arg)) / best;
    v(arg) = best;
  }
}

Vector min_right_singular_vector(const Matrix &a)
{
  if (a.cols() == 0)
  {
    throw Error(ErrorKind::InvalidInput, "weight solve on an empty matrix");
  }
  if (a.cols() == 1)
  {
    return Vector::Ones(1);
  }
  if (a.cwiseAbs().maxCoeff() == 0.0)
  {
    throw Error(ErrorKind::NumericalDegeneracy, "weight solve on an all-zero matrix");
  }
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  Vector w = svd.matrixV().col(a.cols() - 1);
  w /= w.norm();
  fix_phase(w);
  return w;
}

Vector solve_weights(const LoewnerAccumulator &acc)
{
  const Matrix &h = acc.small_factor();
  if (h.cols() == 0)
  {
    throw Error(ErrorKind::InvalidInput, "accumulator holds no columns");
  }
  if (h.cwiseAbs().maxCoeff() == 0.0)
  {
    throw Error(ErrorKind::NumericalDegeneracy, "Loewner small factor is identically zero");
  }
  return min_right_singular_vector(h);
}

}  // namespace aaaeigs
