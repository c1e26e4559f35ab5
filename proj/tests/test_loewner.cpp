// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <Eigen/SVD>
#include <gtest/gtest.h>

#include "aaaeigs/loewner.hpp"

using namespace aaaeigs;

namespace
{

Matrix random_matrix(Index rows, Index cols, std::mt19937_64 &rng)
{
  std::normal_distribution<double> n;
  Matrix a(rows, cols);
  for (Index j = 0; j < cols; ++j)
  {
    for (Index i = 0; i < rows; ++i)
    {
      a(i, j) = Complex(n(rng), n(rng));
    }
  }
  return a;
}

Vector oracle_weights(const Matrix &l)
{
  Eigen::JacobiSVD<Matrix> svd(l, Eigen::ComputeFullV);
  Vector w = svd.matrixV().col(l.cols() - 1);
  fix_phase(w);
  return w;
}

double orthogonality_defect(const LoewnerAccumulator &acc)
{
  const Matrix q = acc.basis();
  return (q.adjoint() * q - Matrix::Identity(q.cols(), q.cols())).norm();
}

Matrix drop_rows(const Matrix &a, const std::vector<Index> &gone)
{
  std::vector<Index> keep;
  for (Index r = 0; r < a.rows(); ++r)
  {
    if (std::find(gone.begin(), gone.end(), r) == gone.end())
    {
      keep.push_back(r);
    }
  }
  return a(keep, Eigen::all);
}

}  // namespace

TEST(Loewner, FirstColumnIsNormalized)
{
  LoewnerAccumulator acc(3);
  Vector v(3);
  v << 3.0, 4.0, 0.0;
  acc.push_support(v, {});
  EXPECT_NEAR(std::abs(acc.small_factor()(0, 0)), 5.0, 1e-15);
  EXPECT_NEAR((acc.basis().col(0) * acc.small_factor()(0, 0) - v).norm(), 0.0, 1e-15);
}

TEST(Loewner, SingleColumnWeightIsOne)
{
  LoewnerAccumulator acc(4);
  Vector v = Vector::Constant(4, Complex(0.0, 2.0));
  acc.push_support(v, {});
  const Vector w = solve_weights(acc);
  ASSERT_EQ(w.size(), 1);
  EXPECT_EQ(w(0), Complex(1.0));
}

TEST(Loewner, ZeroSmallFactorIsDegenerate)
{
  LoewnerAccumulator acc(4);
  acc.push_support(Vector::Zero(4), {});
  acc.push_support(Vector::Zero(4), {});
  EXPECT_THROW(solve_weights(acc), Error);
}

TEST(Loewner, NoRowsRemovedKeepsAccumulatorIdentity)
{
  std::mt19937_64 rng(3);
  const Matrix l = random_matrix(20, 3, rng);
  LoewnerAccumulator acc(20);
  for (Index j = 0; j < 3; ++j)
  {
    acc.push_support(l.col(j), {});
  }
  EXPECT_NEAR((acc.s_accum() - Matrix::Identity(3, 3)).norm(), 0.0, 0.0);
}

TEST(Loewner, ColumnByColumnMatchesExplicitSvd)
{
  std::mt19937_64 rng(11);
  const Matrix l = random_matrix(50, 4, rng);
  LoewnerAccumulator acc(50);
  for (Index j = 0; j < 4; ++j)
  {
    acc.push_support(l.col(j), {});
    if (j == 0)
    {
      continue;
    }
    const Vector w = solve_weights(acc);
    const Vector ref = oracle_weights(l.leftCols(j + 1));
    EXPECT_LT((w - ref).norm(), 1e-10) << "step " << j;
    EXPECT_NEAR(w.norm(), 1.0, 1e-14);
  }
  EXPECT_LT((acc.reconstruct() - l).norm(), 1e-10 * l.norm());
}

TEST(Loewner, RowRemovalMatchesRebuiltMatrix)
{
  std::mt19937_64 rng(17);
  Matrix l = random_matrix(50, 4, rng);
  LoewnerAccumulator acc(50);
  acc.push_support(l.col(0), {});
  acc.push_support(l.col(1), {});
  const std::vector<Index> gone = {4, 19, 33};
  Matrix reduced = drop_rows(l, gone);
  acc.push_support(reduced.col(2), gone);
  acc.push_support(reduced.col(3), {});
  EXPECT_LT((solve_weights(acc) - oracle_weights(reduced)).norm(), 1e-10);
  EXPECT_LT((acc.reconstruct() - reduced).norm(), 1e-10 * reduced.norm());
  EXPECT_LT(orthogonality_defect(acc), 1e-12);
}

TEST(Loewner, FiveStepRandomRunStaysOrthonormal)
{
  std::mt19937_64 rng(5);
  Index rows = 60;
  Matrix explicit_l(rows, 0);
  LoewnerAccumulator acc(rows);
  std::uniform_int_distribution<Index> pick(0, 1000);
  for (int step = 0; step < 5; ++step)
  {
    std::vector<Index> gone;
    if (step > 0)
    {
      for (int t = 0; t < 2; ++t)
      {
        Index r = pick(rng) % rows;
        if (std::find(gone.begin(), gone.end(), r) == gone.end())
        {
          gone.push_back(r);
        }
      }
    }
    explicit_l = drop_rows(explicit_l, gone);
    rows -= static_cast<Index>(gone.size());
    const Matrix col = random_matrix(rows, 1, rng);
    Matrix next(rows, explicit_l.cols() + 1);
    next << explicit_l, col;
    explicit_l = next;
    acc.push_support(col.col(0), gone);
    EXPECT_LT(orthogonality_defect(acc), 1e-12) << "step " << step;
    EXPECT_LT((acc.reconstruct() - explicit_l).norm(), 1e-10 * explicit_l.norm());
  }
}

TEST(Loewner, InSpanColumnKeepsFactorization)
{
  std::mt19937_64 rng(23);
  const Matrix l = random_matrix(10, 2, rng);
  LoewnerAccumulator acc(10);
  acc.push_support(l.col(0), {});
  acc.push_support(l.col(1), {});
  const Vector dependent = 2.0 * l.col(0) - l.col(1);
  acc.push_support(dependent, {});
  Matrix full(10, 3);
  full << l, dependent;
  EXPECT_LT((acc.reconstruct() - full).norm(), 1e-12 * full.norm());
  EXPECT_LT(orthogonality_defect(acc), 1e-12);
}

TEST(Loewner, HeavyRowRemovalFallsBackToRefactorization)
{
  std::mt19937_64 rng(29);
  // Columns concentrated on a few rows make I − Q_rᴴQ_r nearly singular.
  Matrix l = random_matrix(12, 2, rng) * 1e-9;
  l.topRows(2) = random_matrix(2, 2, rng);
  LoewnerAccumulator acc(12);
  acc.push_support(l.col(0), {});
  acc.push_support(l.col(1), {});
  const std::vector<Index> gone = {0, 1};
  const Matrix reduced = drop_rows(l, gone);
  const Matrix col = random_matrix(10, 1, rng);
  acc.push_support(col.col(0), gone);
  Matrix full(10, 3);
  full << reduced, col;
  EXPECT_GE(acc.refactorizations(), 1);
  EXPECT_LT((acc.reconstruct() - full).norm(), 1e-10 * full.norm());
  EXPECT_LT(orthogonality_defect(acc), 1e-12);
}
