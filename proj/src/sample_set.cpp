// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <limits>

#include "aaaeigs/barycentric.hpp"

namespace aaaeigs
{

SampleSet::SampleSet(std::vector<Complex> points)
  : points_(std::move(points)), active_(points_.size(), true),
    active_count_(static_cast<Index>(points_.size()))
{
  if (points_.size() < 2)
  {
    throw Error(ErrorKind::InvalidInput, "sample set needs at least 2 points");
  }
}

void SampleSet::deactivate(Index i)
{
  auto k = static_cast<std::size_t>(i);
  if (active_[k])
  {
    active_[k] = false;
    --active_count_;
  }
}

void SampleSet::reset()
{
  std::fill(active_.begin(), active_.end(), true);
  active_count_ = size();
}

double SampleSet::diameter() const
{
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto &z : points_)
  {
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymin = std::min(ymin, z.imag());
    ymax = std::max(ymax, z.imag());
  }
  double d = std::hypot(xmax - xmin, ymax - ymin);
  return d > 0 ? d : 1.0;
}

}  // namespace aaaeigs
