// SPDX-License-Identifier: Apache-2.0

#include "aaaeigs/region.hpp"

#include <algorithm>
#include <numbers>
#include <random>

namespace aaaeigs
{

namespace
{

std::vector<Complex> equispaced(Complex a, Complex b, Index count, bool include_end = true)
{
  std::vector<Complex> out;
  if (count <= 0)
  {
    return out;
  }
  if (count == 1)
  {
    out.push_back(0.5 * (a + b));
    return out;
  }
  const double denom = include_end ? static_cast<double>(count - 1) : static_cast<double>(count);
  for (Index k = 0; k < count; ++k)
  {
    out.push_back(a + (b - a) * (static_cast<double>(k) / denom));
  }
  return out;
}

// Points equispaced by arc length along a closed polyline.
std::vector<Complex> along_polyline(const std::vector<Complex> &corners, Index count)
{
  std::vector<double> lengths;
  double total = 0.0;
  for (std::size_t e = 0; e < corners.size(); ++e)
  {
    const double l = std::abs(corners[(e + 1) % corners.size()] - corners[e]);
    lengths.push_back(l);
    total += l;
  }
  std::vector<Complex> out;
  for (Index k = 0; k < count; ++k)
  {
    double t = total * static_cast<double>(k) / static_cast<double>(count);
    std::size_t e = 0;
    while (e + 1 < lengths.size() && t >= lengths[e])
    {
      t -= lengths[e];
      ++e;
    }
    const Complex a = corners[e], b = corners[(e + 1) % corners.size()];
    out.push_back(a + (b - a) * (t / lengths[e]));
  }
  return out;
}

std::vector<Complex> rectangle_interior(Complex c0, Complex c1, Index count, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> xr(std::min(c0.real(), c1.real()),
                                            std::max(c0.real(), c1.real()));
  std::uniform_real_distribution<double> yr(std::min(c0.imag(), c1.imag()),
                                            std::max(c0.imag(), c1.imag()));
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(count));
  for (Index k = 0; k < count; ++k)
  {
    const double x = xr(rng);
    const double y = yr(rng);
    out.emplace_back(x, y);
  }
  return out;
}

std::vector<Complex> half_disk_interior(double c, double r, Index count, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(count));
  for (Index k = 0; k < count; ++k)
  {
    const double rho = r * std::sqrt(u(rng));
    const double theta = std::numbers::pi * u(rng);
    out.push_back(c + std::polar(rho, theta));
  }
  return out;
}

std::vector<Complex> half_disk_boundary(double c, double r, Index count)
{
  // Perimeter: arc of length πr from c+r to c−r, then the diameter back.
  const double arc = std::numbers::pi * r;
  const double total = arc + 2.0 * r;
  std::vector<Complex> out;
  for (Index k = 0; k < count; ++k)
  {
    const double t = total * static_cast<double>(k) / static_cast<double>(count);
    if (t < arc)
    {
      out.push_back(c + std::polar(r, t / r));
    }
    else
    {
      out.emplace_back(c - r + (t - arc), 0.0);
    }
  }
  return out;
}

// Removes exact duplicates while keeping first occurrences in order.
std::vector<Complex> distinct(std::vector<Complex> pts)
{
  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i)
  {
    order[i] = i;
  }
  auto less = [&](std::size_t a, std::size_t b) {
    if (pts[a].real() != pts[b].real())
    {
      return pts[a].real() < pts[b].real();
    }
    if (pts[a].imag() != pts[b].imag())
    {
      return pts[a].imag() < pts[b].imag();
    }
    return a < b;
  };
  std::sort(order.begin(), order.end(), less);
  std::vector<bool> keep(pts.size(), true);
  for (std::size_t k = 1; k < order.size(); ++k)
  {
    if (pts[order[k]] == pts[order[k - 1]])
    {
      keep[order[k]] = false;
    }
  }
  std::vector<Complex> out;
  for (std::size_t i = 0; i < pts.size(); ++i)
  {
    if (keep[i])
    {
      out.push_back(pts[i]);
    }
  }
  return out;
}

}  // namespace

Region Region::interval(Complex lo, Complex hi, Index count)
{
  Region r;
  r.kind = Kind::Interval;
  r.lo = lo;
  r.hi = hi;
  r.boundary = count;
  return r;
}

Region Region::rectangle(Complex corner0, Complex corner1, Index interior, Index boundary,
                         std::uint64_t seed)
{
  Region r;
  r.kind = Kind::Rectangle;
  r.lo = corner0;
  r.hi = corner1;
  r.interior = interior;
  r.boundary = boundary;
  r.seed = seed;
  return r;
}

Region Region::half_disk(double center, double radius, Index interior, Index boundary,
                         std::uint64_t seed)
{
  Region r;
  r.kind = Kind::HalfDisk;
  r.lo = center;
  r.radius = radius;
  r.interior = interior;
  r.boundary = boundary;
  r.seed = seed;
  return r;
}

Region Region::explicit_points(std::vector<Complex> pts)
{
  Region r;
  r.kind = Kind::Points;
  r.points = std::move(pts);
  return r;
}

SampleSet Region::sample() const
{
  std::mt19937_64 rng(seed);
  std::vector<Complex> pts;
  switch (kind)
  {
  case Kind::Interval:
    pts = equispaced(lo, hi, boundary);
    break;
  case Kind::Rectangle: {
    pts = rectangle_interior(lo, hi, interior, rng);
    std::vector<Complex> edge;
    if (edge_from && edge_to)
    {
      edge = equispaced(*edge_from, *edge_to, boundary);
    }
    else
    {
      edge = along_polyline({lo, Complex(hi.real(), lo.imag()), hi, Complex(lo.real(), hi.imag())},
                            boundary);
    }
    pts.insert(pts.end(), edge.begin(), edge.end());
    break;
  }
  case Kind::HalfDisk: {
    pts = half_disk_interior(lo.real(), radius, interior, rng);
    const auto edge = half_disk_boundary(lo.real(), radius, boundary);
    pts.insert(pts.end(), edge.begin(), edge.end());
    break;
  }
  case Kind::Points:
    pts = points;
    break;
  }
  return SampleSet(distinct(std::move(pts)));
}

SampleSet Region::test_points(Index count, std::uint64_t test_seed) const
{
  std::mt19937_64 rng(test_seed);
  std::vector<Complex> pts;
  switch (kind)
  {
  case Kind::Interval: {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (Index k = 0; k < count; ++k)
    {
      pts.push_back(lo + (hi - lo) * u(rng));
    }
    break;
  }
  case Kind::Rectangle:
    pts = rectangle_interior(lo, hi, count, rng);
    break;
  case Kind::HalfDisk:
    pts = half_disk_interior(lo.real(), radius, count, rng);
    break;
  case Kind::Points: {
    std::uniform_int_distribution<std::size_t> u(0, points.size() - 1);
    for (Index k = 0; k < count; ++k)
    {
      pts.push_back(points[u(rng)]);
    }
    break;
  }
  }
  return SampleSet(distinct(std::move(pts)));
}

bool Region::contains(Complex z, double tol) const
{
  const double slack = tol * diameter();
  switch (kind)
  {
  case Kind::Interval: {
    const Complex d = hi - lo;
    const double t = ((z - lo) * std::conj(d)).real() / std::norm(d);
    const Complex proj = lo + t * d;
    return t >= -slack / std::abs(d) && t <= 1.0 + slack / std::abs(d) &&
           std::abs(z - proj) <= slack;
  }
  case Kind::Rectangle:
    return z.real() >= std::min(lo.real(), hi.real()) - slack &&
           z.real() <= std::max(lo.real(), hi.real()) + slack &&
           z.imag() >= std::min(lo.imag(), hi.imag()) - slack &&
           z.imag() <= std::max(lo.imag(), hi.imag()) + slack;
  case Kind::HalfDisk:
    return std::abs(z - lo) <= radius + slack && z.imag() >= -slack;
  case Kind::Points:
    return std::any_of(points.begin(), points.end(),
                       [&](Complex p) { return std::abs(p - z) <= slack; });
  }
  return false;
}

double Region::diameter() const
{
  switch (kind)
  {
  case Kind::Interval:
  case Kind::Rectangle:
    return std::max(std::abs(hi - lo), 1e-300);
  case Kind::HalfDisk:
    return 2.0 * radius;
  case Kind::Points:
    return points.size() >= 2 ? SampleSet(points).diameter() : 1.0;
  }
  return 1.0;
}

const char *Region::kind_name() const
{
  switch (kind)
  {
  case Kind::Interval:
    return "interval";
  case Kind::Rectangle:
    return "rectangle";
  case Kind::HalfDisk:
    return "half-disk";
  case Kind::Points:
    return "points";
  }
  return "?";
}

Region::Kind parse_region_kind(std::string_view name)
{
  if (name == "interval")
  {
    return Region::Kind::Interval;
  }
  if (name == "rectangle")
  {
    return Region::Kind::Rectangle;
  }
  if (name == "half-disk" || name == "half_disk" || name == "halfdisk")
  {
    return Region::Kind::HalfDisk;
  }
  if (name == "points")
  {
    return Region::Kind::Points;
  }
  throw Error(ErrorKind::Config, "unknown region kind '" + std::string(name) + "'");
}

}  // namespace aaaeigs
