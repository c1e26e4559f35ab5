// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "aaaeigs/barycentric.hpp"

namespace aaaeigs
{

// Region Σ of the complex plane together with its sampling recipe.
//
// interval:   equispaced points on [lo, hi] (real or a complex segment).
// rectangle:  random interior points plus equispaced boundary points. The
//             boundary is the perimeter unless an explicit edge segment is set.
// half_disk:  upper half disk around a real center; random interior points
//             (r = R√u, θ = πv) plus boundary points equispaced by arc length
//             along the arc and the diameter.
// points:     an explicit list.
struct Region
{
  enum class Kind
  {
    Interval,
    Rectangle,
    HalfDisk,
    Points,
  };

  Kind kind = Kind::Interval;
  Complex lo = 0.0;  // interval end / rectangle corner / half-disk center
  Complex hi = 1.0;  // interval end / opposite rectangle corner
  double radius = 1.0;
  Index interior = 0;
  Index boundary = 100;
  std::optional<Complex> edge_from;
  std::optional<Complex> edge_to;
  std::uint64_t seed = 1;
  std::vector<Complex> points;

  static Region interval(Complex lo, Complex hi, Index count);
  static Region rectangle(Complex corner0, Complex corner1, Index interior, Index boundary,
                          std::uint64_t seed);
  static Region half_disk(double center, double radius, Index interior, Index boundary,
                          std::uint64_t seed);
  static Region explicit_points(std::vector<Complex> pts);

  // The fitting sample set. Identical for identical fields.
  SampleSet sample() const;
  // A fresh set of `count` points in the closed region drawn with `seed`,
  // used for held-out error measurement.
  SampleSet test_points(Index count, std::uint64_t seed) const;

  // Closed region membership with relative slack `tol` of the diameter.
  bool contains(Complex z, double tol = 1e-12) const;
  double diameter() const;

  const char *kind_name() const;
};

Region::Kind parse_region_kind(std::string_view name);

}  // namespace aaaeigs
