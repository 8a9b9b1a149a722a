#pragma once

#include "reachquant/numerics.hpp"

namespace reachquant {

/// Zonotope: center plus generator segments. An empty generator list encodes
/// a singleton. No generator-order reduction is performed anywhere; exactness
/// of the hull computations matters more here than generator count.
struct Zonotope {
  Vec center;
  std::vector<Vec> generators;

  std::size_t dim() const noexcept { return center.size(); }
  std::size_t generator_count() const noexcept { return generators.size(); }

  static Zonotope singleton(Vec c) { return Zonotope{std::move(c), {}}; }
};

/// Axis-aligned box: center plus nonnegative per-axis half-widths.
struct Hyperrect {
  Vec center;
  Vec half_widths;

  std::size_t dim() const noexcept { return center.size(); }

  /// Box with equal half-width on every axis.
  static Hyperrect cube(Vec c, double radius);
};

/// Minkowski sum: adds centers, concatenates generator lists.
Zonotope minkowski_sum(const Zonotope& a, const Zonotope& b);

/// Image under a linear map: maps the center and every generator.
Zonotope linear_map(const Mat& k, const Zonotope& z);

/// Tightest axis-aligned box containing the zonotope:
/// half_width_i = sum_l |g_l[i]|.
Hyperrect interval_hull(const Zonotope& z);

/// Exact zonotope form of a box; zero-width axes contribute no generator.
Zonotope to_zonotope(const Hyperrect& h);

/// Membership with a small absolute tolerance on each axis.
bool contains(const Hyperrect& h, const Vec& x, double tol = 1e-12);

}  // namespace reachquant
