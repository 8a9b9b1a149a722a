#include "reachquant/sets.hpp"

#include <cmath>
#include <stdexcept>

namespace reachquant {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void check_zonotope(const Zonotope& z, const char* who) {
  require(!z.center.empty(), who);
  for (const Vec& g : z.generators) require(g.size() == z.center.size(), who);
}

}  // namespace

Hyperrect Hyperrect::cube(Vec c, double radius) {
  if (radius < 0.0) throw std::invalid_argument("Hyperrect::cube: negative radius");
  Vec hw(c.size(), radius);
  return Hyperrect{std::move(c), std::move(hw)};
}

Zonotope minkowski_sum(const Zonotope& a, const Zonotope& b) {
  check_zonotope(a, "minkowski_sum: malformed zonotope");
  check_zonotope(b, "minkowski_sum: malformed zonotope");
  require(a.dim() == b.dim(), "minkowski_sum: dimension mismatch");

  Zonotope out;
  out.center.resize(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out.center[i] = a.center[i] + b.center[i];
  out.generators = a.generators;
  out.generators.insert(out.generators.end(), b.generators.begin(), b.generators.end());
  return out;
}

Zonotope linear_map(const Mat& k, const Zonotope& z) {
  check_zonotope(z, "linear_map: malformed zonotope");
  require(k.cols() == z.dim(), "linear_map: dimension mismatch");

  Zonotope out;
  out.center = k * z.center;
  out.generators.reserve(z.generators.size());
  for (const Vec& g : z.generators) out.generators.push_back(k * g);
  return out;
}

Hyperrect interval_hull(const Zonotope& z) {
  check_zonotope(z, "interval_hull: malformed zonotope");
  Hyperrect out;
  out.center = z.center;
  out.half_widths.assign(z.dim(), 0.0);
  for (std::size_t i = 0; i < z.dim(); ++i) {
    double acc = 0.0;
    for (const Vec& g : z.generators) acc += std::abs(g[i]);
    out.half_widths[i] = acc;
  }
  return out;
}

Zonotope to_zonotope(const Hyperrect& h) {
  require(!h.center.empty() && h.half_widths.size() == h.center.size(),
          "to_zonotope: malformed box");
  Zonotope out;
  out.center = h.center;
  for (std::size_t i = 0; i < h.dim(); ++i) {
    const double w = h.half_widths[i];
    require(w >= 0.0, "to_zonotope: negative half-width");
    if (w == 0.0) continue;
    Vec g(h.dim(), 0.0);
    g[i] = w;
    out.generators.push_back(std::move(g));
  }
  return out;
}

bool contains(const Hyperrect& h, const Vec& x, double tol) {
  require(h.center.size() == x.size(), "contains: dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::abs(x[i] - h.center[i]) > h.half_widths[i] + tol) return false;
  return true;
}

}  // namespace reachquant
