#pragma once

// 1-D wave-function grids with Simpson weights, window-based grid builders and
// discrete L2 norms/distances.  Heaviside uses the project convention theta(0) = 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "semidelta/errors.hpp"

namespace semidelta {

inline double heaviside(double x) { return x > 0.0 ? 1.0 : 0.0; }

inline double sgn(double x) { return (x > 0.0) - (x < 0.0); }

struct WaveFunctionGrid {
  std::vector<double> xs;
  std::vector<cplx> values;
  std::vector<double> weights;

  std::size_t size() const { return xs.size(); }

  void validate() const {
    if (xs.size() != values.size() || xs.size() != weights.size())
      throw GridError("WaveFunctionGrid: length mismatch");
    for (std::size_t i = 1; i < xs.size(); ++i)
      if (!(xs[i] > xs[i - 1])) throw GridError("WaveFunctionGrid: xs not increasing");
    for (double w : weights)
      if (!(w > 0.0)) throw GridError("WaveFunctionGrid: nonpositive weight");
  }
};

// Uniform grid with composite Simpson weights; n is forced odd.
inline WaveFunctionGrid uniform_grid(double xmin, double xmax, std::size_t n) {
  if (!(xmin < xmax)) throw GridError("uniform_grid: xmin < xmax required");
  if (n < 3) n = 3;
  if (n % 2 == 0) ++n;
  WaveFunctionGrid g;
  g.xs.resize(n);
  g.weights.resize(n);
  g.values.assign(n, cplx(0.0, 0.0));
  const double h = (xmax - xmin) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    g.xs[i] = xmin + h * static_cast<double>(i);
    const double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    g.weights[i] = w * h / 3.0;
  }
  return g;
}

struct Window {
  double center = 0.0;
  double halfwidth = 1.0;
};

// Smallest uniform Simpson grid whose hull covers every window and whose spacing
// resolves wavenumbers up to kmax with points_per_wave samples per wavelength.
inline WaveFunctionGrid hull_grid(std::span<const Window> windows, double kmax,
                                  double points_per_wave = 8.0,
                                  std::size_t min_points = 801) {
  if (windows.empty()) throw GridError("hull_grid: no windows");
  double lo = windows[0].center - windows[0].halfwidth;
  double hi = windows[0].center + windows[0].halfwidth;
  for (const Window& w : windows) {
    lo = std::min(lo, w.center - w.halfwidth);
    hi = std::max(hi, w.center + w.halfwidth);
  }
  const double span_x = hi - lo;
  const double dx = 2.0 * std::numbers::pi / (std::max(kmax, 1.0) * points_per_wave);
  std::size_t n = static_cast<std::size_t>(std::ceil(span_x / dx)) + 1;
  n = std::max(n, min_points);
  return uniform_grid(lo, hi, n);
}

inline double l2_norm(const WaveFunctionGrid& g) {
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) acc += g.weights[i] * std::norm(g.values[i]);
  return std::sqrt(acc);
}

inline double l2_distance(const WaveFunctionGrid& g1, const WaveFunctionGrid& g2) {
  if (g1.size() != g2.size()) throw GridError("l2_distance: grids differ in size");
  double acc = 0.0;
  for (std::size_t i = 0; i < g1.size(); ++i) {
    if (std::abs(g1.xs[i] - g2.xs[i]) > 1e-12 * (1.0 + std::abs(g1.xs[i])))
      throw GridError("l2_distance: grids differ in nodes");
    acc += g1.weights[i] * std::norm(g1.values[i] - g2.values[i]);
  }
  return std::sqrt(acc);
}

// Fill grid values from a callable.
template <class Fn>
WaveFunctionGrid sampled(WaveFunctionGrid g, Fn&& f) {
  for (std::size_t i = 0; i < g.size(); ++i) g.values[i] = f(g.xs[i]);
  return g;
}

// L2 norm of a closed-form function over the hull of the given windows,
// with grid doubling until the relative change drops below tol.
template <class Fn>
double adaptive_grid_norm(Fn&& f, std::span<const Window> windows, double kmax,
                          double tol = 1e-9, int max_doublings = 12) {
  std::size_t n = 1025;
  WaveFunctionGrid g = sampled(hull_grid(windows, kmax, 8.0, n), f);
  double prev = l2_norm(g);
  for (int i = 0; i < max_doublings; ++i) {
    n = 2 * (n - 1) + 1;
    g = sampled(hull_grid(windows, kmax, 8.0, n), f);
    const double cur = l2_norm(g);
    if (std::abs(cur - prev) <= tol * std::max(cur, 1e-300)) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace semidelta
