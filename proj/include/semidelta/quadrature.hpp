#pragma once

// Shared quadrature kernels: Gauss-Legendre panels with adaptive doubling, a
// batched Fourier-type transform for oscillatory k-integrals, and the stable
// half-line Gaussian integral used by every closed-form transform.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <span>
#include <vector>

#include "semidelta/errors.hpp"
#include "semidelta/faddeeva.hpp"
#include "semidelta/parallel.hpp"

namespace semidelta {

struct QuadratureSpec {
  double relative_tol = 1e-8;
  double absolute_floor = 1e-14;
  int max_refinements = 20;
  int panel_order = 32;

  void validate() const {
    if (relative_tol <= 0.0 || absolute_floor <= 0.0)
      throw ParameterError("QuadratureSpec: tolerances must be positive");
    if (max_refinements < 1) throw ParameterError("QuadratureSpec: max_refinements >= 1");
    if (panel_order < 2 || panel_order > 64)
      throw ParameterError("QuadratureSpec: panel_order out of range");
  }
};

struct GaussRule {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;
};

// Newton iteration on Legendre P_n; cached per order.
inline const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

struct IntegralResult {
  cplx value{0.0, 0.0};
  double achieved_error = 0.0;
  bool converged = false;
  std::size_t evaluations = 0;
};

namespace detail {

template <class Fn>
cplx panel_sum(Fn& f, double a, double b, int panels, const GaussRule& rule,
               std::size_t* evals) {
  cplx total(0.0, 0.0);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      acc += rule.weights[i] * cplx(f(mid + 0.5 * h * rule.nodes[i]));
    total += 0.5 * h * acc;
  }
  if (evals) *evals += static_cast<std::size_t>(panels) * rule.nodes.size();
  return total;
}

}  // namespace detail

// Panel-doubling Gauss-Legendre on [a, b].
template <class Fn>
IntegralResult adaptive_integral(Fn&& f, double a, double b,
                                 const QuadratureSpec& spec = {}) {
  spec.validate();
  if (!(a < b)) throw ParameterError("adaptive_integral: requires a < b");
  const GaussRule& rule = gauss_legendre(spec.panel_order);
  IntegralResult res;
  int panels = 2;
  cplx prev = detail::panel_sum(f, a, b, panels, rule, &res.evaluations);
  for (int r = 0; r < spec.max_refinements; ++r) {
    panels *= 2;
    const cplx cur = detail::panel_sum(f, a, b, panels, rule, &res.evaluations);
    const double err = std::abs(cur - prev);
    res.value = cur;
    res.achieved_error = err;
    if (err <= std::max(spec.relative_tol * std::abs(cur), spec.absolute_floor)) {
      res.converged = true;
      return res;
    }
    prev = cur;
  }
  return res;
}

template <class Fn>
cplx integrate_or_throw(Fn&& f, double a, double b, const QuadratureSpec& spec = {}) {
  const IntegralResult r = adaptive_integral(std::forward<Fn>(f), a, b, spec);
  if (!r.converged)
    throw QuadratureError("adaptive_integral did not converge", r.value, r.achieved_error);
  return r.value;
}

// ---------------------------------------------------------------------------
// Batched oscillatory transform:   I(x) = Int_a^b W(k) exp(i k x) dk
// evaluated for a whole batch of x.  Panels are sized from a per-k phase-slope
// bound |x|_max + extra_slope(k); refinement halves the phase budget.
// ---------------------------------------------------------------------------

struct FourierBatchResult {
  std::vector<cplx> values;
  double achieved_error = 0.0;
  bool converged = false;
};

namespace detail {

inline std::vector<double> phase_panels(double a, double b, double base_slope,
                                        double (*abs_extra)(double, double),
                                        double extra_coeff, double budget,
                                        std::size_t max_panels) {
  std::vector<double> edges{a};
  double k = a;
  const double min_w = (b - a) / static_cast<double>(max_panels);
  while (k < b) {
    double slope = base_slope + abs_extra(k, extra_coeff);
    double w = budget / std::max(slope, 1e-12);
    for (int it = 0; it < 3; ++it) {
      const double s2 = base_slope + abs_extra(std::min(k + w, b), extra_coeff);
      w = budget / std::max({slope, s2, 1e-12});
    }
    w = std::max(w, min_w);
    k = std::min(k + w, b);
    edges.push_back(k);
  }
  return edges;
}

inline double quad_phase_slope(double k, double coeff) { return coeff * std::abs(k); }

}  // namespace detail

// W: callable cplx(double k).  xs: batch of transform arguments.
// quad_slope_coeff: d/dk of any additional phase is bounded by quad_slope_coeff*|k|
// (e.g. hbar*t/m for exp(-i hbar t k^2 / 2m)).
template <class WFn>
FourierBatchResult fourier_batch(WFn&& W, double a, double b, std::span<const double> xs,
                                 double quad_slope_coeff, const QuadratureSpec& spec = {},
                                 int threads = 0) {
  spec.validate();
  FourierBatchResult out;
  out.values.assign(xs.size(), cplx(0.0, 0.0));
  if (!(a < b) || xs.empty()) {
    out.converged = true;
    return out;
  }
  double xmax = 0.0;
  for (double x : xs) xmax = std::max(xmax, std::abs(x));
  const GaussRule& rule = gauss_legendre(spec.panel_order);
  const double base_budget = 0.5 * spec.panel_order;  // radians of phase per panel

  std::vector<cplx> prev;
  double budget = base_budget;
  for (int level = 0; level <= spec.max_refinements; ++level) {
    const std::vector<double> edges = detail::phase_panels(
        a, b, xmax + 1.0, &detail::quad_phase_slope, quad_slope_coeff, budget, 1u << 22);
    const std::size_t panels = edges.size() - 1;
    const std::size_t order = rule.nodes.size();
    std::vector<double> nodes(panels * order);
    std::vector<cplx> wvals(panels * order);
    for (std::size_t p = 0; p < panels; ++p) {
      const double mid = 0.5 * (edges[p] + edges[p + 1]);
      const double half = 0.5 * (edges[p + 1] - edges[p]);
      for (std::size_t i = 0; i < order; ++i)
        nodes[p * order + i] = mid + half * rule.nodes[i];
    }
    parallel_for(
        panels * order, [&](std::size_t i) { wvals[i] = W(nodes[i]); }, threads);
    std::vector<cplx> cur(xs.size());
    parallel_for(
        xs.size(),
        [&](std::size_t j) {
          const double x = xs[j];
          cplx acc(0.0, 0.0);
          for (std::size_t p = 0; p < panels; ++p) {
            const double half = 0.5 * (edges[p + 1] - edges[p]);
            cplx pacc(0.0, 0.0);
            for (std::size_t i = 0; i < order; ++i) {
              const std::size_t idx = p * order + i;
              pacc += rule.weights[i] * wvals[idx] *
                      std::polar(1.0, nodes[idx] * x);
            }
            acc += half * pacc;
          }
          cur[j] = acc;
        },
        threads);
    if (!prev.empty()) {
      double diff = 0.0, scale = 0.0;
      for (std::size_t j = 0; j < cur.size(); ++j) {
        diff = std::max(diff, std::abs(cur[j] - prev[j]));
        scale = std::max(scale, std::abs(cur[j]));
      }
      out.achieved_error = diff;
      if (diff <= std::max(spec.relative_tol * scale, spec.absolute_floor)) {
        out.values = std::move(cur);
        out.converged = true;
        return out;
      }
    }
    prev = std::move(cur);
    budget *= 0.5;
  }
  out.values = std::move(prev);
  return out;
}

// ---------------------------------------------------------------------------
// Half-line Gaussian integral:
//   halfline_gaussian(a, b, c0) = exp(c0) * Int_0^inf exp(-a y^2 + b y) dy,  Re a > 0
//                               = exp(c0) * (sqrt(pi/a)/2) * scaled_erfc(-b/(2 sqrt(a))).
// The reflection branch folds exp(c0 + b^2/(4a)) into one exponent so nothing
// overflows when the scaled erfc alone would.
// ---------------------------------------------------------------------------
inline cplx halfline_gaussian(cplx a, cplx b, cplx c0 = cplx(0.0, 0.0)) {
  if (!(a.real() > 0.0) && !(a.real() == 0.0 && a.imag() != 0.0))
    throw ParameterError("halfline_gaussian: requires Re a > 0 (or purely imaginary a)");
  const cplx ra = std::sqrt(a);  // principal branch, Re >= 0
  const cplx z = -b / (2.0 * ra);
  const cplx pref = std::sqrt(std::numbers::pi) / (2.0 * ra);
  if (z.real() >= 0.0) return pref * std::exp(c0) * scaled_erfc(z);
  const cplx z2 = z * z;  // b^2 / (4a)
  return pref * (2.0 * std::exp(c0 + z2) - std::exp(c0) * scaled_erfc(-z));
}

}  // namespace semidelta
