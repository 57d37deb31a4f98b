#pragma once

// Exact quantum dynamics of a coherent state under the 1-D delta interaction:
// the propagator decomposition (free part, reflected transforms F_{+-,t},
// remainders E1/E2 and the bound-state piece), the wave operators, and the
// scattering operator composed from them.
//
// Every inner y-integral of the decomposition is evaluated in closed form
// through half-line Gaussian transforms; the remaining k-integrals carry a
// Gaussian envelope and go through the batched oscillatory transform.  The E1
// remainder is integrated in the y-variable against the closed-form kernel
//   M(u) = Int dk exp(-i a k^2 + i k u) / (1 - i gamma k)
//        = (pi/|gamma|) exp(i u^2/(4a)) erfcx(e^{i pi/4} (sqrt(a)/|gamma|) (1 - i u gamma/(2a))),
// which keeps the slowly decaying tail of the k-integrand out of the quadrature.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "semidelta/coupling.hpp"
#include "semidelta/errors.hpp"
#include "semidelta/faddeeva.hpp"
#include "semidelta/grid.hpp"
#include "semidelta/parallel.hpp"
#include "semidelta/quadrature.hpp"
#include "semidelta/states.hpp"

namespace semidelta {

inline constexpr double kEnvelopeSd = 14.0;  // Gaussian tail below exp(-98)

// ---------------------------------------------------------------------------
// Half-line transforms H_pm(kappa) = Int_0^inf exp(i kappa y) psi(+-y) dy,
// kappa complex, via the stable half-line Gaussian integral.
// ---------------------------------------------------------------------------
struct HalfLineTransforms {
  cplx plus, minus;
};

inline HalfLineTransforms half_line_transforms(const CoherentParams& cp, cplx kappa) {
  const double hbar = cp.constants.hbar;
  const cplx a = cp.sigma_breve / (4.0 * hbar * cp.sigma);
  if (!(a.real() > 0.0))
    throw ParameterError("half_line_transforms: Gaussian rate must have Re > 0");
  const cplx pref =
      std::pow(2.0 * std::numbers::pi * hbar, -0.25) / detail::root_pos(cp.sigma);
  const cplx c0 = -a * cp.q * cp.q - cplx(0.0, cp.p * cp.q / hbar);
  const cplx b_plus = 2.0 * a * cp.q + cplx(0.0, 1.0) * (kappa + cp.p / hbar);
  const cplx b_minus = -2.0 * a * cp.q + cplx(0.0, 1.0) * (kappa - cp.p / hbar);
  return {pref * halfline_gaussian(a, b_plus, c0),
          pref * halfline_gaussian(a, b_minus, c0)};
}

// ---------------------------------------------------------------------------
// E1 kernel M(u; a, gamma); a = hbar t / 2m, gamma = hbar^2 / (m alpha).
// ---------------------------------------------------------------------------
inline cplx e1_kernel(double u, double a, double gamma) {
  if (gamma == 0.0) throw ParameterError("e1_kernel: gamma must be nonzero");
  if (a == 0.0) {
    if (heaviside(-u * gamma) == 0.0) return cplx(0.0, 0.0);
    return 2.0 * std::numbers::pi / std::abs(gamma) * std::exp(u / gamma);
  }
  if (a < 0.0) return std::conj(e1_kernel(u, -a, gamma));
  const double ra = std::sqrt(a);
  const cplx rot = std::polar(1.0, std::numbers::pi / 4.0);
  const cplx z = rot * cplx(ra / std::abs(gamma), -u * sgn(gamma) / (2.0 * ra));
  return std::numbers::pi / std::abs(gamma) *
         std::polar(1.0, u * u / (4.0 * a)) * scaled_erfc(z);
}

// ---------------------------------------------------------------------------
// Propagator decomposition on a grid.
// ---------------------------------------------------------------------------
struct PropagatorPieces {
  WaveFunctionGrid free_part;
  WaveFunctionGrid f_plus_t;   // F_{+,t}(-sgn(q)|x|)
  WaveFunctionGrid f_minus_t;  // F_{-,t}(-sgn(q)|x|)
  WaveFunctionGrid e1;
  WaveFunctionGrid e2;
  WaveFunctionGrid e_alpha;
  WaveFunctionGrid total;
};

namespace detail {

// k-window containing the Fourier envelope of psi_hat centered at p/hbar.
inline std::pair<double, double> envelope_window(const CoherentParams& cp,
                                                 double n_sd = kEnvelopeSd) {
  const double center = cp.p / cp.constants.hbar;
  const double half = n_sd * std::abs(cp.sigma_breve) / std::sqrt(2.0 * cp.constants.hbar);
  return {center - half, center + half};
}

inline double envelope_peak_magnitude(const CoherentParams& cp) {
  return std::pow(2.0 * cp.constants.hbar / std::numbers::pi, 0.25) /
         std::sqrt(std::abs(cp.sigma_breve));
}

// Reach in k of the mirrored envelope psi_hat(-sgn(p) k) on k > 0 before it
// falls below `floor`; nonpositive if it is below the floor everywhere.
inline double mirrored_envelope_reach(const CoherentParams& cp, double floor) {
  const double hbar = cp.constants.hbar;
  const double sb2 = std::norm(cp.sigma_breve);
  const double peak = envelope_peak_magnitude(cp);
  const double budget = std::log(std::max(peak, 1e-300) / floor);
  if (budget <= 0.0) return 0.0;
  return std::sqrt(budget * sb2 / hbar) - std::abs(cp.p) / hbar;
}

}  // namespace detail

// F_{+-,t} evaluated at a batch of arguments w:  (2 pi)^{-1/2} Int dk
// exp(-i hbar t k^2 / 2m) exp(i k w) R_pm(k) psi_hat(k).
inline std::pair<std::vector<cplx>, std::vector<cplx>> f_transforms(
    const CoherentParams& cp, double t, const DeltaCoupling& dc,
    std::span<const double> args, const QuadratureSpec& spec = {}, int threads = 0) {
  dc.validate();
  const double hbar = cp.constants.hbar, m = cp.constants.mass;
  const auto [klo, khi] = detail::envelope_window(cp);
  const double quad_slope = std::abs(hbar * t / m);
  const double inv_sqrt2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  const auto wplus = [&](double k) {
    const cplx env = coherent_state_fourier(cp, k);
    const cplx phase = std::polar(1.0, -hbar * t * k * k / (2.0 * m));
    return inv_sqrt2pi * phase * reflection_coefficients(k, dc).plus * env;
  };
  const auto wminus = [&](double k) {
    const cplx env = coherent_state_fourier(cp, k);
    const cplx phase = std::polar(1.0, -hbar * t * k * k / (2.0 * m));
    return inv_sqrt2pi * phase * reflection_coefficients(k, dc).minus * env;
  };
  auto rp = fourier_batch(wplus, klo, khi, args, quad_slope, spec, threads);
  auto rm = fourier_batch(wminus, klo, khi, args, quad_slope, spec, threads);
  if (!rp.converged || !rm.converged)
    throw QuadratureError("f_transforms: oscillatory quadrature did not converge",
                          cplx(0.0, 0.0), std::max(rp.achieved_error, rm.achieved_error));
  return {std::move(rp.values), std::move(rm.values)};
}

// E1 values on a batch of x.
inline std::vector<cplx> e1_values(const CoherentParams& cp, double t,
                                   const DeltaCoupling& dc, std::span<const double> xs,
                                   const QuadratureSpec& spec = {}, int threads = 0) {
  dc.validate();
  const double hbar = cp.constants.hbar, m = cp.constants.mass;
  const double a = hbar * t / (2.0 * m);
  const double gamma = hbar * hbar / (m * dc.alpha);
  const double sq = sgn(cp.q);
  const double abs_sigma = std::abs(cp.sigma);
  const double y_max =
      std::sqrt(cp.q * cp.q + 4.0 * hbar * abs_sigma * abs_sigma * 98.0) - std::abs(cp.q);
  const auto g = [&](double y) { return coherent_state(cp, -sq * y); };
  std::vector<cplx> out(xs.size());
  parallel_for(
      xs.size(),
      [&](std::size_t j) {
        const double ax = std::abs(xs[j]);
        const auto integrand = [&](double y) {
          return g(y) * (e1_kernel(ax + y, a, gamma) - e1_kernel(ax - y, a, gamma));
        };
        cplx val(0.0, 0.0);
        if (a == 0.0 && ax > 0.0 && ax < y_max) {
          // M_0 has a kink at u = 0; split at y = |x|.
          val = integrate_or_throw(integrand, 0.0, ax, spec) +
                integrate_or_throw(integrand, ax, y_max, spec);
        } else {
          val = integrate_or_throw(integrand, 0.0, y_max, spec);
        }
        out[j] = -val / (2.0 * std::numbers::pi);
      },
      threads);
  return out;
}

// E2 values on a batch of x.
inline std::vector<cplx> e2_values(const CoherentParams& cp, double t,
                                   const DeltaCoupling& dc, std::span<const double> xs,
                                   const QuadratureSpec& spec = {}, int threads = 0) {
  dc.validate();
  const double hbar = cp.constants.hbar, m = cp.constants.mass;
  const double kmax = detail::mirrored_envelope_reach(cp, spec.absolute_floor);
  if (kmax <= 0.0) return std::vector<cplx>(xs.size(), cplx(0.0, 0.0));
  const double sqp = sgn(cp.q * cp.p);
  const double sp = sgn(cp.p);
  const double inv_sqrt2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  const auto w = [&](double k) {
    const ReflectionPair R = reflection_coefficients(k, dc);
    const cplx phase = std::polar(1.0, -hbar * t * k * k / (2.0 * m));
    return sqp * inv_sqrt2pi * phase * (R.minus - R.plus) *
           coherent_state_fourier(cp, -sp * k);
  };
  std::vector<double> args(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) args[i] = sqp * std::abs(xs[i]);
  auto r = fourier_batch(w, 0.0, kmax, args, std::abs(hbar * t / m), spec, threads);
  if (!r.converged)
    throw QuadratureError("e2_values: quadrature did not converge", cplx(0.0, 0.0),
                          r.achieved_error);
  return std::move(r.values);
}

// Bound-state projection coefficient <phi_alpha, psi> (zero for alpha > 0).
inline cplx bound_state_overlap(const CoherentParams& cp, const DeltaCoupling& dc) {
  const auto bs = bound_state(dc);
  if (!bs) return cplx(0.0, 0.0);
  const HalfLineTransforms h = half_line_transforms(cp, cplx(0.0, bs->decay_rate));
  return bs->amplitude_prefactor * (h.plus + h.minus);
}

inline PropagatorPieces propagator_pieces(const CoherentParams& cp, double t,
                                          const DeltaCoupling& dc, WaveFunctionGrid grid,
                                          const QuadratureSpec& spec = {},
                                          int threads = 0) {
  cp.validate();
  dc.validate();
  if (cp.q * cp.p == 0.0) throw RegimeError("propagator_pieces: requires q p != 0");
  const double hbar = cp.constants.hbar;
  const double sq = sgn(cp.q);

  PropagatorPieces out;
  grid.values.assign(grid.size(), cplx(0.0, 0.0));  // caller values are irrelevant
  out.free_part = grid;
  out.f_plus_t = grid;
  out.f_minus_t = grid;
  out.e1 = grid;
  out.e2 = grid;
  out.e_alpha = grid;
  out.total = grid;

  const std::size_t n = grid.size();
  std::vector<double> folded(n);
  for (std::size_t i = 0; i < n; ++i) folded[i] = -sq * std::abs(grid.xs[i]);

  for (std::size_t i = 0; i < n; ++i)
    out.free_part.values[i] = free_evolved_state(cp, t, grid.xs[i]);

  auto [fp, fm] = f_transforms(cp, t, dc, folded, spec, threads);
  out.f_plus_t.values = std::move(fp);
  out.f_minus_t.values = std::move(fm);

  out.e1.values = e1_values(cp, t, dc, grid.xs, spec, threads);
  out.e2.values = e2_values(cp, t, dc, grid.xs, spec, threads);

  const cplx overlap = bound_state_overlap(cp, dc);
  if (const auto bs = bound_state(dc)) {
    const cplx phase = std::polar(1.0, -t * bs->lambda_alpha / hbar);
    for (std::size_t i = 0; i < n; ++i)
      out.e_alpha.values[i] = phase * overlap * bs->amplitude(grid.xs[i]);
  }

  const double gp = heaviside(cp.q * cp.p);
  const double gm = heaviside(-cp.q * cp.p);
  for (std::size_t i = 0; i < n; ++i) {
    out.total.values[i] = out.free_part.values[i] + gp * out.f_plus_t.values[i] +
                          gm * out.f_minus_t.values[i] + out.e1.values[i] +
                          out.e2.values[i] + out.e_alpha.values[i];
  }
  return out;
}

inline WaveFunctionGrid quantum_evolve(const CoherentParams& cp, double t,
                                       const DeltaCoupling& dc, WaveFunctionGrid grid,
                                       const QuadratureSpec& spec = {}, int threads = 0) {
  return propagator_pieces(cp, t, dc, std::move(grid), spec, threads).total;
}

// Upsilon approximant: free(x) + [theta(qp) R_+(p/hbar) + theta(-qp) R_-(p/hbar)] free(-sgn(q)|x|)
inline WaveFunctionGrid upsilon_approximant(const CoherentParams& cp, double t,
                                            const DeltaCoupling& dc,
                                            WaveFunctionGrid grid) {
  dc.validate();
  if (cp.q * cp.p == 0.0) throw RegimeError("upsilon_approximant: requires q p != 0");
  const ReflectionPair R = reflection_coefficients(cp.p / cp.constants.hbar, dc);
  const cplx coeff =
      heaviside(cp.q * cp.p) * R.plus + heaviside(-cp.q * cp.p) * R.minus;
  const double sq = sgn(cp.q);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.xs[i];
    grid.values[i] = free_evolved_state(cp, t, x) +
                     coeff * free_evolved_state(cp, t, -sq * std::abs(x));
  }
  return grid;
}

// L2 gaps of Lemma-type reflected states:
//   gap_even   = || psi(sgn(q)|.|) - (psi(.) + psi(-.)) ||
//   gap_mirror = || psi(-sgn(q)|.|) ||
struct ReflectedStateEstimates {
  double gap_even;
  double gap_mirror;
  double bound;  // exp(-q^2 / (4 hbar |sigma|^2))
};

inline ReflectedStateEstimates reflected_state_estimates(const CoherentParams& cp) {
  cp.validate();
  if (cp.q == 0.0) throw RegimeError("reflected_state_estimates: requires q != 0");
  const double sq = sgn(cp.q);
  const Window w1{cp.q, kEnvelopeSd * std::sqrt(cp.constants.hbar) * std::abs(cp.sigma)};
  const Window w2{-cp.q, w1.halfwidth};
  const Window windows[2] = {w1, w2};
  const double kmax = packet_kmax(cp, 0.0);
  const double gap_even = adaptive_grid_norm(
      [&](double x) {
        return coherent_state(cp, sq * std::abs(x)) -
               (coherent_state(cp, x) + coherent_state(cp, -x));
      },
      windows, kmax);
  const double gap_mirror = adaptive_grid_norm(
      [&](double x) { return coherent_state(cp, -sq * std::abs(x)); }, windows, kmax);
  const double expo =
      cp.q * cp.q / (4.0 * cp.constants.hbar * std::norm(cp.sigma));
  return {gap_even, gap_mirror, std::exp(-expo)};
}

// ---------------------------------------------------------------------------
// Wave operators Omega_pm and the scattering operator.
// ---------------------------------------------------------------------------

// E3_pm on a batch of x.
inline std::vector<cplx> e3_values(const CoherentParams& cp, int sign,
                                   const DeltaCoupling& dc, std::span<const double> xs,
                                   const QuadratureSpec& spec = {}, int threads = 0) {
  dc.validate();
  const double kmax = detail::mirrored_envelope_reach(cp, spec.absolute_floor);
  if (kmax <= 0.0) return std::vector<cplx>(xs.size(), cplx(0.0, 0.0));
  const double sqp = sgn(cp.q * cp.p);
  const double sp = sgn(cp.p);
  const double inv_sqrt2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  const double outer = (sign >= 0 ? 1.0 : -1.0) * sqp;
  const auto w = [&](double k) {
    const ReflectionPair R = reflection_coefficients(k, dc);
    const cplx refl = (sign >= 0) ? R.plus : R.minus;
    return outer * inv_sqrt2pi * refl * coherent_state_fourier(cp, -sp * k);
  };
  // exp(-i sgn(pq) k |x|) - exp(+i sgn(pq) k |x|): one batch over concatenated args.
  const std::size_t n = xs.size();
  std::vector<double> args(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    args[i] = -sqp * std::abs(xs[i]);
    args[n + i] = sqp * std::abs(xs[i]);
  }
  auto r = fourier_batch(w, 0.0, kmax, args, 0.0, spec, threads);
  if (!r.converged)
    throw QuadratureError("e3_values: quadrature did not converge", cplx(0.0, 0.0),
                          r.achieved_error);
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = r.values[i] - r.values[n + i];
  return out;
}

// Omega_pm psi at a batch of x.
inline std::vector<cplx> wave_operator_values(const CoherentParams& cp, int sign,
                                              const DeltaCoupling& dc,
                                              std::span<const double> xs,
                                              const QuadratureSpec& spec = {},
                                              int threads = 0) {
  cp.validate();
  dc.validate();
  if (cp.q * cp.p == 0.0) throw RegimeError("wave_operator_values: requires q p != 0");
  const double sq = sgn(cp.q);
  const double gp = heaviside(cp.q * cp.p);
  const double gm = heaviside(-cp.q * cp.p);
  // theta(qp) F_{pm,0}(mp sgn(q)|x|) + theta(-qp) F_{pm,0}(pm sgn(q)|x|)
  const double fold = (sign >= 0 ? -1.0 : 1.0) * (gp > 0.0 ? 1.0 : -1.0);
  std::vector<double> args(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) args[i] = fold * sq * std::abs(xs[i]);
  auto [fp, fm] = f_transforms(cp, 0.0, dc, args, spec, threads);
  const std::vector<cplx>& f = (sign >= 0) ? fp : fm;
  const std::vector<cplx> e3 = e3_values(cp, sign, dc, xs, spec, threads);
  std::vector<cplx> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    out[i] = coherent_state(cp, xs[i]) + f[i] + e3[i];
  return out;
}

inline WaveFunctionGrid quantum_wave_operator(const CoherentParams& cp, int sign,
                                              const DeltaCoupling& dc,
                                              WaveFunctionGrid grid,
                                              const QuadratureSpec& spec = {},
                                              int threads = 0) {
  grid.values = wave_operator_values(cp, sign, dc, grid.xs, spec, threads);
  return grid;
}

namespace detail {

struct PanelNodes {
  std::vector<double> nodes, weights;
};

inline PanelNodes gl_panel_nodes(double a, double b, double max_slope, double budget,
                                 int order) {
  const GaussRule& rule = gauss_legendre(order);
  const double width = std::max(budget / std::max(max_slope, 1e-9), (b - a) * 1e-6);
  const std::size_t panels =
      std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil((b - a) / width)));
  PanelNodes out;
  out.nodes.reserve(panels * order);
  out.weights.reserve(panels * order);
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int i = 0; i < order; ++i) {
      out.nodes.push_back(mid + 0.5 * h * rule.nodes[i]);
      out.weights.push_back(0.5 * h * rule.weights[i]);
    }
  }
  return out;
}

}  // namespace detail

// S_alpha psi = F* F_+ (Omega^- psi): generalized transform against conj(phi^+_k),
// then inverse Fourier transform, both by panel quadrature on shared node sets.
inline WaveFunctionGrid quantum_scattering(const CoherentParams& cp,
                                           const DeltaCoupling& dc, WaveFunctionGrid grid,
                                           const QuadratureSpec& spec = {},
                                           int threads = 0) {
  cp.validate();
  dc.validate();
  if (cp.q * cp.p == 0.0) throw RegimeError("quantum_scattering: requires q p != 0");
  const double hbar = cp.constants.hbar;
  const double khalf =
      kEnvelopeSd * std::abs(cp.sigma_breve) / std::sqrt(2.0 * hbar);
  const double kmax = std::abs(cp.p) / hbar + khalf;
  const double xhalf = kEnvelopeSd * std::sqrt(hbar) * std::abs(cp.sigma);
  const double xmax = std::abs(cp.q) + xhalf;
  const double inv_sqrt2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

  std::vector<cplx> prev;
  double budget = 0.5 * spec.panel_order;
  for (int level = 0; level <= 4; ++level) {
    const detail::PanelNodes xk = detail::gl_panel_nodes(-xmax, xmax, kmax, budget,
                                                         spec.panel_order);
    const detail::PanelNodes kk = detail::gl_panel_nodes(-kmax, kmax, xmax, budget,
                                                         spec.panel_order);
    const std::vector<cplx> omega =
        wave_operator_values(cp, -1, dc, xk.nodes, spec, threads);
    // zeta(k) = Int conj(phi^+_k(x)) (Omega^- psi)(x) dx
    std::vector<cplx> zeta(kk.nodes.size());
    parallel_for(
        kk.nodes.size(),
        [&](std::size_t j) {
          const double k = kk.nodes[j];
          const cplx rconj = std::conj(reflection_coefficients(k, dc).plus);
          cplx acc(0.0, 0.0);
          for (std::size_t i = 0; i < xk.nodes.size(); ++i) {
            const double x = xk.nodes[i];
            const cplx phi_conj =
                inv_sqrt2pi * (std::polar(1.0, -k * x) +
                               rconj * std::polar(1.0, std::abs(k) * std::abs(x)));
            acc += xk.weights[i] * phi_conj * omega[i];
          }
          zeta[j] = acc;
        },
        threads);
    // S(x) = (2 pi)^{-1/2} Int e^{i k x} zeta(k) dk on the output grid
    std::vector<cplx> cur(grid.size());
    parallel_for(
        grid.size(),
        [&](std::size_t i) {
          const double x = grid.xs[i];
          cplx acc(0.0, 0.0);
          for (std::size_t j = 0; j < kk.nodes.size(); ++j)
            acc += kk.weights[j] * zeta[j] * std::polar(1.0, kk.nodes[j] * x);
          cur[i] = inv_sqrt2pi * acc;
        },
        threads);
    if (!prev.empty()) {
      double diff = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < cur.size(); ++i) {
        diff = std::max(diff, std::abs(cur[i] - prev[i]));
        scale = std::max(scale, std::abs(cur[i]));
      }
      if (diff <= std::max(10.0 * spec.relative_tol * scale, spec.absolute_floor)) {
        grid.values = std::move(cur);
        return grid;
      }
    }
    prev = std::move(cur);
    budget *= 0.5;
  }
  grid.values = std::move(prev);
  return grid;
}

// Direct spectral evaluation of the evolution (cross-check path): quadrature of
// exp(-i hbar t k^2/2m) phi^+_k(x) (F_+ psi)(k) plus the bound-state term.
inline WaveFunctionGrid quantum_evolve_spectral_direct(const CoherentParams& cp, double t,
                                                       const DeltaCoupling& dc,
                                                       WaveFunctionGrid grid,
                                                       const QuadratureSpec& spec = {},
                                                       int threads = 0) {
  cp.validate();
  dc.validate();
  const double hbar = cp.constants.hbar, m = cp.constants.mass;
  const double khalf = kEnvelopeSd * std::abs(cp.sigma_breve) / std::sqrt(2.0 * hbar);
  const double kmax = 2.0 * (std::abs(cp.p) / hbar + khalf) + 200.0;
  double xmax = 1.0;
  for (double x : grid.xs) xmax = std::max(xmax, std::abs(x));
  const double budget = 0.5 * spec.panel_order;
  const detail::PanelNodes kk = detail::gl_panel_nodes(
      -kmax, kmax, xmax + std::abs(hbar * t / m) * kmax, budget, spec.panel_order);
  std::vector<cplx> fpsi(kk.nodes.size());
  parallel_for(
      kk.nodes.size(),
      [&](std::size_t j) {
        const double k = kk.nodes[j];
        const HalfLineTransforms h = half_line_transforms(cp, cplx(std::abs(k), 0.0));
        const cplx rconj = std::conj(reflection_coefficients(k, dc).plus);
        fpsi[j] = coherent_state_fourier(cp, k) +
                  rconj / std::sqrt(2.0 * std::numbers::pi) * (h.plus + h.minus);
      },
      threads);
  const double inv_sqrt2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  parallel_for(
      grid.size(),
      [&](std::size_t i) {
        const double x = grid.xs[i];
        cplx acc(0.0, 0.0);
        for (std::size_t j = 0; j < kk.nodes.size(); ++j) {
          const double k = kk.nodes[j];
          const cplx phi =
              inv_sqrt2pi * (std::polar(1.0, k * x) +
                             reflection_coefficients(k, dc).plus *
                                 std::polar(1.0, -std::abs(k) * std::abs(x)));
          acc += kk.weights[j] * std::polar(1.0, -hbar * t * k * k / (2.0 * m)) * phi *
                 fpsi[j];
        }
        grid.values[i] = acc;
      },
      threads);
  if (const auto bs = bound_state(dc)) {
    const cplx overlap = bound_state_overlap(cp, dc);
    const cplx phase = std::polar(1.0, -t * bs->lambda_alpha / hbar);
    for (std::size_t i = 0; i < grid.size(); ++i)
      grid.values[i] += phase * overlap * bs->amplitude(grid.xs[i]);
  }
  return grid;
}

// Comparison grid covering the evolved packet and its mirror image.
inline WaveFunctionGrid comparison_grid(const CoherentParams& cp, double t,
                                        double points_per_wave = 8.0,
                                        std::size_t min_points = 801) {
  const Window w = packet_window(cp, t);
  const Window windows[2] = {w, {-w.center, w.halfwidth}};
  const double kmax = packet_kmax(cp, t);
  return hull_grid(windows, kmax, points_per_wave, min_points);
}

}  // namespace semidelta
