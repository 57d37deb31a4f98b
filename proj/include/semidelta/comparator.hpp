#pragma once

// Theorem/lemma right-hand sides evaluated literally, the corresponding LHS
// errors from the dynamics modules, scaling-slope fits, and the regime checks
// of the corollaries.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "semidelta/classical.hpp"
#include "semidelta/errors.hpp"
#include "semidelta/quantum.hpp"

namespace semidelta {

inline double collision_time(double q, double p, double mass = 1.0) {
  if (p == 0.0) throw ParameterError("collision_time: p must be nonzero");
  return -mass * q / p;
}

// max(hbar sigma0^2 / q^2, hbar / (m |alpha| sigma0)^{2/3})
inline double underline_h(const CoherentParams& cp, const DeltaCoupling& dc) {
  const double hbar = cp.constants.hbar, m = cp.constants.mass;
  const double s0 = cp.sigma0;
  return std::max(hbar * s0 * s0 / (cp.q * cp.q),
                  hbar / std::pow(m * std::abs(dc.alpha) * s0, 2.0 / 3.0));
}

// underline_h with the additional term hbar / (sigma0^2 p^2)
inline double double_underline_h(const CoherentParams& cp, const DeltaCoupling& dc) {
  const double s0 = cp.sigma0;
  return std::max(underline_h(cp, dc),
                  cp.constants.hbar / (s0 * s0 * cp.p * cp.p));
}

struct RhsTerm {
  std::string name;
  double value;
};

struct RhsTerms {
  std::vector<RhsTerm> terms;
  double sum() const {
    double s = 0.0;
    for (const auto& t : terms) s += t.value;
    return s;
  }
};

// The seven terms of the time-dependent estimate, evaluated exactly as printed
// for the standard family.
inline RhsTerms theorem1_rhs(const CoherentParams& cp, double t, const DeltaCoupling& dc,
                             double lambda1, double lambda2) {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
    throw ParameterError("theorem1_rhs: lambda1, lambda2 must be positive");
  const double hbar = cp.constants.hbar, m = cp.constants.mass, s0 = cp.sigma0;
  const double scale = std::pow(m * std::abs(dc.alpha) * s0, 2.0 / 3.0);
  const double h_ratio = hbar / scale;
  const FreeEvolutionResult fe = free_evolve(cp, t);
  RhsTerms r;
  r.terms = {
      {"rhs_power_l1", std::pow(h_ratio, 1.5 - lambda1)},
      {"rhs_exp_l1", std::exp(-0.5 * std::pow(scale / hbar, 2.0 * lambda1))},
      {"rhs_momentum_power_l2",
       std::exp(-s0 * cp.p * cp.p / hbar) * std::pow(h_ratio, 1.5 - 1.5 * lambda2)},
      {"rhs_momentum_exp_l2",
       std::exp(-s0 * cp.p * cp.p / hbar) *
           std::exp(-0.5 * std::pow(scale / hbar, 2.0 * lambda2))},
      {"rhs_position_gauss", std::exp(-cp.q * cp.q / (8.0 * hbar * s0 * s0))},
      {"rhs_bound_state",
       std::exp(-m * std::abs(dc.alpha) * std::abs(cp.q) / (8.0 * hbar * hbar))},
      {"rhs_collision",
       std::exp(-fe.q_t * fe.q_t / (4.0 * hbar * std::norm(fe.sigma_t)))},
  };
  return r;
}

// Wave-operator estimate terms.
inline RhsTerms theorem2_wave_rhs(const CoherentParams& cp, const DeltaCoupling& dc,
                                  double lambda) {
  const double hbar = cp.constants.hbar, m = cp.constants.mass, s0 = cp.sigma0;
  const double scale = std::pow(m * std::abs(dc.alpha) * s0, 2.0 / 3.0);
  RhsTerms r;
  r.terms = {
      {"rhs_power_l", std::pow(hbar / scale, 1.5 - lambda)},
      {"rhs_exp_l", std::exp(-0.5 * std::pow(scale / hbar, 2.0 * lambda))},
      {"rhs_momentum_gauss", std::exp(-s0 * s0 * cp.p * cp.p / hbar)},
      {"rhs_position_gauss", std::exp(-cp.q * cp.q / (4.0 * hbar * s0 * s0))},
  };
  return r;
}

// Scattering estimate terms.
inline RhsTerms theorem2_scattering_rhs(const CoherentParams& cp, const DeltaCoupling& dc,
                                        double lambda) {
  const double hbar = cp.constants.hbar, m = cp.constants.mass, s0 = cp.sigma0;
  const double scale = std::pow(m * std::abs(dc.alpha) * s0, 2.0 / 3.0);
  RhsTerms r;
  r.terms = {
      {"rhs_power_l", std::pow(hbar / scale, 1.5 - lambda)},
      {"rhs_exp_l", std::exp(-0.5 * std::pow(scale / hbar, 2.0 * lambda))},
      {"rhs_momentum_gauss", std::exp(-s0 * s0 * cp.p * cp.p / hbar)},
      {"rhs_position_gauss", std::exp(-cp.q * cp.q / (8.0 * hbar * s0 * s0))},
      {"rhs_bound_state",
       std::exp(-m * std::abs(dc.alpha) * std::abs(cp.q) / (8.0 * hbar * hbar))},
  };
  return r;
}

// |t - t_coll| >= c0 |t_coll| sqrt((3/2 - lambda) uh |ln uh|)
inline bool collision_exclusion(const CoherentParams& cp, double t,
                                const DeltaCoupling& dc, double lambda = 0.1,
                                double c0 = 2.5) {
  const double uh = underline_h(cp, dc);
  if (!(uh > 0.0) || !(uh < 1.0))
    throw ParameterError("collision_exclusion: underline_h must lie in (0,1)");
  const double tc = collision_time(cp.q, cp.p, cp.constants.mass);
  const double threshold =
      c0 * std::abs(tc) * std::sqrt((1.5 - lambda) * uh * std::abs(std::log(uh)));
  return std::abs(t - tc) >= threshold;
}

// || e^{-itH_alpha/hbar} psi - quasiclassical ||_{L2} on a grid covering both packets.
inline double theorem1_error(const CoherentParams& cp, double t, const DeltaCoupling& dc,
                             const QuadratureSpec& spec = {}, int threads = 0,
                             double points_per_wave = 8.0) {
  const WaveFunctionGrid grid = comparison_grid(cp, t, points_per_wave);
  const WaveFunctionGrid qm = quantum_evolve(cp, t, dc, grid, spec, threads);
  const WaveFunctionGrid cl = quasiclassical_approximant(cp, t, dc.alpha, grid);
  return l2_distance(qm, cl);
}

// || e^{-itH_alpha/hbar} psi - Dirichlet (beta = inf) approximant ||; only defined
// in the reflected regime of the remark that introduces it.
inline double dirichlet_gap(const CoherentParams& cp, double t, const DeltaCoupling& dc,
                            const QuadratureSpec& spec = {}, int threads = 0) {
  const double tc = collision_time(cp.q, cp.p, cp.constants.mass);
  const bool regime = (cp.q * cp.p < 0.0 && t > tc) || (cp.q * cp.p > 0.0 && t < tc);
  if (!regime) throw RegimeError("dirichlet_gap: requires the post/pre-collision regime");
  const WaveFunctionGrid grid = comparison_grid(cp, t);
  const WaveFunctionGrid qm = quantum_evolve(cp, t, dc, grid, spec, threads);
  const WaveFunctionGrid cl = quasiclassical_dirichlet(cp, t, grid);
  return l2_distance(qm, cl);
}

// Classical prediction psi + theta(mp qp) R_pm(p/hbar) (psi + psi(-.)).
inline WaveFunctionGrid classical_wave_prediction(const CoherentParams& cp, int sign,
                                                  const DeltaCoupling& dc,
                                                  WaveFunctionGrid grid) {
  const ReflectionPair R = reflection_coefficients(cp.p / cp.constants.hbar, dc);
  const cplx refl = (sign >= 0) ? R.plus : R.minus;
  const double gate = heaviside((sign >= 0 ? -1.0 : 1.0) * cp.q * cp.p);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.xs[i];
    grid.values[i] = coherent_state(cp, x) +
                     gate * refl * (coherent_state(cp, x) + coherent_state(cp, -x));
  }
  return grid;
}

// Classical prediction psi + R_-(p/hbar) (psi + psi(-.)).
inline WaveFunctionGrid classical_scattering_prediction(const CoherentParams& cp,
                                                        const DeltaCoupling& dc,
                                                        WaveFunctionGrid grid) {
  const ReflectionPair R = reflection_coefficients(cp.p / cp.constants.hbar, dc);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.xs[i];
    grid.values[i] = coherent_state(cp, x) +
                     R.minus * (coherent_state(cp, x) + coherent_state(cp, -x));
  }
  return grid;
}

inline double wave_error(const CoherentParams& cp, int sign, const DeltaCoupling& dc,
                         const QuadratureSpec& spec = {}, int threads = 0) {
  const WaveFunctionGrid grid = comparison_grid(cp, 0.0);
  const WaveFunctionGrid qm = quantum_wave_operator(cp, sign, dc, grid, spec, threads);
  const WaveFunctionGrid cl = classical_wave_prediction(cp, sign, dc, grid);
  return l2_distance(qm, cl);
}

inline double scattering_error(const CoherentParams& cp, const DeltaCoupling& dc,
                               const QuadratureSpec& spec = {}, int threads = 0) {
  const WaveFunctionGrid grid = comparison_grid(cp, 0.0);
  const WaveFunctionGrid qm = quantum_scattering(cp, dc, grid, spec, threads);
  const WaveFunctionGrid cl = classical_scattering_prediction(cp, dc, grid);
  return l2_distance(qm, cl);
}

// ---------------------------------------------------------------------------
// Scaling fit: least-squares slope of log(error) against log(h).
// ---------------------------------------------------------------------------
struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int used = 0;
  int dropped = 0;
};

inline FitResult scaling_fit(std::span<const std::pair<double, double>> samples) {
  std::vector<std::pair<double, double>> logs;
  int dropped = 0;
  for (const auto& [h, err] : samples) {
    if (h > 0.0 && err > 0.0)
      logs.emplace_back(std::log(h), std::log(err));
    else
      ++dropped;
  }
  if (logs.size() < 4)
    throw ParameterError("scaling_fit: needs at least 4 usable samples");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : logs) {
    mx += x;
    my += y;
  }
  mx /= logs.size();
  my /= logs.size();
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (const auto& [x, y] : logs) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
  }
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssres = 0.0;
  for (const auto& [x, y] : logs) {
    const double r = y - (fit.intercept + fit.slope * x);
    ssres += r * r;
  }
  fit.r2 = (syy > 0.0) ? 1.0 - ssres / syy : 1.0;
  fit.used = static_cast<int>(logs.size());
  fit.dropped = dropped;
  return fit;
}

// Max ratio LHS / RHS over a sweep: the fitted constant of an existential bound.
inline double fitted_constant(std::span<const std::pair<double, double>> lhs_rhs) {
  double c = 0.0;
  for (const auto& [lhs, rhs] : lhs_rhs)
    if (rhs > 0.0) c = std::max(c, lhs / rhs);
  return c;
}

struct ErrorReport {
  double lhs = 0.0;
  RhsTerms rhs;
  double underline_h = 0.0;
  double double_underline_h = 0.0;
  double fitted_C = 0.0;
  double slope = 0.0;
  bool exclusion_ok = true;
};

}  // namespace semidelta
