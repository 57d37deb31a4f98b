#pragma once

// Delta-interaction coupling data: reflection coefficients, generalized
// eigenfunctions, the bound state for alpha < 0, and the classical coupling
// beta (finite or infinite, beta = 2 alpha / hbar when derived from quantum data).

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>

#include "semidelta/errors.hpp"
#include "semidelta/states.hpp"

namespace semidelta {

struct DeltaCoupling {
  double alpha = 1.0;
  PhysicalConstants constants;

  void validate() const {
    constants.validate();
    if (alpha == 0.0) throw ParameterError("DeltaCoupling: alpha must be nonzero");
  }

  double beta() const { return 2.0 * alpha / constants.hbar; }
};

// beta in (R \ {0}) union {infinity}; beta = 0 is the free transport case and
// is served by free_transport directly.
struct BetaCoupling {
  double beta = 1.0;
  bool is_infinite = false;

  static BetaCoupling finite(double b) {
    if (b == 0.0) throw ParameterError("BetaCoupling: beta must be nonzero");
    return {b, false};
  }
  static BetaCoupling infinity() { return {0.0, true}; }
  static BetaCoupling from_quantum(const DeltaCoupling& dc) {
    dc.validate();
    return finite(dc.beta());
  }

  // 2 |p| / (m beta); zero in the Dirichlet limit.
  double momentum_ratio(double p, double mass) const {
    if (is_infinite) return 0.0;
    return 2.0 * std::abs(p) / (mass * beta);
  }
};

struct ReflectionPair {
  cplx plus;   // R_+(k) = -1 / (1 + i hbar^2 |k| / (m alpha))
  cplx minus;  // R_-(k) = -1 / (1 - i hbar^2 |k| / (m alpha))
};

inline ReflectionPair reflection_coefficients(double k, const DeltaCoupling& dc) {
  const double r = dc.constants.hbar * dc.constants.hbar * std::abs(k) /
                   (dc.constants.mass * dc.alpha);
  return {-1.0 / cplx(1.0, r), -1.0 / cplx(1.0, -r)};
}

// phi^pm_k(x) = e^{ikx}/sqrt(2 pi) + R_pm(k) e^{mp i |k||x|}/sqrt(2 pi)
inline cplx generalized_eigenfunction(double k, double x, int sign,
                                      const DeltaCoupling& dc) {
  const double inv_sqrt2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  const ReflectionPair R = reflection_coefficients(k, dc);
  const cplx refl = (sign >= 0) ? R.plus : R.minus;
  const double phase = (sign >= 0 ? -1.0 : 1.0) * std::abs(k) * std::abs(x);
  return inv_sqrt2pi * (std::polar(1.0, k * x) + refl * std::polar(1.0, phase));
}

struct BoundState {
  double lambda_alpha;  // -m alpha^2 / (2 hbar^2)
  double decay_rate;    // m |alpha| / hbar^2
  double amplitude_prefactor;  // sqrt(m |alpha|) / hbar

  double amplitude(double x) const {
    return amplitude_prefactor * std::exp(-decay_rate * std::abs(x));
  }
};

// Present only for alpha < 0.
inline std::optional<BoundState> bound_state(const DeltaCoupling& dc) {
  dc.validate();
  if (dc.alpha >= 0.0) return std::nullopt;
  const double hbar = dc.constants.hbar, m = dc.constants.mass;
  BoundState b;
  b.lambda_alpha = -m * dc.alpha * dc.alpha / (2.0 * hbar * hbar);
  b.decay_rate = m * std::abs(dc.alpha) / (hbar * hbar);
  b.amplitude_prefactor = std::sqrt(m * std::abs(dc.alpha)) / hbar;
  return b;
}

}  // namespace semidelta
