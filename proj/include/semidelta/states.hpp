#pragma once

// Gaussian coherent states: closed-form evaluation, Fourier transform, moments,
// exact free evolution and the phase-space kernel fed to the classical flows.

#include <cmath>
#include <complex>
#include <numbers>

#include "semidelta/errors.hpp"
#include "semidelta/grid.hpp"

namespace semidelta {

struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;

  void validate() const {
    if (!(hbar > 0.0)) throw ParameterError("PhysicalConstants: hbar must be positive");
    if (!(mass > 0.0)) throw ParameterError("PhysicalConstants: mass must be positive");
  }
};

// Parameters (hbar, m, sigma0, sigma, sigma_breve, q, p) of a Gaussian coherent
// state.  The admissible family satisfies Re sigma > 0, Re sigma_breve > 0 and
// Re(conj(sigma) sigma_breve) = 1; the standard family fixes sigma_breve = 1/sigma0.
struct CoherentParams {
  PhysicalConstants constants;
  double sigma0 = 1.0;
  cplx sigma{1.0, 0.0};
  cplx sigma_breve{1.0, 0.0};
  double q = 0.0;
  double p = 0.0;

  static CoherentParams standard(PhysicalConstants constants, double sigma0, double q,
                                 double p) {
    CoherentParams cp{constants, sigma0, cplx(sigma0, 0.0), cplx(1.0 / sigma0, 0.0), q, p};
    cp.validate();
    return cp;
  }

  void validate() const {
    constants.validate();
    if (!(sigma0 > 0.0)) throw ParameterError("CoherentParams: sigma0 must be positive");
    if (!(sigma.real() > 0.0)) throw ParameterError("CoherentParams: Re sigma must be positive");
    if (!(sigma_breve.real() > 0.0))
      throw ParameterError("CoherentParams: Re sigma_breve must be positive");
    const double pairing = (std::conj(sigma) * sigma_breve).real();
    if (std::abs(pairing - 1.0) > 1e-12)
      throw ParameterError("CoherentParams: Re(conj(sigma) sigma_breve) must equal 1");
  }
};

namespace detail {

// Principal square root with the convention Re > 0 (guaranteed for Re z > 0).
inline cplx root_pos(cplx z) {
  const cplx r = std::sqrt(z);
  if (!(r.real() > 0.0)) throw ParameterError("square root left the Re > 0 branch");
  return r;
}

}  // namespace detail

// psi(x) = (2 pi hbar)^{-1/4} sigma^{-1/2} exp(-sigma_breve (x-q)^2/(4 hbar sigma) + i p (x-q)/hbar)
inline cplx coherent_state(const CoherentParams& cp, double x) {
  const double hbar = cp.constants.hbar;
  const cplx pref =
      std::pow(2.0 * std::numbers::pi * hbar, -0.25) / detail::root_pos(cp.sigma);
  const double dx = x - cp.q;
  const cplx expo = -cp.sigma_breve * dx * dx / (4.0 * hbar * cp.sigma) +
                    cplx(0.0, cp.p * dx / hbar);
  return pref * std::exp(expo);
}

// psi_hat(k) = sigma_breve^{-1/2} (2 hbar / pi)^{1/4} exp(-hbar sigma (k - p/hbar)^2 / sigma_breve - i k q)
inline cplx coherent_state_fourier(const CoherentParams& cp, double k) {
  const double hbar = cp.constants.hbar;
  const cplx pref = std::pow(2.0 * hbar / std::numbers::pi, 0.25) /
                    detail::root_pos(cp.sigma_breve);
  const double dk = k - cp.p / hbar;
  const cplx expo = -hbar * cp.sigma * dk * dk / cp.sigma_breve - cplx(0.0, k * cp.q);
  return pref * std::exp(expo);
}

struct FreeEvolutionResult {
  double action_phase = 0.0;  // A_t
  cplx sigma_t{1.0, 0.0};
  double q_t = 0.0;
  double p_t = 0.0;
};

// A_t = p^2 t / 2m, sigma_t = sigma + i sigma_breve t / 2m, q_t = q + p t / m.
inline FreeEvolutionResult free_evolve(const CoherentParams& cp, double t) {
  const double m = cp.constants.mass;
  FreeEvolutionResult r;
  r.action_phase = cp.p * cp.p * t / (2.0 * m);
  r.sigma_t = cp.sigma + cplx(0.0, 1.0) * cp.sigma_breve * (t / (2.0 * m));
  r.q_t = cp.q + cp.p * t / m;
  r.p_t = cp.p;
  return r;
}

// Parameters of the freely evolved state (same admissible family).
inline CoherentParams evolved_params(const CoherentParams& cp, double t) {
  const FreeEvolutionResult r = free_evolve(cp, t);
  CoherentParams out = cp;
  out.sigma = r.sigma_t;
  out.q = r.q_t;
  out.validate();
  return out;
}

// (e^{-i t H0 / hbar} psi)(x) = e^{i A_t / hbar} psi(sigma_t, sigma_breve, q_t, p; x)
inline cplx free_evolved_state(const CoherentParams& cp, double t, double x) {
  const FreeEvolutionResult r = free_evolve(cp, t);
  CoherentParams moved = cp;
  moved.sigma = r.sigma_t;
  moved.q = r.q_t;
  return std::polar(1.0, r.action_phase / cp.constants.hbar) * coherent_state(moved, x);
}

struct Moments {
  double mean_q, sd_q, mean_p, sd_p;
};

inline Moments moments(const CoherentParams& cp) {
  const double rh = std::sqrt(cp.constants.hbar);
  return {cp.q, rh * std::abs(cp.sigma), cp.p, rh * std::abs(cp.sigma_breve) / 2.0};
}

// phi_{sigma,x}(xi) := psi_{sigma,xi}(x) with xi = (q, p); same Gaussian with the
// roles of x and (q, p) swapped.
inline cplx phase_space_kernel(const CoherentParams& cp, double x, double q, double p) {
  CoherentParams swapped = cp;
  swapped.q = q;
  swapped.p = p;
  return coherent_state(swapped, x);
}

// Window covering the freely evolved packet at time t.
inline Window packet_window(const CoherentParams& cp, double t, double n_sd = 14.0) {
  const FreeEvolutionResult r = free_evolve(cp, t);
  return {r.q_t, n_sd * std::sqrt(cp.constants.hbar) * std::abs(r.sigma_t)};
}

// Largest local wavenumber of the freely evolved packet over its window
// (carrier p/hbar plus the chirp of the complex width).
inline double packet_kmax(const CoherentParams& cp, double t, double n_sd = 14.0) {
  const FreeEvolutionResult r = free_evolve(cp, t);
  const double hw = n_sd * std::sqrt(cp.constants.hbar) * std::abs(r.sigma_t);
  const double chirp = std::abs(cp.sigma_breve / r.sigma_t) * hw / (2.0 * cp.constants.hbar);
  return std::abs(cp.p) / cp.constants.hbar + chirp;
}

}  // namespace semidelta
