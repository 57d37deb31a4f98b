#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "semidelta/quadrature.hpp"
#include "semidelta/states.hpp"

using namespace semidelta;

namespace {

const CoherentParams desk = CoherentParams::standard({0.1, 1.0}, 1.0, -2.0, 1.0);

double grid_norm(const CoherentParams& cp, double t = 0.0) {
  const Window w = packet_window(cp, t);
  const Window windows[1] = {w};
  return adaptive_grid_norm([&](double x) { return free_evolved_state(cp, t, x); },
                            windows, packet_kmax(cp, t));
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(CoherentParams::standard({-1.0, 1.0}, 1.0, -2.0, 1.0), ParameterError);
  CoherentParams bad = desk;
  bad.sigma = cplx(-0.3, 0.1);
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  bad = desk;
  bad.sigma_breve = cplx(2.0, 0.0);  // breaks Re(conj(sigma) sigma_breve) = 1
  CHECK_THROWS_AS(bad.validate(), ParameterError);
}

TEST_CASE("coherent state at the packet center") {
  const double hbar = desk.constants.hbar;
  const cplx want = std::pow(2.0 * std::numbers::pi * hbar, -0.25) / std::sqrt(desk.sigma);
  CHECK(std::abs(coherent_state(desk, desk.q) - want) < 1e-15);
}

TEST_CASE("reflection identity psi(-q,-p; x) = psi(q,p; -x)") {
  CoherentParams flipped = desk;
  flipped.q = -desk.q;
  flipped.p = -desk.p;
  for (double x : {-3.0, -0.5, 0.0, 1.2, 4.4}) {
    CHECK(std::abs(coherent_state(flipped, x) - coherent_state(desk, -x)) < 1e-15);
  }
}

TEST_CASE("position and momentum normalization") {
  CHECK(grid_norm(desk) == doctest::Approx(1.0).epsilon(1e-9));

  // Plancherel on the Fourier side
  const double khalf = 14.0 * std::abs(desk.sigma_breve) / std::sqrt(2.0 * desk.constants.hbar);
  const double kc = desk.p / desk.constants.hbar;
  QuadratureSpec spec;
  spec.relative_tol = 1e-12;
  const cplx nrm2 = integrate_or_throw(
      [&](double k) { return cplx(std::norm(coherent_state_fourier(desk, k)), 0.0); },
      kc - khalf, kc + khalf, spec);
  CHECK(std::sqrt(nrm2.real()) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("fourier transform: peak value and discrete-Fourier oracle") {
  CoherentParams cp = CoherentParams::standard({0.1, 1.0}, 1.0, 0.0, 1.0);
  cp.q = 0.0;
  const cplx peak = coherent_state_fourier(cp, cp.p / cp.constants.hbar);
  const cplx want = std::pow(2.0 * cp.constants.hbar / std::numbers::pi, 0.25) /
                    std::sqrt(cp.sigma_breve);
  CHECK(std::abs(peak - want) < 1e-15);

  // discrete Fourier sum of grid samples vs closed form, desk parameters
  const std::size_t n = 1 << 15;
  const double lo = -10.0, hi = 6.0;
  const double dx = (hi - lo) / static_cast<double>(n);
  std::vector<cplx> samples(n + 1);
  for (std::size_t i = 0; i <= n; ++i) samples[i] = coherent_state(desk, lo + dx * i);
  const auto dft = [&](double k) {
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 0.5 : 1.0;
      acc += w * samples[i] * std::polar(1.0, -k * (lo + dx * i));
    }
    return acc * dx / std::sqrt(2.0 * std::numbers::pi);
  };
  for (double k : {4.0, 7.5, 10.0, 11.3, 16.0}) {
    CHECK(std::abs(dft(k) - coherent_state_fourier(desk, k)) < 1e-7);
  }
}

TEST_CASE("free evolution closed form") {
  const FreeEvolutionResult id = free_evolve(desk, 0.0);
  CHECK(id.action_phase == 0.0);
  CHECK(id.sigma_t == desk.sigma);
  CHECK(id.q_t == desk.q);

  const FreeEvolutionResult r = free_evolve(desk, 2.0);
  CHECK(r.action_phase == doctest::Approx(1.0));
  CHECK(r.sigma_t.real() == doctest::Approx(1.0));
  CHECK(r.sigma_t.imag() == doctest::Approx(1.0));
  CHECK(r.q_t == doctest::Approx(0.0));
  CHECK(r.p_t == doctest::Approx(1.0));
}

TEST_CASE("free evolution group law") {
  const double t = 0.8, s = 1.7;
  const CoherentParams once = evolved_params(desk, t);
  const FreeEvolutionResult two = free_evolve(once, s);
  const FreeEvolutionResult direct = free_evolve(desk, t + s);
  CHECK(std::abs(two.sigma_t - direct.sigma_t) < 1e-12);
  CHECK(two.q_t == doctest::Approx(direct.q_t).epsilon(1e-12));
  const double a_first = free_evolve(desk, t).action_phase;
  CHECK(a_first + two.action_phase == doctest::Approx(direct.action_phase).epsilon(1e-12));

  // evolved state stays normalized
  CHECK(grid_norm(desk, 3.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("moments") {
  const CoherentParams cp = CoherentParams::standard({0.04, 1.0}, 1.0, 0.3, -0.7);
  const Moments mm = moments(cp);
  CHECK(mm.sd_q == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(mm.sd_p == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(mm.sd_q * mm.sd_p == doctest::Approx(cp.constants.hbar / 2.0).epsilon(1e-14));

  // grid-quadrature <x> against q
  QuadratureSpec spec;
  spec.relative_tol = 1e-12;
  const double half = 14.0 * mm.sd_q;
  const cplx mean = integrate_or_throw(
      [&](double x) { return cplx(x * std::norm(coherent_state(cp, x)), 0.0); },
      cp.q - half, cp.q + half, spec);
  CHECK(std::abs(mean.real() - cp.q) < 1e-9);
}

TEST_CASE("uncertainty saturation across the family") {
  // general sigma with Re(conj(sigma) sigma_breve) = 1 need not saturate;
  // the standard family does, exactly.
  for (double h : {0.2, 0.05, 0.00625}) {
    const CoherentParams cp = CoherentParams::standard({h, 1.3}, 0.9, -1.0, 2.0);
    const Moments mm = moments(cp);
    CHECK(mm.sd_q * mm.sd_p == doctest::Approx(h / 2.0).epsilon(1e-14));
  }
}

TEST_CASE("phase-space kernel") {
  // equals the coherent state with swapped roles
  CHECK(std::abs(phase_space_kernel(desk, 0.7, desk.q, desk.p) -
                 coherent_state(desk, 0.7)) == 0.0);

  // even-part combination matches the reflection identity
  const double x = 0.9, q = -1.4, p = 0.6;
  const cplx lhs = phase_space_kernel(desk, x, q, p) + phase_space_kernel(desk, x, -q, -p);
  CoherentParams at = desk;
  at.q = q;
  at.p = p;
  const cplx rhs = coherent_state(at, x) + coherent_state(at, -x);
  CHECK(std::abs(lhs - rhs) < 1e-15);

  // |phi_{sigma,x}(xi)|^2 integrates to 1 over x (same Gaussian)
  CoherentParams arb = desk;
  arb.q = 1.1;
  arb.p = -0.4;
  const Window w{arb.q, 14.0 * std::sqrt(arb.constants.hbar) * std::abs(arb.sigma)};
  const Window windows[1] = {w};
  const double nrm = adaptive_grid_norm(
      [&](double x) { return phase_space_kernel(desk, x, arb.q, arb.p); }, windows,
      packet_kmax(arb, 0.0));
  CHECK(nrm == doctest::Approx(1.0).epsilon(1e-9));
}
