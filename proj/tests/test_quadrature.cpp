#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "semidelta/grid.hpp"
#include "semidelta/quadrature.hpp"

using namespace semidelta;

TEST_CASE("constant and Gaussian integrals") {
  const cplx one = integrate_or_throw([](double) { return cplx(1.0, 0.0); }, 0.0, 1.0);
  CHECK(std::abs(one - 1.0) < 1e-14);

  const cplx gauss =
      integrate_or_throw([](double x) { return cplx(std::exp(-x * x), 0.0); }, -9.0, 9.0);
  CHECK(std::abs(gauss - std::sqrt(std::numbers::pi)) < 1e-12);
}

TEST_CASE("half-line Gaussian against direct quadrature") {
  // Int_0^inf exp(-y^2 + i y) dy
  QuadratureSpec spec;
  spec.relative_tol = 1e-12;
  const cplx direct = integrate_or_throw(
      [](double y) { return std::exp(cplx(-y * y, y)); }, 0.0, 12.0, spec);
  const cplx closed = halfline_gaussian(cplx(1.0, 0.0), cplx(0.0, 1.0));
  CHECK(std::abs(direct - closed) < 1e-10);

  // complex rate and shift, checked against quadrature
  const cplx a(0.8, -0.35), b(0.4, 1.7);
  const cplx direct2 = integrate_or_throw(
      [&](double y) { return std::exp(-a * y * y + b * y); }, 0.0, 30.0, spec);
  CHECK(std::abs(direct2 - halfline_gaussian(a, b)) < 1e-9);

  // exponent folding: exp(c0) * integral stays finite where the bare
  // scaled-erfc branch would overflow
  const cplx big = halfline_gaussian(cplx(1e-3, 0.0), cplx(40.0, 3.0), cplx(-4.0e5, 0.0));
  CHECK(std::isfinite(big.real()));
  CHECK(std::isfinite(big.imag()));
}

TEST_CASE("panel-halving convergence order on an analytic integrand") {
  // fixed panel counts, order 32; observed exponent on a resolvable Gaussian
  const GaussRule& rule = gauss_legendre(32);
  const auto f = [](double x) { return cplx(std::exp(-40.0 * x * x), 0.0); };
  const double exact = std::sqrt(std::numbers::pi / 40.0);
  auto value = [&](int panels) {
    std::size_t evals = 0;
    return detail::panel_sum(f, -8.0, 8.0, panels, rule, &evals);
  };
  const double e2 = std::abs(value(2) - exact);
  const double e4 = std::abs(value(4) - exact);
  REQUIRE(e2 > 1e-14);
  REQUIRE(e4 > 1e-16);
  const double order = std::log2(e2 / e4);
  CHECK(order >= 10.0);
}

TEST_CASE("fourier_batch reproduces closed-form Gaussian transforms") {
  // Int exp(-k^2) exp(i k x) dk = sqrt(pi) exp(-x^2/4)
  std::vector<double> xs{-3.0, -1.2, 0.0, 0.7, 2.5};
  const auto W = [](double k) { return cplx(std::exp(-k * k), 0.0); };
  QuadratureSpec spec;
  spec.relative_tol = 1e-10;
  const auto res = fourier_batch(W, -9.0, 9.0, xs, 0.0, spec);
  REQUIRE(res.converged);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double want = std::sqrt(std::numbers::pi) * std::exp(-xs[i] * xs[i] / 4.0);
    CHECK(std::abs(res.values[i] - want) < 1e-10);
  }
}

TEST_CASE("fourier_batch with quadratic phase against adaptive reference") {
  // Int exp(-k^2/2) exp(-0.4 i k^2) exp(i k x) dk at a few x
  const double a = 0.4;
  const auto W = [&](double k) { return std::exp(cplx(-0.5 * k * k, -a * k * k)); };
  std::vector<double> xs{-2.0, 1.3, 4.0};
  QuadratureSpec spec;
  spec.relative_tol = 1e-10;
  const auto res = fourier_batch(W, -10.0, 10.0, xs, 2.0 * a, spec);
  REQUIRE(res.converged);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const cplx ref = integrate_or_throw(
        [&](double k) { return W(k) * std::polar(1.0, k * x); }, -10.0, 10.0, spec);
    CHECK(std::abs(res.values[i] - ref) < 1e-9);
  }
}

TEST_CASE("grid norms and distances") {
  WaveFunctionGrid g = uniform_grid(-1.0, 1.0, 401);
  for (std::size_t i = 0; i < g.size(); ++i) g.values[i] = cplx(1.0, 0.0);
  CHECK(l2_norm(g) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(l2_distance(g, g) == 0.0);

  WaveFunctionGrid h = g;
  for (auto& v : h.values) v = -v;
  CHECK(l2_distance(g, h) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));

  WaveFunctionGrid other = uniform_grid(-1.0, 1.0, 403);
  CHECK_THROWS_AS((void)l2_distance(g, other), GridError);
}

TEST_CASE("heaviside convention") {
  CHECK(heaviside(1.0) == 1.0);
  CHECK(heaviside(-1.0) == 0.0);
  CHECK(heaviside(0.0) == 0.0);
}
