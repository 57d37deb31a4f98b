#pragma once

// Scaled complementary error function erfcx(z) = exp(z^2) erfc(z) for complex z,
// built on the Faddeeva function w(z) = exp(-z^2) erfc(-iz).
//
// Regions (upper half-plane, w):
//   |z| <= 4                 Maclaurin series in long double
//   Im z >= 1, |z| > 4       Stieltjes continued fraction (modified Lentz)
//   Im z <  1, |z| > 4       Taylor march down from Im = 1.25 using w' = -2zw + 2i/sqrt(pi)
// Lower half-plane via w(z) = 2 exp(-z^2) - w(-z).

#include <cmath>
#include <complex>
#include <numbers>

#include "semidelta/errors.hpp"

namespace semidelta {

namespace detail {

using lcplx = std::complex<long double>;

inline constexpr long double kSqrtPiL = 1.7724538509055160272981674833411452L;

// w(z) = sum_n (iz)^n / Gamma(n/2 + 1); usable for |z| <~ 4.
inline lcplx faddeeva_series(lcplx z) {
  const lcplx iz = lcplx(0.0L, 1.0L) * z;
  lcplx power(1.0L, 0.0L);
  lcplx sum(0.0L, 0.0L);
  long double gam[2] = {1.0L, 0.8862269254527580136490837416706L};  // Gamma(1), Gamma(3/2)
  int quiet = 0;
  for (int n = 0; n < 260; ++n) {
    if (n >= 2) gam[n & 1] *= 0.5L * n;
    const lcplx term = power / gam[n & 1];
    sum += term;
    power *= iz;
    if (std::abs(term) < 1e-22L * std::abs(sum)) {
      if (++quiet >= 3) break;
    } else {
      quiet = 0;
    }
  }
  return sum;
}

// w(z) = (i/sqrt(pi)) / (z - (1/2)/(z - 1/(z - (3/2)/(z - ...)))), Im z >= 0, |z| large.
inline lcplx faddeeva_cf(lcplx z) {
  const long double tiny = 1e-280L;
  lcplx f = z, C = z, D(0.0L, 0.0L);
  for (int n = 1; n <= 400; ++n) {
    const long double a = -0.5L * n;
    D = z + a * D;
    if (std::abs(D) < tiny) D = tiny;
    C = z + a / C;
    if (std::abs(C) < tiny) C = tiny;
    D = 1.0L / D;
    const lcplx delta = C * D;
    f *= delta;
    if (std::abs(delta - 1.0L) < 1e-19L) break;
  }
  return lcplx(0.0L, 1.0L) / (kSqrtPiL * f);
}

inline lcplx faddeeva_upper(lcplx z);

// March w from z0 (where it is known) to z1 by Taylor steps of the ODE
// w' = -2 z w + 2i/sqrt(pi); coefficient recurrence c_{k+1} = -(2 z c_k + 2 c_{k-1})/(k+1).
inline lcplx faddeeva_taylor_march(lcplx z0, lcplx w0, lcplx z1, int steps) {
  lcplx zc = z0, wc = w0;
  for (int s = 1; s <= steps; ++s) {
    const lcplx zt = z0 + (z1 - z0) * (static_cast<long double>(s) / steps);
    const lcplx d = zt - zc;
    lcplx ckm1 = wc;
    lcplx ck = -2.0L * zc * wc + lcplx(0.0L, 2.0L / kSqrtPiL);
    lcplx acc = ckm1 + ck * d;
    lcplx dp = d;
    for (int k = 1; k < 80; ++k) {
      const lcplx next = -(2.0L * zc * ck + 2.0L * ckm1) / static_cast<long double>(k + 1);
      ckm1 = ck;
      ck = next;
      dp *= d;
      const lcplx term = ck * dp;
      acc += term;
      if (std::abs(term) < 1e-22L * std::abs(acc)) break;
    }
    wc = acc;
    zc = zt;
  }
  return wc;
}

inline lcplx faddeeva_upper(lcplx z) {
  const long double az = std::abs(z);
  if (az <= 4.0L) return faddeeva_series(z);
  if (z.imag() >= 1.0L) return faddeeva_cf(z);
  const lcplx anchor(z.real(), 1.25L);
  return faddeeva_taylor_march(anchor, faddeeva_cf(anchor), z, 3);
}

}  // namespace detail

// Faddeeva function w(z), all quadrants.
inline cplx faddeeva_w(cplx z) {
  detail::lcplx zl(z.real(), z.imag());
  detail::lcplx w;
  if (zl.imag() >= 0.0L) {
    w = detail::faddeeva_upper(zl);
  } else {
    w = 2.0L * std::exp(-zl * zl) - detail::faddeeva_upper(-zl);
  }
  return cplx(static_cast<double>(w.real()), static_cast<double>(w.imag()));
}

// exp(z^2) erfc(z).  For Re z < 0 this grows like 2 exp(z^2); callers that fold
// exponents should use the identity scaled_erfc(z) = 2 exp(z^2) - scaled_erfc(-z)
// themselves when overflow is a concern.
inline cplx scaled_erfc(cplx z) {
  if (z.real() >= 0.0) return faddeeva_w(cplx(-z.imag(), z.real()));  // w(iz)
  const cplx ez2 = std::exp(z * z);
  return 2.0 * ez2 - faddeeva_w(cplx(z.imag(), -z.real()));  // w(i(-z))
}

}  // namespace semidelta
