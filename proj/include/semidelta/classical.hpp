#pragma once

// The free transport group, the singular group generated by L_beta, its
// resolvent, the classical wave/scattering operators and the quasi-classical
// approximant of the quantum flow.  Heaviside convention: theta(0) = 0; an
// evaluation landing exactly on a discontinuity set can be flagged through an
// optional BoundaryNote.

#include <cmath>
#include <complex>
#include <functional>

#include "semidelta/coupling.hpp"
#include "semidelta/errors.hpp"
#include "semidelta/grid.hpp"
#include "semidelta/quadrature.hpp"
#include "semidelta/states.hpp"

namespace semidelta {

using PhaseSpaceFunction = std::function<cplx(double, double)>;

struct BoundaryNote {
  bool hit = false;
};

// (e^{-i t L0} f)(q, p) = f(q - p t / m, p)
inline PhaseSpaceFunction free_transport(PhaseSpaceFunction f, double t,
                                         double mass = 1.0) {
  return [f = std::move(f), t, mass](double q, double p) {
    return f(q - p * t / mass, p);
  };
}

// (e^{-i t L_beta} f)(q, p), Proposition-form:
//   free part - theta(t q p) theta(|p t|/m - |q|) / (1 + sgn(t) 2i|p|/(m beta)) * (e^{-itL0} f_ev)(q, p)
inline cplx singular_transport_at(const PhaseSpaceFunction& f, double t,
                                  const BetaCoupling& beta, double mass, double q,
                                  double p, BoundaryNote* note = nullptr) {
  const double qs = q - p * t / mass;
  const cplx free_val = f(qs, p);
  const double arg1 = t * q * p;
  const double arg2 = std::abs(p * t) / mass - std::abs(q);
  if (note && (arg1 == 0.0 || arg2 == 0.0)) note->hit = true;
  const double gate = heaviside(arg1) * heaviside(arg2);
  if (gate == 0.0) return free_val;
  const cplx divisor(1.0, sgn(t) * beta.momentum_ratio(p, mass));
  const cplx f_ev = f(qs, p) + f(-qs, -p);
  return free_val - gate / divisor * f_ev;
}

inline PhaseSpaceFunction singular_transport(PhaseSpaceFunction f, double t,
                                             BetaCoupling beta, double mass = 1.0) {
  return [f = std::move(f), t, beta, mass](double q, double p) {
    return singular_transport_at(f, t, beta, mass, q, p);
  };
}

struct NormDefect {
  double defect;           // || e^{-itL_beta} f ||^2 - || f ||^2
  double correction_mass;  // integral of |correction|^2 over the gated wedge
};

// The norm change of the singular group concentrates on the wedge
// {t q p > 0, |q| < |p t|/m}; parameterized by q = u p t / m, u in (0,1), the
// integrand is jointly smooth away from p = 0, so a fixed tensor rule split at
// p = 0 integrates it to high accuracy.
inline NormDefect singular_transport_norm_defect(const PhaseSpaceFunction& f, double t,
                                                 const BetaCoupling& beta, double mass,
                                                 double pmax, int u_panels = 96,
                                                 int p_panels = 96, int order = 16) {
  if (t == 0.0) return {0.0, 0.0};
  const GaussRule& rule = gauss_legendre(order);
  double defect = 0.0, corr_mass = 0.0;
  const double hu = 1.0 / u_panels;
  const double hp = pmax / p_panels;  // per half-axis, split at p = 0
  for (int half = 0; half < 2; ++half) {
    for (int ip = 0; ip < p_panels; ++ip) {
      const double pmid = (half == 0 ? -1.0 : 1.0) * (ip + 0.5) * hp;
      for (int gi = 0; gi < order; ++gi) {
        const double p = pmid + 0.5 * hp * rule.nodes[gi];
        const double shift = p * t / mass;
        const cplx divisor(1.0, sgn(t) * beta.momentum_ratio(p, mass));
        const double wp = 0.5 * hp * rule.weights[gi] * std::abs(shift);
        double du_defect = 0.0, du_mass = 0.0;
        for (int iu = 0; iu < u_panels; ++iu) {
          const double umid = (iu + 0.5) * hu;
          for (int gj = 0; gj < order; ++gj) {
            const double u = umid + 0.5 * hu * rule.nodes[gj];
            const cplx a = f((u - 1.0) * shift, p);
            const cplx b = f((1.0 - u) * shift, -p);
            const cplx corr = (a + b) / divisor;
            const double wu = 0.5 * hu * rule.weights[gj];
            du_mass += wu * std::norm(corr);
            du_defect += wu * (std::norm(corr) - 2.0 * (a * std::conj(corr)).real());
          }
        }
        defect += wp * du_defect;
        corr_mass += wp * du_mass;
      }
    }
  }
  return {defect, corr_mass};
}

// Resolvent point z with Im z != 0.
struct ResolventPoint {
  cplx z;
  void validate() const {
    if (z.imag() == 0.0) throw ParameterError("ResolventPoint: Im z must be nonzero");
  }
};

// g_z(q, p) = theta(q p Im z) sgn(Im z) (i m / |p|) exp(i m z q / p)
inline cplx free_resolvent_kernel(double q, double p, const ResolventPoint& zp,
                                  double mass = 1.0) {
  zp.validate();
  if (p == 0.0) throw ParameterError("free_resolvent_kernel: p must be nonzero");
  const double s = sgn(zp.z.imag());
  if (heaviside(q * p * zp.z.imag()) == 0.0) return cplx(0.0, 0.0);
  return s * cplx(0.0, mass / std::abs(p)) * std::exp(cplx(0.0, 1.0) * mass * zp.z * (q / p));
}

namespace detail {

// (R0_z f)(q, p) = Int g_z(q - q', p) f(q', p) dq' ; the theta gate restricts the
// integral to one half-line with exponential damping rate m |Im z| / |p|.  The
// half-line is integrated on a geometric ladder of segments so that a narrow
// packet far from q is still resolved without over-refining the empty tail.
inline cplx free_resolvent_apply(const PhaseSpaceFunction& f, const ResolventPoint& zp,
                                 double q, double p, double mass,
                                 const QuadratureSpec& spec, double tail_extent) {
  const double dir = sgn(p * zp.z.imag());  // q' = q - dir * s, s >= 0
  const double rate = mass * std::abs(zp.z.imag()) / std::abs(p);
  const double s_max = 46.0 / rate + tail_extent;
  const double s0 = sgn(zp.z.imag());
  const cplx pref = s0 * cplx(0.0, mass / std::abs(p));
  const cplx izm = cplx(0.0, 1.0) * mass * zp.z / p;
  const auto integrand = [&](double s) {
    return std::exp(izm * (dir * s)) * f(q - dir * s, p);
  };
  // Segment edges: geometric ladder plus the point where q' = q - dir s crosses
  // the origin (f may jump there, e.g. when f is itself a resolvent image).
  std::vector<double> edges{0.0};
  const double origin_cross = dir * q;
  for (double hi = 2.0; edges.back() < s_max; hi *= 4.0) {
    const double top = std::min(hi, s_max);
    if (origin_cross > edges.back() && origin_cross < top)
      edges.push_back(origin_cross);
    edges.push_back(top);
  }
  cplx acc(0.0, 0.0);
  int quiet = 0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const cplx seg = integrate_or_throw(integrand, edges[i], edges[i + 1], spec);
    acc += seg;
    // two consecutive below-floor segments: the exponential tail is spent
    if (std::abs(seg) < spec.absolute_floor) {
      if (++quiet >= 2) break;
    } else {
      quiet = 0;
    }
  }
  return pref * acc;
}

}  // namespace detail

// (R^beta_z f)(q, p) = (R0_z f)(q, p) + g_z(q, p) [Pi gamma R0_z f](p) / m^beta_z(p),
// m^beta_z(p) = 1/beta - sgn(Im z) i m / (2 |p|).
inline cplx apply_resolvent_beta(const PhaseSpaceFunction& f, const ResolventPoint& zp,
                                 const BetaCoupling& beta, double q, double p,
                                 double mass = 1.0, const QuadratureSpec& spec = {},
                                 double tail_extent = 60.0) {
  zp.validate();
  if (p == 0.0) throw ParameterError("apply_resolvent_beta: p must be nonzero");
  const cplx r0 = detail::free_resolvent_apply(f, zp, q, p, mass, spec, tail_extent);
  const cplx g = free_resolvent_kernel(q, p, zp, mass);
  if (g == cplx(0.0, 0.0)) return r0;
  const cplx trace_p = detail::free_resolvent_apply(f, zp, 0.0, p, mass, spec, tail_extent);
  const cplx trace_m = detail::free_resolvent_apply(f, zp, 0.0, -p, mass, spec, tail_extent);
  const double inv_beta = beta.is_infinite ? 0.0 : 1.0 / beta.beta;
  const cplx multiplier =
      cplx(inv_beta, 0.0) - sgn(zp.z.imag()) * cplx(0.0, mass / (2.0 * std::abs(p)));
  if (std::abs(multiplier) < 1e-14)
    throw ParameterError("apply_resolvent_beta: near-singular multiplier");
  return r0 + g * 0.5 * (trace_p + trace_m) / multiplier;
}

// (W^pm_beta f)(q, p) = f(q, p) - theta(mp q p) / (1 pm 2i|p|/(m beta)) f_ev(q, p)
inline cplx classical_wave_operator_at(const PhaseSpaceFunction& f, int sign,
                                       const BetaCoupling& beta, double mass, double q,
                                       double p, BoundaryNote* note = nullptr) {
  if (note && q * p == 0.0) note->hit = true;
  const double gate = heaviside((sign >= 0 ? -1.0 : 1.0) * q * p);
  const cplx val = f(q, p);
  if (gate == 0.0) return val;
  const cplx divisor(1.0, (sign >= 0 ? 1.0 : -1.0) * beta.momentum_ratio(p, mass));
  return val - gate / divisor * (f(q, p) + f(-q, -p));
}

inline PhaseSpaceFunction classical_wave_operator(PhaseSpaceFunction f, int sign,
                                                  BetaCoupling beta, double mass = 1.0) {
  return [f = std::move(f), sign, beta, mass](double q, double p) {
    return classical_wave_operator_at(f, sign, beta, mass, q, p);
  };
}

// Breve variant (limits of e^{i t L_beta} e^{-i t L0}): conjugated divisor.
inline cplx classical_wave_operator_reverse_at(const PhaseSpaceFunction& f, int sign,
                                               const BetaCoupling& beta, double mass,
                                               double q, double p,
                                               BoundaryNote* note = nullptr) {
  if (note && q * p == 0.0) note->hit = true;
  const double gate = heaviside((sign >= 0 ? -1.0 : 1.0) * q * p);
  const cplx val = f(q, p);
  if (gate == 0.0) return val;
  const cplx divisor(1.0, (sign >= 0 ? -1.0 : 1.0) * beta.momentum_ratio(p, mass));
  return val - gate / divisor * (f(q, p) + f(-q, -p));
}

inline PhaseSpaceFunction classical_wave_operator_reverse(PhaseSpaceFunction f, int sign,
                                                          BetaCoupling beta,
                                                          double mass = 1.0) {
  return [f = std::move(f), sign, beta, mass](double q, double p) {
    return classical_wave_operator_reverse_at(f, sign, beta, mass, q, p);
  };
}

// Adjoint of W^pm (used by tests and the scattering composition).
inline cplx classical_wave_operator_adjoint_at(const PhaseSpaceFunction& f, int sign,
                                               const BetaCoupling& beta, double mass,
                                               double q, double p) {
  const double gate = heaviside((sign >= 0 ? -1.0 : 1.0) * q * p);
  const cplx val = f(q, p);
  if (gate == 0.0) return val;
  const cplx divisor(1.0, (sign >= 0 ? -1.0 : 1.0) * beta.momentum_ratio(p, mass));
  return val - gate / divisor * (f(q, p) + f(-q, -p));
}

// (S^cl_beta f)(q, p) = f(q, p) - f_ev(q, p) / (1 - 2i|p|/(m beta))
inline cplx classical_scattering_at(const PhaseSpaceFunction& f, const BetaCoupling& beta,
                                    double mass, double q, double p) {
  if (p == 0.0) throw ParameterError("classical_scattering: p must be nonzero");
  const cplx divisor(1.0, -beta.momentum_ratio(p, mass));
  return f(q, p) - (f(q, p) + f(-q, -p)) / divisor;
}

inline PhaseSpaceFunction classical_scattering(PhaseSpaceFunction f, BetaCoupling beta,
                                               double mass = 1.0) {
  return [f = std::move(f), beta, mass](double q, double p) {
    return classical_scattering_at(f, beta, mass, q, p);
  };
}

// ---------------------------------------------------------------------------
// Quasi-classical approximant: e^{i A_t / hbar} (e^{i t L_beta} phi_{sigma_t, x})(xi)
//   = free(x) + theta(-qp) theta(t - t_coll) R_-(p/hbar) [free(x) + free(-x)]
//   + theta(qp) theta(t_coll - t) R_+(p/hbar) [free(x) + free(-x)],
// with R_pm at k = p/hbar for beta = 2 alpha/hbar, and R_pm -> -1 for beta = inf.
// ---------------------------------------------------------------------------

inline cplx quasiclassical_coefficient(const CoherentParams& cp, double t,
                                       const BetaCoupling& beta,
                                       BoundaryNote* note = nullptr) {
  const double m = cp.constants.mass;
  const double shifted = t + m * cp.q / cp.p;  // t - t_coll
  if (note && (cp.q * cp.p == 0.0 || shifted == 0.0)) note->hit = true;
  const double gate_minus = heaviside(-cp.q * cp.p) * heaviside(shifted);
  const double gate_plus = heaviside(cp.q * cp.p) * heaviside(-shifted);
  if (gate_minus == 0.0 && gate_plus == 0.0) return cplx(0.0, 0.0);
  if (beta.is_infinite) return cplx(-(gate_minus + gate_plus), 0.0);
  const double ratio = beta.momentum_ratio(cp.p, m);  // 2|p| / (m beta)
  const cplx r_minus = -1.0 / cplx(1.0, -ratio);
  const cplx r_plus = -1.0 / cplx(1.0, ratio);
  return gate_minus * r_minus + gate_plus * r_plus;
}

inline cplx quasiclassical_at(const CoherentParams& cp, double t, const BetaCoupling& beta,
                              double x, BoundaryNote* note = nullptr) {
  if (cp.q * cp.p == 0.0)
    throw RegimeError("quasiclassical_at: requires q p != 0");
  const cplx coeff = quasiclassical_coefficient(cp, t, beta, note);
  const cplx fwd = free_evolved_state(cp, t, x);
  if (coeff == cplx(0.0, 0.0)) return fwd;
  return fwd + coeff * (fwd + free_evolved_state(cp, t, -x));
}

// Grid evaluation with beta = 2 alpha / hbar.
inline WaveFunctionGrid quasiclassical_approximant(const CoherentParams& cp, double t,
                                                   double alpha, WaveFunctionGrid grid) {
  const BetaCoupling beta =
      BetaCoupling::from_quantum({alpha, cp.constants});
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid.values[i] = quasiclassical_at(cp, t, beta, grid.xs[i]);
  return grid;
}

inline WaveFunctionGrid quasiclassical_dirichlet(const CoherentParams& cp, double t,
                                                 WaveFunctionGrid grid) {
  const BetaCoupling beta = BetaCoupling::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid.values[i] = quasiclassical_at(cp, t, beta, grid.xs[i]);
  return grid;
}

}  // namespace semidelta
