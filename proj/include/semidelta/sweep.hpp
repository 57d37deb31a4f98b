#pragma once

// Batch front end: flat key/value config, scenario/sweep pipelines, CSV tables
// (17 significant digits, RFC-4180 style) and a gnuplot script.  Sweep tuples
// run on a thread pool with results written to preallocated slots, so the CSV
// bytes do not depend on the thread count.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "semidelta/comparator.hpp"
#include "semidelta/oracle.hpp"
#include "semidelta/parallel.hpp"

namespace semidelta {

struct ConfigError : std::runtime_error {
  ConfigError(const std::string& msg, int line)
      : std::runtime_error("config line " + std::to_string(line) + ": " + msg) {}
};

struct Config {
  // [physics]
  double hbar = 0.1, mass = 1.0, alpha = 1.0, sigma0 = 1.0;
  // [state]
  double q = -2.0, p = 1.0;
  // [time]
  std::vector<double> t_list{4.0};
  // [sweep]
  std::vector<double> hbar_list;
  double lambda = 0.1;
  double c0 = 2.5;
  // [numerics]
  double rel_tol = 1e-8;
  double n_sd = 14.0;
  double dx = 2e-3, dt = 2e-4, box = 20.0;
  // [suite]
  std::string suite = "theorem1";

  QuadratureSpec quadrature() const {
    QuadratureSpec s;
    s.relative_tol = rel_tol;
    return s;
  }
  CoherentParams params(double h) const {
    return CoherentParams::standard({h, mass}, sigma0, q, p);
  }
  DeltaCoupling coupling(double h) const { return {alpha, {h, mass}}; }
  std::vector<double> sweep_hbars() const {
    return hbar_list.empty() ? std::vector<double>{hbar} : hbar_list;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<double> parse_doubles(const std::string& v, int line) {
  std::vector<double> out;
  std::istringstream iss(v);
  std::string tok;
  while (iss >> tok) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("not a number: '" + tok + "'", line);
    }
  }
  if (out.empty()) throw ConfigError("expected at least one number", line);
  return out;
}

}  // namespace detail

inline Config parse_config(std::istream& in) {
  Config cfg;
  std::string line, section;
  int lineno = 0;
  bool saw_suite = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string::size_type hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("unterminated section header", lineno);
      section = t.substr(1, t.size() - 2);
      continue;
    }
    const std::string::size_type eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", lineno);
    const std::string key = detail::trim(t.substr(0, eq));
    const std::string val = detail::trim(t.substr(eq + 1));
    auto num = [&] {
      const std::vector<double> v = detail::parse_doubles(val, lineno);
      if (v.size() != 1) throw ConfigError("expected a single number for " + key, lineno);
      return v[0];
    };
    if (section == "physics") {
      if (key == "hbar") cfg.hbar = num();
      else if (key == "mass") cfg.mass = num();
      else if (key == "alpha") cfg.alpha = num();
      else if (key == "sigma0") cfg.sigma0 = num();
      else throw ConfigError("unknown [physics] key: " + key, lineno);
    } else if (section == "state") {
      if (key == "q") cfg.q = num();
      else if (key == "p") cfg.p = num();
      else throw ConfigError("unknown [state] key: " + key, lineno);
    } else if (section == "time") {
      if (key == "t_list") cfg.t_list = detail::parse_doubles(val, lineno);
      else if (key == "t_range") {
        const std::vector<double> r = detail::parse_doubles(val, lineno);
        if (r.size() != 3 || r[2] < 2) throw ConfigError("t_range = start stop count", lineno);
        cfg.t_list.clear();
        const int count = static_cast<int>(r[2]);
        for (int i = 0; i < count; ++i)
          cfg.t_list.push_back(r[0] + (r[1] - r[0]) * i / (count - 1));
      } else throw ConfigError("unknown [time] key: " + key, lineno);
    } else if (section == "sweep") {
      if (key == "hbar_list") cfg.hbar_list = detail::parse_doubles(val, lineno);
      else if (key == "lambda") cfg.lambda = num();
      else if (key == "c0") cfg.c0 = num();
      else throw ConfigError("unknown [sweep] key: " + key, lineno);
    } else if (section == "numerics") {
      if (key == "rel_tol") cfg.rel_tol = num();
      else if (key == "n_sd") cfg.n_sd = num();
      else if (key == "dx") cfg.dx = num();
      else if (key == "dt") cfg.dt = num();
      else if (key == "box") cfg.box = num();
      else throw ConfigError("unknown [numerics] key: " + key, lineno);
    } else if (section == "suite") {
      if (key == "name") {
        cfg.suite = val;
        saw_suite = true;
      } else throw ConfigError("unknown [suite] key: " + key, lineno);
    } else {
      throw ConfigError("unknown section [" + section + "]", lineno);
    }
  }
  static const char* suites[] = {"theorem1", "theorem2", "dirichlet",
                                 "lemmas",   "oracle",   "all"};
  if (std::find(std::begin(suites), std::end(suites), cfg.suite) == std::end(suites))
    throw ConfigError("unknown suite '" + cfg.suite + "'", 0);
  if (cfg.q * cfg.p == 0.0)
    throw ConfigError(
        "q*p must be nonzero: the standing assumption excludes states with q=0 "
        "(the support of the interaction) or p=0 (no classical motion)",
        0);
  if (cfg.hbar <= 0.0 || cfg.mass <= 0.0 || cfg.sigma0 <= 0.0 || cfg.alpha == 0.0)
    throw ConfigError("require hbar>0, mass>0, sigma0>0, alpha!=0", 0);
  for (double h : cfg.hbar_list)
    if (h <= 0.0) throw ConfigError("hbar_list entries must be positive", 0);
  (void)saw_suite;
  return cfg;
}

inline Config parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  return parse_config(f);
}

// ---------------------------------------------------------------------------
// CSV output
// ---------------------------------------------------------------------------

inline std::string csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct ErrorRow {
  double hbar, m, alpha, sigma0, q, p, t;
  double lhs;
  std::vector<RhsTerm> rhs;
  int fitted_C_flag;  // 1 if the row enters the fitted-constant / slope fits
  std::string quantity;
};

inline void write_errors_csv(const std::filesystem::path& path,
                             const std::vector<ErrorRow>& rows) {
  std::ofstream f(path, std::ios::binary);
  f << "hbar,m,alpha,sigma0,q,p,t,lhs";
  if (!rows.empty())
    for (const auto& term : rows.front().rhs) f << "," << term.name;
  f << ",fitted_C_flag,quantity\r\n";
  for (const auto& r : rows) {
    f << csv_double(r.hbar) << "," << csv_double(r.m) << "," << csv_double(r.alpha) << ","
      << csv_double(r.sigma0) << "," << csv_double(r.q) << "," << csv_double(r.p) << ","
      << csv_double(r.t) << "," << csv_double(r.lhs);
    for (const auto& term : r.rhs) f << "," << csv_double(term.value);
    f << "," << r.fitted_C_flag << "," << r.quantity << "\r\n";
  }
}

struct SummaryRow {
  std::string suite, quantity;
  double slope = 0.0, intercept = 0.0, r2 = 0.0, fitted_C = 0.0;
  int n_points = 0, n_excluded = 0;
};

inline void write_summary_csv(const std::filesystem::path& path,
                              const std::vector<SummaryRow>& rows) {
  std::ofstream f(path, std::ios::binary);
  f << "suite,quantity,slope,intercept,r2,fitted_C,n_points,n_excluded\r\n";
  for (const auto& r : rows) {
    f << r.suite << "," << r.quantity << "," << csv_double(r.slope) << ","
      << csv_double(r.intercept) << "," << csv_double(r.r2) << ","
      << csv_double(r.fitted_C) << "," << r.n_points << "," << r.n_excluded << "\r\n";
  }
}

inline void write_plot_script(const std::filesystem::path& path,
                              const std::string& suite) {
  std::ofstream f(path, std::ios::binary);
  f << "# gnuplot script consuming errors.csv / sweep_summary.csv\n"
    << "set datafile separator ','\n"
    << "set logscale xy\n"
    << "set key left top\n"
    << "set xlabel 'hbar'\n"
    << "set ylabel 'L2 error'\n"
    << "set title '" << suite << " sweep'\n"
    << "plot 'errors.csv' every ::1 using 1:8 with points pt 7 title 'lhs'\n"
    << "pause -1\n";
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

struct SuiteVerdict {
  std::string name;
  bool pass;
  std::string detail;
};

struct SuiteResult {
  std::vector<ErrorRow> rows;
  std::vector<SummaryRow> summary;
  std::vector<SuiteVerdict> verdicts;
};

namespace detail {

inline std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Deterministic uniform doubles independent of the standard library's
// distribution implementations.
struct SplitMix {
  std::uint64_t state;
  explicit SplitMix(std::uint64_t seed) : state(seed) {}
  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  double sign() { return (next_u64() & 1u) ? 1.0 : -1.0; }
};

}  // namespace detail

inline SuiteResult run_theorem1_suite(const Config& cfg, int threads) {
  const std::vector<double> hbars = cfg.sweep_hbars();
  const QuadratureSpec spec = cfg.quadrature();
  const double l1 = cfg.lambda, l2 = 2.0 / 3.0 * cfg.lambda;  // lambda1 = 1.5 lambda2
  struct Cell {
    double lhs;
    RhsTerms rhs;
    bool included;
  };
  std::vector<Cell> cells(hbars.size() * cfg.t_list.size());
  parallel_for(
      cells.size(),
      [&](std::size_t idx) {
        const double h = hbars[idx / cfg.t_list.size()];
        const double t = cfg.t_list[idx % cfg.t_list.size()];
        const CoherentParams cp = cfg.params(h);
        const DeltaCoupling dc = cfg.coupling(h);
        Cell c;
        c.lhs = theorem1_error(cp, t, dc, spec, 1);
        c.rhs = theorem1_rhs(cp, t, dc, l1, l2);
        c.included = collision_exclusion(cp, t, dc, cfg.lambda, cfg.c0);
        cells[idx] = std::move(c);
      },
      threads);

  SuiteResult out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const double h = hbars[i / cfg.t_list.size()];
    const double t = cfg.t_list[i % cfg.t_list.size()];
    out.rows.push_back({h, cfg.mass, cfg.alpha, cfg.sigma0, cfg.q, cfg.p, t, cells[i].lhs,
                        cells[i].rhs.terms, cells[i].included ? 1 : 0, "theorem1"});
  }
  if (hbars.size() >= 4) {
    for (std::size_t j = 0; j < cfg.t_list.size(); ++j) {
      const double t = cfg.t_list[j];
      std::vector<std::pair<double, double>> pts, pts_regime, ratio;
      int excluded = 0;
      for (std::size_t i = 0; i < hbars.size(); ++i) {
        const Cell& c = cells[i * cfg.t_list.size() + j];
        pts.emplace_back(hbars[i], c.lhs);
        if (c.included) {
          pts_regime.emplace_back(hbars[i], c.lhs);
          ratio.emplace_back(c.lhs, c.rhs.sum());
        } else {
          ++excluded;
        }
      }
      const FitResult fit = scaling_fit(pts);
      const double cfit = fitted_constant(ratio);
      out.summary.push_back({"theorem1", "t=" + detail::short_num(t), fit.slope,
                             fit.intercept, fit.r2, cfit, fit.used, excluded});
      const bool slope_ok = fit.slope >= 1.3 && fit.slope <= 1.7 && fit.r2 >= 0.98;
      out.verdicts.push_back({"theorem1 slope t=" + detail::short_num(t), slope_ok,
                              "slope=" + detail::short_num(fit.slope) +
                                  " r2=" + detail::short_num(fit.r2) +
                                  " excluded=" + std::to_string(excluded)});
      if (pts_regime.size() >= 4) {
        const FitResult rf = scaling_fit(pts_regime);
        out.summary.push_back({"theorem1", "t=" + detail::short_num(t) + "_regime",
                               rf.slope, rf.intercept, rf.r2, cfit, rf.used, excluded});
      }
    }
  }
  return out;
}

inline SuiteResult run_dirichlet_suite(const Config& cfg, int threads) {
  const std::vector<double> hbars = cfg.sweep_hbars();
  const QuadratureSpec spec = cfg.quadrature();
  struct Cell {
    double gap, theorem1_lhs, lower;
  };
  std::vector<Cell> cells(hbars.size() * cfg.t_list.size());
  parallel_for(
      cells.size(),
      [&](std::size_t idx) {
        const double h = hbars[idx / cfg.t_list.size()];
        const double t = cfg.t_list[idx % cfg.t_list.size()];
        const CoherentParams cp = cfg.params(h);
        const DeltaCoupling dc = cfg.coupling(h);
        Cell c;
        c.gap = dirichlet_gap(cp, t, dc, spec, 1);
        c.theorem1_lhs = theorem1_error(cp, t, dc, spec, 1);
        c.lower = h * std::abs(cfg.p) / (cfg.mass * std::abs(cfg.alpha));
        cells[idx] = c;
      },
      threads);
  SuiteResult out;
  bool dominance = true;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const double h = hbars[i / cfg.t_list.size()];
    const double t = cfg.t_list[i % cfg.t_list.size()];
    out.rows.push_back({h, cfg.mass, cfg.alpha, cfg.sigma0, cfg.q, cfg.p, t, cells[i].gap,
                        {{"rhs_dirichlet_lower", cells[i].lower},
                         {"rhs_theorem1_lhs", cells[i].theorem1_lhs}},
                        1, "dirichlet"});
    dominance = dominance && cells[i].gap > cells[i].theorem1_lhs;
  }
  if (hbars.size() >= 4) {
    for (std::size_t j = 0; j < cfg.t_list.size(); ++j) {
      const double t = cfg.t_list[j];
      std::vector<std::pair<double, double>> pts, ratio;
      for (std::size_t i = 0; i < hbars.size(); ++i) {
        pts.emplace_back(hbars[i], cells[i * cfg.t_list.size() + j].gap);
        ratio.emplace_back(cells[i * cfg.t_list.size() + j].gap,
                           cells[i * cfg.t_list.size() + j].lower);
      }
      const FitResult fit = scaling_fit(pts);
      out.summary.push_back({"dirichlet", "t=" + detail::short_num(t), fit.slope,
                             fit.intercept, fit.r2, fitted_constant(ratio), fit.used, 0});
      const bool ok = fit.slope >= 0.85 && fit.slope <= 1.15 && dominance;
      out.verdicts.push_back({"dirichlet slope t=" + detail::short_num(t), ok,
                              "slope=" + detail::short_num(fit.slope) +
                                  " dominance=" + (dominance ? "yes" : "no")});
    }
  }
  return out;
}

inline SuiteResult run_theorem2_suite(const Config& cfg, int threads) {
  const std::vector<double> hbars = cfg.sweep_hbars();
  const QuadratureSpec spec = cfg.quadrature();
  struct Cell {
    double wave_plus, wave_minus, scat, uubar;
    RhsTerms rhs_wave, rhs_scat;
  };
  std::vector<Cell> cells(hbars.size());
  parallel_for(
      cells.size(),
      [&](std::size_t i) {
        const double h = hbars[i];
        const CoherentParams cp = cfg.params(h);
        const DeltaCoupling dc = cfg.coupling(h);
        Cell c;
        c.wave_plus = wave_error(cp, +1, dc, spec, 1);
        c.wave_minus = wave_error(cp, -1, dc, spec, 1);
        c.scat = scattering_error(cp, dc, spec, 1);
        c.uubar = double_underline_h(cp, dc);
        c.rhs_wave = theorem2_wave_rhs(cp, dc, cfg.lambda);
        c.rhs_scat = theorem2_scattering_rhs(cp, dc, cfg.lambda);
        cells[i] = std::move(c);
      },
      threads);
  SuiteResult out;
  // the sign whose classical correction is active for this (q, p)
  const int active_sign = (cfg.q * cfg.p < 0.0) ? +1 : -1;
  std::vector<std::pair<double, double>> wave_pts, scat_pts, wave_ratio, scat_ratio;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    auto wr = c.rhs_wave.terms;
    out.rows.push_back({hbars[i], cfg.mass, cfg.alpha, cfg.sigma0, cfg.q, cfg.p, 0.0,
                        c.wave_plus, wr, active_sign == +1 ? 1 : 0, "wave_plus"});
    out.rows.push_back({hbars[i], cfg.mass, cfg.alpha, cfg.sigma0, cfg.q, cfg.p, 0.0,
                        c.wave_minus, wr, active_sign == -1 ? 1 : 0, "wave_minus"});
    out.rows.push_back({hbars[i], cfg.mass, cfg.alpha, cfg.sigma0, cfg.q, cfg.p, 0.0,
                        c.scat, c.rhs_scat.terms, 1, "scattering"});
    const double wave_active = active_sign == +1 ? c.wave_plus : c.wave_minus;
    wave_pts.emplace_back(c.uubar, wave_active);
    scat_pts.emplace_back(c.uubar, c.scat);
    wave_ratio.emplace_back(c.wave_plus, c.rhs_wave.sum());
    wave_ratio.emplace_back(c.wave_minus, c.rhs_wave.sum());
    scat_ratio.emplace_back(c.scat, c.rhs_scat.sum());
  }
  if (hbars.size() >= 4) {
    const FitResult wf = scaling_fit(wave_pts);
    const FitResult sf = scaling_fit(scat_pts);
    out.summary.push_back({"theorem2", "wave_active", wf.slope, wf.intercept, wf.r2,
                           fitted_constant(wave_ratio), wf.used, 0});
    out.summary.push_back({"theorem2", "scattering", sf.slope, sf.intercept, sf.r2,
                           fitted_constant(scat_ratio), sf.used, 0});
    const bool ok = wf.slope >= 1.3 && wf.slope <= 1.7 && sf.slope >= 1.3 &&
                    sf.slope <= 1.7;
    out.verdicts.push_back({"theorem2 slopes", ok,
                            "wave=" + detail::short_num(wf.slope) +
                                " scattering=" + detail::short_num(sf.slope)});
  }
  return out;
}

inline SuiteResult run_lemmas_suite(const Config& cfg, int threads, int n_draws = 20) {
  const QuadratureSpec spec = cfg.quadrature();
  struct Draw {
    double hbar, sigma0, q, p, alpha, t;
  };
  std::vector<Draw> draws;
  detail::SplitMix rng(0x5eed5eedULL);
  for (int i = 0; i < n_draws; ++i) {
    Draw d;
    d.hbar = rng.uniform(0.03, 0.25);
    d.sigma0 = rng.uniform(0.8, 1.3);
    d.q = rng.sign() * rng.uniform(1.2, 2.5);
    d.p = rng.sign() * rng.uniform(0.6, 1.6);
    d.alpha = rng.sign() * rng.uniform(0.5, 2.0);
    d.t = rng.uniform(0.3, 4.0);
    draws.push_back(d);
  }
  struct Cell {
    std::vector<std::pair<std::string, std::pair<double, double>>> entries;  // name -> (lhs, rhs)
  };
  std::vector<Cell> cells(draws.size());
  parallel_for(
      draws.size(),
      [&](std::size_t i) {
        const Draw& d = draws[i];
        const CoherentParams cp = CoherentParams::standard({d.hbar, cfg.mass}, d.sigma0, d.q, d.p);
        const DeltaCoupling dc{d.alpha, {d.hbar, cfg.mass}};
        Cell c;
        const double lam = cfg.lambda;
        const double hbar = d.hbar, m = cfg.mass;
        const double sb = std::abs(cp.sigma_breve), s = std::abs(cp.sigma);
        const double scale23 = std::pow(m * std::abs(d.alpha) / sb, 2.0 / 3.0);
        const double f_rhs = std::pow(hbar / scale23, 1.5 - lam) +
                             std::exp(-0.5 * std::pow(scale23 / hbar, 2.0 * lam));
        // || F_pm,t - R_pm(p/hbar) free || via the Plancherel identity
        const ReflectionPair R0 = reflection_coefficients(d.p / hbar, dc);
        const auto [klo, khi] = detail::envelope_window(cp);
        const auto fgap = [&](bool plus) {
          const auto f = [&](double k) {
            const ReflectionPair R = reflection_coefficients(k, dc);
            const cplx dr = (plus ? R.plus - R0.plus : R.minus - R0.minus);
            return cplx(std::norm(dr) * std::norm(coherent_state_fourier(cp, k)), 0.0);
          };
          return std::sqrt(integrate_or_throw(f, klo, khi, spec).real());
        };
        c.entries.push_back({"f_gap_plus", {fgap(true), f_rhs}});
        c.entries.push_back({"f_gap_minus", {fgap(false), f_rhs}});

        const WaveFunctionGrid grid = comparison_grid(cp, d.t);
        WaveFunctionGrid e1g = grid;
        e1g.values = e1_values(cp, d.t, dc, grid.xs, spec, 1);
        const double e1_rhs = std::exp(-d.q * d.q / (4.0 * hbar * s * s));
        c.entries.push_back({"e1_norm", {l2_norm(e1g), e1_rhs}});

        WaveFunctionGrid e2g = grid;
        e2g.values = e2_values(cp, d.t, dc, grid.xs, spec, 1);
        const double mom = std::exp(-d.p * d.p / (hbar * sb * sb));
        const double e2_rhs = mom * (std::pow(hbar / scale23, 1.5 - 1.5 * lam) +
                                     std::exp(-0.5 * std::pow(scale23 / hbar, 2.0 * lam)));
        c.entries.push_back({"e2_norm", {l2_norm(e2g), e2_rhs}});

        for (int sign : {+1, -1}) {
          WaveFunctionGrid e3g = grid;
          e3g.values = e3_values(cp, sign, dc, grid.xs, spec, 1);
          c.entries.push_back({sign > 0 ? "e3_plus_norm" : "e3_minus_norm",
                               {l2_norm(e3g), mom}});
        }

        const double pa = std::abs(bound_state_overlap(cp, dc));
        const double pa_rhs = std::exp(-m * std::abs(d.alpha) * std::abs(d.q) /
                                       (8.0 * hbar * hbar)) +
                              std::exp(-d.q * d.q / (8.0 * hbar * s * s));
        c.entries.push_back({"p_alpha_norm", {pa, pa_rhs}});

        const ReflectedStateEstimates rs = reflected_state_estimates(cp);
        c.entries.push_back({"gap_even", {rs.gap_even, rs.bound}});
        c.entries.push_back({"gap_mirror", {rs.gap_mirror, rs.bound}});
        cells[i] = std::move(c);
      },
      threads);
  SuiteResult out;
  double cfit = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Draw& d = draws[i];
    for (const auto& [name, lr] : cells[i].entries) {
      out.rows.push_back({d.hbar, cfg.mass, d.alpha, d.sigma0, d.q, d.p, d.t, lr.first,
                          {{"rhs_bound", lr.second}}, 1, name});
      if (lr.second > 0.0) cfit = std::max(cfit, lr.first / lr.second);
    }
  }
  out.summary.push_back(
      {"lemmas", "all_bounds", 0.0, 0.0, 0.0, cfit, static_cast<int>(out.rows.size()), 0});
  out.verdicts.push_back({"lemma bound suite", cfit <= 10.0 && cfit > 0.0,
                          "fitted_C=" + detail::short_num(cfit)});
  return out;
}

inline SuiteResult run_oracle_suite(const Config& cfg, int threads) {
  const QuadratureSpec spec = cfg.quadrature();
  struct Cell {
    double dist, drift;
  };
  std::vector<Cell> cells(cfg.t_list.size());
  parallel_for(
      cells.size(),
      [&](std::size_t i) {
        const double t = cfg.t_list[i];
        const CoherentParams cp = cfg.params(cfg.hbar);
        const DeltaCoupling dc = cfg.coupling(cfg.hbar);
        const CrankNicolsonResult cn =
            crank_nicolson_delta(cp, t, cfg.alpha, cfg.dx, cfg.dt, cfg.box);
        const Window w = packet_window(cp, t);
        const double xmax = std::abs(w.center) + w.halfwidth;
        const WaveFunctionGrid ref = restrict_grid(cn.grid, -xmax, xmax, 4);
        WaveFunctionGrid spectral = ref;
        spectral = quantum_evolve(cp, t, dc, std::move(spectral), spec, 1);
        cells[i] = {l2_distance(spectral, ref), cn.norm_drift};
      },
      threads);
  SuiteResult out;
  bool all_ok = true;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out.rows.push_back({cfg.hbar, cfg.mass, cfg.alpha, cfg.sigma0, cfg.q, cfg.p,
                        cfg.t_list[i], cells[i].dist,
                        {{"rhs_oracle_tol", 1e-3}, {"rhs_norm_drift", cells[i].drift}},
                        1, "oracle"});
    all_ok = all_ok && cells[i].dist <= 1e-3;
  }
  out.verdicts.push_back({"oracle equivalence", all_ok,
                          std::to_string(cells.size()) + " time points"});
  return out;
}

inline SuiteResult run_suite(const Config& cfg, const std::string& suite, int threads) {
  if (suite == "theorem1") return run_theorem1_suite(cfg, threads);
  if (suite == "theorem2") return run_theorem2_suite(cfg, threads);
  if (suite == "dirichlet") return run_dirichlet_suite(cfg, threads);
  if (suite == "lemmas") return run_lemmas_suite(cfg, threads);
  if (suite == "oracle") return run_oracle_suite(cfg, threads);
  throw std::runtime_error("unknown suite: " + suite);
}

}  // namespace semidelta
