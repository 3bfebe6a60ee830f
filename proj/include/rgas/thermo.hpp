#pragma once

// Quenched averages for the random bosonic prime gas: free energy, energy
// and entropy densities for discrete and exponential (continuum) ensembles
// of the mode scale omega, and the term-by-term decomposition of the
// continuum energy built on the Hadamard expansion of zeta'/zeta.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rgas/errors.hpp"
#include "rgas/numkernel.hpp"
#include "rgas/quadrature.hpp"
#include "rgas/superzeta.hpp"
#include "rgas/zerofinder.hpp"

namespace rgas {

enum class EnsembleKind { discrete, continuum };

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::continuum;
  double volume = 1.0;
  std::vector<double> omegas;  // discrete: ascending, positive
  std::vector<double> masses;  // discrete: P(omega_k), sums to 1
  double lambda = 1.0;         // continuum: P(omega) = lambda e^{-lambda omega}

  static EnsembleSpec continuum(double lambda, double volume = 1.0) {
    EnsembleSpec s;
    s.kind = EnsembleKind::continuum;
    s.lambda = lambda;
    s.volume = volume;
    s.validate();
    return s;
  }

  static EnsembleSpec discrete(std::vector<double> omegas, std::vector<double> masses,
                               double volume = 1.0) {
    EnsembleSpec s;
    s.kind = EnsembleKind::discrete;
    s.omegas = std::move(omegas);
    s.masses = std::move(masses);
    s.volume = volume;
    s.validate();
    return s;
  }

  void validate() const {
    if (!(volume > 0.0)) throw DomainError("EnsembleSpec: volume must be positive");
    if (kind == EnsembleKind::continuum) {
      if (!(lambda > 0.0)) throw DomainError("EnsembleSpec: lambda must be positive");
      return;
    }
    if (omegas.empty() || omegas.size() != masses.size()) {
      throw DomainError("EnsembleSpec: omegas and masses must be non-empty and of equal length");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < omegas.size(); ++k) {
      if (!(omegas[k] > 0.0)) throw DomainError("EnsembleSpec: omegas must be positive");
      if (k > 0 && !(omegas[k] > omegas[k - 1])) {
        throw DomainError("EnsembleSpec: omegas must be strictly ascending");
      }
      if (!(masses[k] >= 0.0)) throw DomainError("EnsembleSpec: masses must be non-negative");
      total += masses[k];
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw DomainError("EnsembleSpec: masses sum to " + std::to_string(total) + ", not 1");
    }
  }
};

struct ThermoFlags {
  bool hagedorn_divergent = false;
  bool complex_branch_active = false;
};

struct ThermoPoint {
  double beta = 0.0;
  Complex f{0.0, 0.0};
  double eps = 0.0;
  double entropy = 0.0;
  ThermoFlags flags;
};

namespace detail {

inline void require_discrete(const EnsembleSpec& s, const char* who) {
  s.validate();
  if (s.kind != EnsembleKind::discrete) throw DomainError(std::string(who) + ": needs a discrete ensemble");
}

inline void require_continuum(const EnsembleSpec& s, double beta, const char* who) {
  s.validate();
  if (s.kind != EnsembleKind::continuum) {
    throw DomainError(std::string(who) + ": needs a continuum ensemble");
  }
  if (!(beta > 0.0)) throw DomainError(std::string(who) + ": beta must be positive");
}

inline void check_below_hagedorn(const EnsembleSpec& s, double beta, const char* who) {
  if (!(beta > 0.0)) throw DomainError(std::string(who) + ": beta must be positive");
  // the first copy with non-zero weight sets the threshold
  for (std::size_t k = 0; k < s.omegas.size(); ++k) {
    if (s.masses[k] == 0.0) continue;
    if (!(beta * s.omegas[k] > 1.0)) {
      throw HagedornError(std::string(who) + ": beta*omega = " + std::to_string(beta * s.omegas[k]) +
                          " <= 1, the copy omega=" + std::to_string(s.omegas[k]) +
                          " is singular");
    }
    break;
  }
}

}  // namespace detail

/// -(1/(beta V)) sum_k P_k ln zeta(omega_k beta)
inline double free_energy_discrete(const EnsembleSpec& spec, double beta) {
  detail::require_discrete(spec, "free_energy_discrete");
  detail::check_below_hagedorn(spec, beta, "free_energy_discrete");
  double acc = 0.0;
  for (std::size_t k = 0; k < spec.omegas.size(); ++k) {
    if (spec.masses[k] == 0.0) continue;
    acc += spec.masses[k] * log_zeta_principal(Complex{spec.omegas[k] * beta, 0.0}).real();
  }
  return -acc / (beta * spec.volume);
}

struct EnergyEntropy {
  double eps = 0.0;
  double entropy = 0.0;
};

/// eps = (1/V) sum_k P_k omega_k (-zeta'/zeta)(omega_k beta), entropy = beta (eps - f).
inline EnergyEntropy energy_entropy_discrete(const EnsembleSpec& spec, double beta) {
  detail::require_discrete(spec, "energy_entropy_discrete");
  detail::check_below_hagedorn(spec, beta, "energy_entropy_discrete");
  double eps = 0.0;
  for (std::size_t k = 0; k < spec.omegas.size(); ++k) {
    if (spec.masses[k] == 0.0) continue;
    const double s = spec.omegas[k] * beta;
    eps -= spec.masses[k] * spec.omegas[k] * zeta_log_derivative(Complex{s, 0.0}).real();
  }
  eps /= spec.volume;
  const double f = free_energy_discrete(spec, beta);
  return {eps, beta * (eps - f)};
}

inline ThermoPoint thermo_point_discrete(const EnsembleSpec& spec, double beta) {
  ThermoPoint p;
  p.beta = beta;
  try {
    p.f = free_energy_discrete(spec, beta);
    const auto ee = energy_entropy_discrete(spec, beta);
    p.eps = ee.eps;
    p.entropy = ee.entropy;
  } catch (const HagedornError&) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    p.f = {nan, nan};
    p.eps = nan;
    p.entropy = nan;
    p.flags.hagedorn_divergent = true;
  }
  return p;
}

struct HagedornRow {
  double beta = 0.0;
  bool divergent = false;
  double f = std::numeric_limits<double>::quiet_NaN();
};

inline std::vector<HagedornRow> hagedorn_scan(const EnsembleSpec& spec,
                                              const std::vector<double>& beta_grid) {
  detail::require_discrete(spec, "hagedorn_scan");
  std::vector<HagedornRow> out;
  for (double b : beta_grid) {
    if (!(b > 0.0)) throw DomainError("hagedorn_scan: grid must be positive");
    HagedornRow r;
    r.beta = b;
    try {
      r.f = free_energy_discrete(spec, b);
    } catch (const HagedornError&) {
      r.divergent = true;
    }
    out.push_back(r);
  }
  return out;
}

/// -(lambda/(beta^2 V)) int_0^inf e^{-lambda s/beta} log zeta(s) ds with the
/// principal branch of the log; Im comes out of the same quadrature.
inline QuadResult<Complex> free_energy_continuum_detail(const EnsembleSpec& spec, double beta,
                                                         double tol = 1e-10) {
  detail::require_continuum(spec, beta, "free_energy_continuum");
  const double rate = spec.lambda / beta;
  const double pre = spec.lambda / (beta * beta * spec.volume);
  const double itol = tol / pre;
  auto f = [&](double s) { return std::exp(-rate * s) * log_zeta_principal(Complex{s, 0.0}); };
  QuadOptions o;
  o.abs_tol = itol / 3.0;
  o.singular = EndpointSingularity::both;  // weight peak at 0 when rate is large; log at 1
  auto a = integrate(f, 0.0, 1.0, o);
  o.singular = EndpointSingularity::left;
  auto b = integrate(f, 1.0, 2.0, o);
  o.singular = EndpointSingularity::none;
  const double top = std::min(80.0, 2.0 + kExpWeightCutoff / rate);
  auto c = integrate(f, 2.0, top, o);
  QuadResult<Complex> r;
  r.value = -pre * (a.value + b.value + c.value);
  r.abs_error = pre * (a.abs_error + b.abs_error + c.abs_error);
  r.evaluations = a.evaluations + b.evaluations + c.evaluations;
  r.converged = a.converged && b.converged && c.converged;
  if (!r.converged) throw QuadratureError("free_energy_continuum: quadrature did not converge");
  return r;
}

inline Complex free_energy_continuum(const EnsembleSpec& spec, double beta, double tol = 1e-10) {
  return free_energy_continuum_detail(spec, beta, tol).value;
}

/// -(lambda/V) PV int_0^inf w e^{-lambda w} (zeta'/zeta)(beta w) dw, written in
/// s = beta w with the -1/(s-1) pole handled as a principal value.
inline QuadResult<double> energy_oracle_detail(const EnsembleSpec& spec, double beta,
                                               double tol = 1e-10) {
  detail::require_continuum(spec, beta, "energy_oracle");
  const double rate = spec.lambda / beta;
  const double pre = spec.lambda / (beta * beta * spec.volume);
  const double itol = tol / pre;
  // h(s) = s e^{-rate s} (s-1) zeta'/zeta(s), smooth through s = 1
  auto h = [&](double s) {
    const double reg = zeta_log_derivative_regular(s);
    return s * std::exp(-rate * s) * (reg * (s - 1.0) - 1.0);
  };
  auto pv = principal_value(h, 1.0, 0.0, 2.0, 0.5 * itol);
  auto g = [&](double s) {
    return s * std::exp(-rate * s) * zeta_log_derivative(Complex{s, 0.0}).real();
  };
  const double top = std::min(80.0, 2.0 + kExpWeightCutoff / rate);
  auto rest = integrate(g, 2.0, top, 0.5 * itol);
  QuadResult<double> r;
  r.value = -pre * (pv.value + rest.value);
  r.abs_error = pre * (pv.abs_error + rest.abs_error);
  r.evaluations = pv.evaluations + rest.evaluations;
  r.converged = pv.converged && rest.converged;
  if (!r.converged) throw QuadratureError("energy_oracle: quadrature did not converge");
  return r;
}

inline double energy_oracle(const EnsembleSpec& spec, double beta, double tol = 1e-10) {
  return energy_oracle_detail(spec, beta, tol).value;
}

inline ThermoPoint thermo_point_continuum(const EnsembleSpec& spec, double beta, double tol = 1e-10) {
  ThermoPoint p;
  p.beta = beta;
  p.f = free_energy_continuum(spec, beta, tol);
  p.eps = energy_oracle(spec, beta, tol);
  p.entropy = beta * (p.eps - p.f.real());
  p.flags.complex_branch_active = p.f.imag() != 0.0;
  return p;
}

inline ThermoPoint thermo_point(const EnsembleSpec& spec, double beta, double tol = 1e-10) {
  return spec.kind == EnsembleKind::discrete ? thermo_point_discrete(spec, beta)
                                             : thermo_point_continuum(spec, beta, tol);
}

// ---- printed closed forms ---------------------------------------------------

/// 1/(beta V) - (lambda/(beta^2 V)) e^{-lambda/beta} Ei(lambda/beta)
///   + (lambda/(4 beta^2 V)) e^{-lambda/(4 beta)} Ei(lambda/(4 beta)), as printed.
inline double thermal_part_paper_form(double beta, double lambda, double V = 1.0) {
  if (!(beta > 0.0 && lambda > 0.0 && V > 0.0)) {
    throw DomainError("thermal_part_paper_form: inputs must be positive");
  }
  const double x = lambda / beta;
  return 1.0 / (beta * V) - (lambda / (beta * beta * V)) * std::exp(-x) * exp_integral_ei(x) +
         (lambda / (4.0 * beta * beta * V)) * std::exp(-0.25 * x) * exp_integral_ei(0.25 * x);
}

/// g(k) = ((-1)^k / 2^k) k! zeta(k)
inline double paper_series_g(int k) {
  if (k < 2) throw DomainError("paper_series_g: k must be >= 2");
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return sign * std::exp(std::lgamma(k + 1.0) - k * std::log(2.0)) * zeta(static_cast<double>(k));
}

/// sum_{k=2}^{K} g(k) (beta/lambda)^k
inline double paper_series_partial(double beta, double lambda, int K) {
  if (!(beta > 0.0 && lambda > 0.0)) throw DomainError("paper_series_partial: inputs must be positive");
  double s = 0.0;
  for (int k = 2; k <= K; ++k) s += paper_series_g(k) * std::pow(beta / lambda, k);
  return s;
}

struct AsymptoticSum {
  double value = 0.0;
  double error = 0.0;    // magnitude of the first omitted (= smallest) term
  int smallest_index = 2;
};

/// Smallest-term truncation: keep k = 2 .. k*-1 where |term k*| is minimal.
inline AsymptoticSum paper_series_optimal(double beta, double lambda) {
  if (!(beta > 0.0 && lambda > 0.0)) throw DomainError("paper_series_optimal: inputs must be positive");
  const double r = beta / lambda;
  auto term = [&](int k) { return paper_series_g(k) * std::pow(r, k); };
  int kmin = 2;
  double tmin = std::abs(term(2));
  for (int k = 3; k < 170; ++k) {
    const double t = std::abs(term(k));
    if (!(t < tmin)) break;
    tmin = t;
    kmin = k;
  }
  AsymptoticSum out;
  out.smallest_index = kmin;
  out.error = tmin;
  for (int k = 2; k < kmin; ++k) out.value += term(k);
  return out;
}

// ---- decomposition ----------------------------------------------------------

struct BreakdownOptions {
  double tol = 1e-10;            // absolute, for each quadrature-built term
  double zero_tail_rel = 1e-3;   // cap on zero-sum tail bounds, relative to |oracle|
};

struct EnergyBreakdown {
  double beta = 0.0, lambda = 0.0, volume = 1.0;
  double eps1 = 0.0, eps2 = 0.0, eps3 = 0.0, eps4 = 0.0, eps5 = 0.0, eps6 = 0.0;
  double eps_A = 0.0, eps_B = 0.0;
  double total = 0.0;
  double oracle = 0.0;
  double deviation = 0.0;  // total - oracle
  double error_bound = 0.0;
  double eps3_tail_bound = 0.0, eps4_tail_bound = 0.0;
  std::size_t zeros_used = 0;

  double eps1_printed_constant = 0.0;  // with C1 = -1 - zeta'(0)/zeta(0)
  double paper_mode_eps3 = 0.0;
  double paper_mode_eps5 = 0.0;
  AsymptoticSum paper_series;
  double thermal_part_paper = 0.0;
  double thermal_part_deviation = 0.0;  // printed form - (oracle - eps_A)
  std::string divergence_policy;
};

namespace detail {

/// int w e^{-lambda w} (beta w - 1/2)^m dw
inline double shifted_moment(int m, double beta, double lambda) {
  double s = 0.0;
  double binom = 1.0;
  for (int i = 0; i <= m; ++i) {
    if (i > 0) binom *= static_cast<double>(m - i + 1) / i;
    s += binom * std::pow(beta, i) * std::pow(-0.5, m - i) * std::exp(std::lgamma(i + 2.0)) /
         std::pow(lambda, i + 2);
  }
  return s;
}

}  // namespace detail

/// eps3 = -(1/V) sum_k int lambda e^{-lambda w} w 2u/(u^2+gamma_k^2) dw, u = beta w - 1/2,
/// plus the smooth-density tail.  Returns value and tail bound.
inline TailEstimate<double> energy_eps3(double beta, double lambda, double V, const ZeroTable& zeros,
                                        double tol) {
  if (zeros.count() < 10) throw DomainError("energy_eps3: need at least 10 zeros");
  const auto& g = zeros.gammas;
  const double per_zero = std::max(1e-17, 0.1 * tol / static_cast<double>(g.size()));
  auto inner = [&](double gamma) {
    auto f = [&](double w) {
      const double u = beta * w - 0.5;
      return w * 2.0 * u / (u * u + gamma * gamma);
    };
    auto r = integrate_exp_weight(f, lambda, per_zero);
    if (!r.converged) throw QuadratureError("energy_eps3: inner quadrature did not converge");
    return r.value;
  };
  double partial = 0.0;
  for (auto it = g.rbegin(); it != g.rend(); ++it) partial += inner(*it);
  const double T = g.back();
  if (!(beta / lambda < 0.05 * T)) {
    throw InsufficientZerosError("energy_eps3: beta/lambda too large for the zero-sum tail");
  }
  auto coeff = [&](int j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    return detail::TailTerm{Complex{2.0 * sign * lambda * detail::shifted_moment(2 * j + 1, beta, lambda), 0.0},
                            Complex{2.0 + 2.0 * j, 0.0}};
  };
  double fpT = 0.0;
  for (int j = 0; j < 8; ++j) {
    const auto c = coeff(j);
    fpT += c.coeff.real() * -(2.0 + 2.0 * j) * std::pow(T, -(3.0 + 2.0 * j));
  }
  auto tail = detail::tail_from_expansion(coeff, 8, T, g.size(), Complex{inner(T), 0.0}, Complex{fpT, 0.0});
  TailEstimate<double> r;
  r.value = -(partial + tail.value.real()) / V;
  r.bound = (tail.bound + tol * 0.1) / V;
  return r;
}

/// (1/(2V)) int lambda e^{-lambda w} w psi(1 + beta w/2) dw
inline double energy_eps5_finite(double beta, double lambda, double V, double tol) {
  auto f = [&](double w) { return w * digamma(1.0 + 0.5 * beta * w); };
  auto r = integrate_exp_weight(f, lambda, 2.0 * V * tol);
  if (!r.converged) throw QuadratureError("energy_eps5: quadrature did not converge");
  return r.value / (2.0 * V);
}

inline double energy_eps2(double beta, double lambda, double V) {
  const double x = lambda / beta;
  return 1.0 / (beta * V) - (lambda / (beta * beta * V)) * std::exp(-x) * exp_integral_ei(x);
}

inline EnergyBreakdown energy_breakdown(const EnsembleSpec& spec, double beta, const ZeroTable& zeros,
                                        const BreakdownOptions& opts = {}) {
  detail::require_continuum(spec, beta, "energy_breakdown");
  const double lambda = spec.lambda;
  const double V = spec.volume;
  EnergyBreakdown b;
  b.beta = beta;
  b.lambda = lambda;
  b.volume = V;
  b.zeros_used = zeros.count();

  const auto oracle = energy_oracle_detail(spec, beta, opts.tol);
  b.oracle = oracle.value;

  SuperzetaParams params;
  params.zeros = &zeros;
  const auto inv_rho = sum_inverse_rho(params);

  b.eps1 = -hadamard_constant() / (lambda * V);
  b.eps1_printed_constant = -hadamard_constant_as_printed() / (lambda * V);
  b.eps2 = energy_eps2(beta, lambda, V);
  const auto e3 = energy_eps3(beta, lambda, V, zeros, opts.tol);
  b.eps3 = e3.value;
  b.eps3_tail_bound = e3.bound;
  b.eps4 = -inv_rho.value / (lambda * V);
  b.eps4_tail_bound = inv_rho.bound() / (lambda * V);
  b.eps5 = energy_eps5_finite(beta, lambda, V, opts.tol);
  b.eps6 = kEulerGamma / (2.0 * lambda * V);

  b.total = b.eps1 + b.eps2 + b.eps3 + b.eps4 + b.eps5 + b.eps6;
  b.eps_A = b.eps1 + b.eps4 + b.eps6;
  b.eps_B = b.total - b.eps_A;
  b.deviation = b.total - b.oracle;
  b.error_bound = b.eps3_tail_bound + b.eps4_tail_bound + oracle.abs_error + 4.0 * opts.tol;

  if (b.eps3_tail_bound + b.eps4_tail_bound > opts.zero_tail_rel * std::abs(b.oracle)) {
    throw InsufficientZerosError("energy_breakdown: zero-sum tail bound " +
                                 std::to_string(b.eps3_tail_bound + b.eps4_tail_bound) +
                                 " too large for " + std::to_string(zeros.count()) + " zeros");
  }

  b.paper_series = paper_series_optimal(beta, lambda);
  const double S = b.paper_series.value;
  const double C = kEulerGamma;
  const double x4 = 0.25 * lambda / beta;
  b.paper_mode_eps3 = C / (2.0 * lambda * V) - S / (beta * V) +
                      (lambda / (4.0 * beta * beta * V)) * std::exp(-x4) * exp_integral_ei(x4);
  b.paper_mode_eps5 = -C / (2.0 * lambda * V) + S / (beta * V);
  b.thermal_part_paper = thermal_part_paper_form(beta, lambda, V);
  b.thermal_part_deviation = b.thermal_part_paper - (b.oracle - b.eps_A);
  b.divergence_policy =
      "h(lambda,V) dropped from eps5 and eps6 (they cancel); g(k) series truncated before its "
      "smallest term";
  return b;
}

// ---- scans ------------------------------------------------------------------

struct ScanRow {
  ThermoPoint point;
  std::optional<EnergyBreakdown> breakdown;
};

struct EnergyScan {
  std::vector<ScanRow> rows;
  bool continuity_ok = true;
  double worst_jump_ratio = 0.0;  // max |d eps| / (|d beta| * local slope bound)
};

/// One point per beta.  With a zero table the decomposition is attached too.
/// Continuity: each jump |eps_{i+1} - eps_i| must stay below twice
/// |beta_{i+1} - beta_i| times the largest slope seen at the two ends and the
/// midpoint (central differences of the oracle).
inline EnergyScan energy_scan(const EnsembleSpec& spec, const std::vector<double>& beta_grid,
                              const ZeroTable* zeros = nullptr, double tol = 1e-10) {
  spec.validate();
  EnergyScan out;
  for (double b : beta_grid) {
    ScanRow row;
    row.point = thermo_point(spec, b, tol);
    if (zeros != nullptr && spec.kind == EnsembleKind::continuum) {
      BreakdownOptions o;
      o.tol = tol;
      row.breakdown = energy_breakdown(spec, b, *zeros, o);
    }
    out.rows.push_back(std::move(row));
  }
  auto eps_at = [&](double b) {
    return spec.kind == EnsembleKind::continuum ? energy_oracle(spec, b, tol)
                                                : energy_entropy_discrete(spec, b).eps;
  };
  auto slope = [&](double b) {
    const double h = 1e-4 * b;
    return std::abs(eps_at(b + h) - eps_at(b - h)) / (2.0 * h);
  };
  for (std::size_t i = 0; i + 1 < out.rows.size(); ++i) {
    const auto& p = out.rows[i].point;
    const auto& q = out.rows[i + 1].point;
    if (p.flags.hagedorn_divergent || q.flags.hagedorn_divergent) continue;
    const double db = std::abs(q.beta - p.beta);
    const double s = std::max({slope(p.beta), slope(q.beta), slope(0.5 * (p.beta + q.beta))});
    const double allowed = 2.0 * db * s + 10.0 * tol;
    const double ratio = std::abs(q.eps - p.eps) / allowed;
    out.worst_jump_ratio = std::max(out.worst_jump_ratio, ratio);
    if (ratio > 1.0) out.continuity_ok = false;
  }
  return out;
}

}  // namespace rgas
