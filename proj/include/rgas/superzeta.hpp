#pragma once

// Superzeta functions over the nontrivial zeros,
//   G1(s,t) = sum_rho (1/2 + t - rho)^-s,   G2(sigma,t) = sum_k (gamma_k^2 + t^2)^-sigma,
// by truncated zero sums with a smooth-density tail, and by zero-free
// identities built on zeta'/zeta.  RH is assumed throughout: rho = 1/2 +- i gamma_k.

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "rgas/errors.hpp"
#include "rgas/numkernel.hpp"
#include "rgas/quadrature.hpp"
#include "rgas/zerofinder.hpp"

namespace rgas {

struct SuperzetaParams {
  const ZeroTable* zeros = nullptr;
  int tail_order = 8;  // expansion terms in the tail; 0 disables the correction

  void validate() const {
    if (zeros == nullptr) throw DomainError("SuperzetaParams: no zero table");
    if (zeros->count() < 10) throw DomainError("SuperzetaParams: need at least 10 zeros");
    if (tail_order < 0) throw DomainError("SuperzetaParams: tail_order must be >= 0");
  }
};

template <class T>
struct TailEstimate {
  T value{};
  double bound = 0.0;
};

/// value = partial sum + tail.value; `bound` covers the whole result.
template <class T>
struct ZeroSum {
  T value{};
  T partial{};
  TailEstimate<T> tail;
  std::size_t zeros_used = 0;

  double bound() const { return tail.bound; }
};

/// C1 in zeta'/zeta(s) = C1 - 1/(s-1) + sum_rho [1/(s-rho) + 1/rho] - ..., which
/// the s = 0 limit pins to zeta'(0)/zeta(0) - 1 = ln(2 pi) - 1.
inline double hadamard_constant() { return kLn2Pi - 1.0; }

/// The constant as -1 - zeta'(0)/zeta(0) = -1 - ln(2 pi).  Kept for comparison
/// only; it does not reproduce zeta'/zeta.
inline double hadamard_constant_as_printed() { return -1.0 - kLn2Pi; }

/// sum_rho 1/rho = 1 + gamma_E/2 - ln(4 pi)/2.
inline double sum_inverse_rho_closed_form() {
  return 1.0 + 0.5 * kEulerGamma - 0.5 * std::log(4.0 * kPi);
}

namespace detail {

/// int_T^inf g^-a (1/2pi) ln(g/2pi) dg
inline Complex density_moment(Complex a, double T) {
  const Complex am1 = a - 1.0;
  return (1.0 / (2.0 * kPi)) * std::pow(Complex{T, 0.0}, 1.0 - a) *
         (std::log(T / (2.0 * kPi)) / am1 + 1.0 / (am1 * am1));
}

inline double smooth_count(double T) { return zero_count_estimate(T); }

struct TailTerm {
  Complex coeff;
  Complex exponent;
};

// f(g) = sum_j coeff_j g^-exponent_j for g beyond the last stored zero T.
// Tail = int_T^inf f dN_smooth + f(T) (N_smooth(T) - K).
template <class Coeff>
TailEstimate<Complex> tail_from_expansion(Coeff&& coeff, int order, double T, std::size_t K,
                                          Complex fT, Complex fpT) {
  Complex integral{0.0, 0.0};
  for (int j = 0; j < order; ++j) {
    const TailTerm c = coeff(j);
    integral += c.coeff * density_moment(c.exponent, T);
  }
  const TailTerm next = coeff(std::max(order, 0));
  const double next_mag = std::abs(next.coeff * density_moment(next.exponent, T));
  const double spacing = 2.0 * kPi / std::log(T / (2.0 * kPi));
  const Complex jump = fT * (smooth_count(T) - static_cast<double>(K));
  TailEstimate<Complex> r;
  if (order == 0) {
    // no correction: the bound has to cover the whole neglected tail
    Complex est{0.0, 0.0};
    for (int j = 0; j < 8; ++j) est += coeff(j).coeff * density_moment(coeff(j).exponent, T);
    r.value = {0.0, 0.0};
    r.bound = 2.0 * std::abs(est + jump) + 4.0 * std::abs(fpT) * spacing;
    return r;
  }
  r.value = integral + jump;
  r.bound = 4.0 * std::abs(fpT) * spacing + 2.0 * next_mag;
  return r;
}

template <class F>
Complex partial_sum(const std::vector<double>& g, F&& f, double& abs_sum) {
  Complex s{0.0, 0.0};
  abs_sum = 0.0;
  for (auto it = g.rbegin(); it != g.rend(); ++it) {
    const Complex v = f(*it);
    s += v;
    abs_sum += std::abs(v);
  }
  return s;
}

inline double rounding_bound(std::size_t K, double abs_sum) {
  return 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(K) * abs_sum;
}

inline void require_tail_range(double scale, double T, const char* who) {
  if (!(std::abs(scale) < 0.5 * T)) {
    throw InsufficientZerosError(std::string(who) +
                                 ": tail expansion needs |t| below half the last ordinate");
  }
}

inline void check_tolerance(double bound, double tol, const char* who) {
  if (bound > tol) {
    throw InsufficientZerosError(std::string(who) + ": tail bound " + std::to_string(bound) +
                                 " exceeds tolerance " + std::to_string(tol));
  }
}

}  // namespace detail

/// G2(sigma, t) over the stored zeros plus tail.
inline ZeroSum<double> g2(double sigma, double t, const SuperzetaParams& params,
                          double tol = std::numeric_limits<double>::infinity()) {
  params.validate();
  if (!(sigma > 0.5)) throw DomainError("g2: requires sigma > 1/2");
  const auto& g = params.zeros->gammas;
  const double T = g.back();
  detail::require_tail_range(t, T, "g2");
  const double t2 = t * t;
  double abs_sum = 0.0;
  const double partial =
      detail::partial_sum(g, [&](double x) { return Complex{std::pow(x * x + t2, -sigma), 0.0}; },
                          abs_sum)
          .real();
  auto coeff = [&](int j) {
    double b = 1.0;
    for (int i = 0; i < j; ++i) b *= (-sigma - i) / (i + 1.0);
    return detail::TailTerm{Complex{b * std::pow(t2, j), 0.0}, Complex{2.0 * sigma + 2.0 * j, 0.0}};
  };
  const double fT = std::pow(T * T + t2, -sigma);
  const double fpT = -2.0 * sigma * T * std::pow(T * T + t2, -sigma - 1.0);
  auto tail = detail::tail_from_expansion(coeff, params.tail_order, T, g.size(), fT, fpT);
  ZeroSum<double> r;
  r.partial = partial;
  r.tail = {tail.value.real(), tail.bound + detail::rounding_bound(g.size(), abs_sum)};
  r.value = partial + r.tail.value;
  r.zeros_used = g.size();
  detail::check_tolerance(r.bound(), tol, "g2");
  return r;
}

/// sum_rho 1/rho = G2(1, 1/2).
inline ZeroSum<double> sum_inverse_rho(const SuperzetaParams& params,
                                       double tol = std::numeric_limits<double>::infinity()) {
  return g2(1.0, 0.5, params, tol);
}

/// sum over conjugate pairs of 1/(u+1/2 - rho) + 1/(u+1/2 - conj rho)
///   = sum_k 2u / (u^2 + gamma_k^2),
/// i.e. G1(1, u) with the pairing that makes it converge.  u may be complex.
inline ZeroSum<Complex> paired_resolvent_sum(Complex u, const SuperzetaParams& params,
                                             double tol = std::numeric_limits<double>::infinity()) {
  params.validate();
  const auto& g = params.zeros->gammas;
  const double T = g.back();
  detail::require_tail_range(std::abs(u), T, "paired_resolvent_sum");
  const Complex u2 = u * u;
  double abs_sum = 0.0;
  const Complex partial = detail::partial_sum(
      g,
      [&](double x) {
        const Complex d = u2 + x * x;
        if (std::abs(d) < 1e-12 * x * x) {
          throw ZeroOfZetaError("paired_resolvent_sum: argument sits on a stored zero");
        }
        return 2.0 * u / d;
      },
      abs_sum);
  auto coeff = [&](int j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    return detail::TailTerm{2.0 * u * sign * std::pow(u2, j), Complex{2.0 + 2.0 * j, 0.0}};
  };
  const Complex dT = u2 + T * T;
  const Complex fT = 2.0 * u / dT;
  const Complex fpT = -4.0 * u * T / (dT * dT);
  auto tail = detail::tail_from_expansion(coeff, params.tail_order, T, g.size(), fT, fpT);
  tail.bound += detail::rounding_bound(g.size(), abs_sum);
  ZeroSum<Complex> r;
  r.partial = partial;
  r.tail = tail;
  r.value = partial + tail.value;
  r.zeros_used = g.size();
  detail::check_tolerance(r.bound(), tol, "paired_resolvent_sum");
  return r;
}

/// G1(s, t) for Re s >= 1 with conjugate zeros summed in pairs.
inline ZeroSum<Complex> g1_zero_sum(Complex s, double t, const SuperzetaParams& params,
                                    double tol = std::numeric_limits<double>::infinity()) {
  if (s.real() < 1.0) {
    throw DomainError("g1_zero_sum: the zero sum does not converge for Re s < 1");
  }
  if (s == Complex{1.0, 0.0}) {
    auto r = paired_resolvent_sum(Complex{t, 0.0}, params, tol);
    r.value.imag(0.0);
    r.partial.imag(0.0);
    r.tail.value.imag(0.0);
    return r;
  }
  params.validate();
  const auto& g = params.zeros->gammas;
  const double T = g.back();
  detail::require_tail_range(t, T, "g1_zero_sum");
  auto pair = [&](double x) {
    return std::pow(Complex{t, -x}, -s) + std::pow(Complex{t, x}, -s);
  };
  double abs_sum = 0.0;
  const Complex partial = detail::partial_sum(g, pair, abs_sum);
  auto coeff = [&](int j) {
    Complex b{1.0, 0.0};
    for (int i = 0; i < j; ++i) b *= (-s - static_cast<double>(i)) / (i + 1.0);
    return detail::TailTerm{2.0 * b * std::pow(t, j) * std::cos(kPi * (s + static_cast<double>(j)) / 2.0),
                            s + static_cast<double>(j)};
  };
  const Complex I{0.0, 1.0};
  const Complex fpT = I * s * std::pow(Complex{t, -T}, -s - 1.0) -
                      I * s * std::pow(Complex{t, T}, -s - 1.0);
  auto tail = detail::tail_from_expansion(coeff, params.tail_order, T, g.size(), pair(T), fpT);
  tail.bound += detail::rounding_bound(g.size(), abs_sum);
  ZeroSum<Complex> r;
  r.partial = partial;
  r.tail = tail;
  r.value = partial + tail.value;
  r.zeros_used = g.size();
  detail::check_tolerance(r.bound(), tol, "g1_zero_sum");
  return r;
}

/// sum_rho 1/(x - rho) at x = 1/2 + t from zeta'/zeta alone:
///   (zeta'/zeta)(x) + 1/(x-1) - C1 - sum 1/rho + (psi(1+x/2) + gamma_E)/2.
/// The first two terms are evaluated together, so x = 1 is allowed.
inline double g1_via_identity(double t) {
  const double x = 0.5 + t;
  if (x <= -2.0 && std::floor(x / 2.0) == x / 2.0) {
    throw PoleError("g1_via_identity: x is a trivial zero");
  }
  double reg;
  if (x >= 0.0) {
    reg = zeta_log_derivative_regular(x);
  } else {
    reg = zeta_log_derivative(Complex{x, 0.0}).real() + 1.0 / (x - 1.0);
  }
  return reg - hadamard_constant() - sum_inverse_rho_closed_form() +
         0.5 * (digamma(1.0 + 0.5 * x) + kEulerGamma);
}

/// C1 - 1/(s-1) + paired zero sum + sum 1/rho - (psi(1+s/2) + gamma_E)/2,
/// with both zero sums tail-corrected from the table.
inline ZeroSum<Complex> zeta_log_derivative_expansion(Complex s, const SuperzetaParams& params) {
  if (s == Complex{1.0, 0.0}) throw PoleError("zeta_log_derivative_expansion: pole at s = 1");
  if (s.imag() == 0.0 && s.real() <= -2.0 && std::floor(s.real() / 2.0) == s.real() / 2.0) {
    throw PoleError("zeta_log_derivative_expansion: trivial zero");
  }
  const auto pairs = paired_resolvent_sum(s - 0.5, params);
  const auto inv_rho = sum_inverse_rho(params);
  ZeroSum<Complex> r;
  r.partial = pairs.partial + inv_rho.partial;
  r.tail.value = pairs.tail.value + inv_rho.tail.value;
  r.tail.bound = pairs.bound() + inv_rho.bound();
  r.value = hadamard_constant() - 1.0 / (s - 1.0) + pairs.value + inv_rho.value -
            0.5 * (digamma(1.0 + 0.5 * s) + kEulerGamma);
  r.zeros_used = pairs.zeros_used;
  return r;
}

/// Z(s,t) = sum_{k>=1} (1/2 + t + 2k)^-s = 2^-s zeta(s, 5/4 + t/2).
inline Complex trivial_zero_sum(Complex s, double t) {
  const double q = 1.25 + 0.5 * t;
  if (!(q > 0.0)) throw DomainError("trivial_zero_sum: requires t > -5/2");
  return std::pow(2.0, -s) * hurwitz_zeta(s, q);
}

struct MellinResult {
  Complex value;
  double abs_error = 0.0;
  bool converged = true;
};

inline constexpr double kMellinRayCap = 60.0;

namespace detail {

inline Complex log_derivative_on_ray(double x) { return zeta_log_derivative(Complex{x, 0.0}); }

/// |zeta'/zeta(x)| <= 2 ln2 2^-x for x >= 10, integrated past the cap.
inline double mellin_tail_bound(double x, double sigma) {
  const double y = kMellinRayCap;
  return 2.0 * std::pow(2.0, -(x + y)) * std::pow(y, std::max(0.0, -sigma)) * (1.0 + 1.0 / y);
}

}  // namespace detail

/// J(s,t) = int_0^inf (zeta'/zeta)(1/2 + t + y) y^-s dy for Re s < 1.
inline MellinResult mellin_j(Complex s, double t, double tol = 1e-10) {
  const double sigma = s.real();
  if (!(sigma < 1.0)) throw DomainError("mellin_j: requires Re s < 1");
  const double x = 0.5 + t;
  if (!(x > 1.0)) throw DomainError("mellin_j: the ray 1/2+t+y passes through the pole");
  // y = u^p with p = 1/(1-sigma) makes y^-s dy = p u^{-i Im(s) p} du
  const double p = 1.0 / (1.0 - sigma);
  const double b = s.imag();
  auto f = [&](double u) -> Complex {
    if (u <= 0.0) return p * detail::log_derivative_on_ray(x);
    const double y = std::pow(u, p);
    return p * detail::log_derivative_on_ray(x + y) * std::exp(Complex{0.0, -b * p * std::log(u)});
  };
  const double umax = std::pow(kMellinRayCap, 1.0 / p);
  QuadOptions o;
  o.abs_tol = tol;
  o.singular = b != 0.0 ? EndpointSingularity::left : EndpointSingularity::none;
  auto q = integrate(f, 0.0, umax, o);
  return {q.value, q.abs_error + detail::mellin_tail_bound(x, sigma), q.converged};
}

/// J(s,t) continued to Re s < 2, s != 1.  One integration by parts gives
///   J(s,t) = -1/(1-s) int_0^inf (zeta'/zeta)'(x+y) y^{1-s} dy,
/// and the derivative is taken by a complex step (the function is real on
/// the ray), so nothing cancels.
inline MellinResult mellin_j_continued(Complex s, double t, double tol = 1e-10) {
  if (s.real() < 1.0) return mellin_j(s, t, tol);
  if (!(s.real() < 2.0)) throw DomainError("mellin_j_continued: requires Re s < 2");
  if (s == Complex{1.0, 0.0}) throw PoleError("mellin_j_continued: pole at s = 1");
  const double x = 0.5 + t;
  if (!(x > 1.0)) throw DomainError("mellin_j_continued: the ray passes through the pole");
  const double sigma = s.real();
  const double b = s.imag();
  constexpr double h = 1e-30;
  auto dF = [](double z) { return zeta_log_derivative(Complex{z, h}).imag() / h; };
  // y = u^p, p = 1/(2-sigma): y^{1-s} dy = p u^{-i b p} du
  const double p = 1.0 / (2.0 - sigma);
  auto f = [&](double u) -> Complex {
    if (u <= 0.0) return p * dF(x);
    const double y = std::pow(u, p);
    return p * dF(x + y) * std::exp(Complex{0.0, -b * p * std::log(u)});
  };
  QuadOptions o;
  o.abs_tol = tol * std::max(1.0, std::abs(1.0 - s));
  o.singular = b != 0.0 ? EndpointSingularity::left : EndpointSingularity::none;
  auto q = integrate(f, 0.0, std::pow(kMellinRayCap, 1.0 / p), o);
  const Complex pre = -1.0 / (1.0 - s);
  return {pre * q.value, std::abs(pre) * q.abs_error + detail::mellin_tail_bound(x, sigma),
          q.converged};
}

/// G1(s,t) = -Z(s,t) + (t - 1/2)^-s + sin(pi s)/pi J(s,t), for t > 1/2 and Re s < 2.
inline MellinResult g1_analytic_extension(Complex s, double t, double tol = 1e-10) {
  if (!(t > 0.5)) throw DomainError("g1_analytic_extension: requires t > 1/2");
  const auto j = mellin_j_continued(s, t, tol);
  const Complex sinf = std::sin(kPi * s) / kPi;
  return {-trivial_zero_sum(s, t) + std::pow(Complex{t - 0.5, 0.0}, -s) + sinf * j.value,
          std::abs(sinf) * j.abs_error + 1e-12, j.converged};
}

}  // namespace rgas
