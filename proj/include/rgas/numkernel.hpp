#pragma once

// Special-function kernels in double precision: Riemann and Hurwitz zeta
// (Euler-Maclaurin), their s-derivatives, log-gamma, digamma and the
// exponential integral.  Everything here is pure and reentrant.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "rgas/errors.hpp"

namespace rgas {

using Complex = std::complex<double>;

inline constexpr double kEulerGamma = std::numbers::egamma;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kLn2Pi = 1.8378770664093454835606594728112;

struct EvalOptions {
  double target_abs_error = 1e-13;
  long max_terms = 1L << 22;

  void validate() const {
    if (!(target_abs_error >= 1e-14)) {
      throw DomainError("EvalOptions: target_abs_error must be >= 1e-14");
    }
    if (max_terms < 16) {
      throw DomainError("EvalOptions: max_terms must be >= 16");
    }
  }
};

namespace detail {

// B_2 .. B_26.  B_26 is only used for the truncation estimate of the
// twelve-term correction.
inline constexpr std::array<double, 13> kBernoulli2k = {
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
};

inline constexpr int kEulerMaclaurinOrder = 12;

inline double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

inline bool is_nonpositive_integer(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

/// Pieces of the Euler-Maclaurin formula for sum_{n>=0} (n+q)^{-s}.
/// `head` is the explicit sum of the first N terms plus the endpoint
/// half-term and Bernoulli corrections; `power` is a^{1-s} with a = N+q, so
/// that zeta(s,q) = head + power/(s-1).  Primed members are s-derivatives.
struct EulerMaclaurinParts {
  Complex head;
  Complex head_prime;
  Complex power;
  double log_a = 0.0;
  double truncation = 0.0;  // first omitted Bernoulli term bound
  double error = 0.0;       // truncation plus accumulated rounding
};

inline EulerMaclaurinParts euler_maclaurin(Complex s, double q, long n_terms,
                                           bool want_derivative) {
  EulerMaclaurinParts out;
  Complex sum{0.0, 0.0};
  Complex dsum{0.0, 0.0};
  for (long n = 0; n < n_terms; ++n) {
    const double x = static_cast<double>(n) + q;
    const double lx = std::log(x);
    const Complex term = std::exp(-s * lx);
    sum += term;
    if (want_derivative) dsum -= lx * term;
  }
  const double a = static_cast<double>(n_terms) + q;
  const double la = std::log(a);
  const Complex a_neg_s = std::exp(-s * la);
  out.power = a_neg_s * a;
  out.log_a = la;

  Complex head = sum + 0.5 * a_neg_s;
  Complex head_prime = dsum - 0.5 * la * a_neg_s;

  // T_j = B_2j/(2j)! * s(s+1)...(s+2j-2) * a^{-s-2j+1}
  Complex poch = s;
  Complex dpoch{1.0, 0.0};
  Complex apow = a_neg_s / a;
  const double inv_a2 = 1.0 / (a * a);
  double fact = 2.0;
  for (int j = 1; j <= kEulerMaclaurinOrder; ++j) {
    const double coeff = kBernoulli2k[j - 1] / fact;
    head += coeff * poch * apow;
    if (want_derivative) {
      head_prime += coeff * (dpoch * apow - la * poch * apow);
    }
    const Complex k1 = s + double(2 * j - 1);
    const Complex k2 = s + double(2 * j);
    dpoch = dpoch * k1 * k2 + poch * (k1 + k2);
    poch = poch * k1 * k2;
    apow *= inv_a2;
    fact *= double(2 * j + 1) * double(2 * j + 2);
  }
  const int jn = kEulerMaclaurinOrder + 1;
  const double next =
      std::abs(kBernoulli2k[jn - 1] / fact * poch * apow);
  const double sigma_shift = s.real() + 2.0 * jn - 1.0;
  const Complex s_shift = s + (2.0 * jn - 1.0);
  out.truncation = sigma_shift > 0.0 ? next * std::abs(s_shift) / sigma_shift
                                     : std::numeric_limits<double>::infinity();
  // Accumulated rounding in the explicit sum.
  out.error = out.truncation + 4.0 * std::numeric_limits<double>::epsilon() *
               (std::abs(sum) + static_cast<double>(n_terms) *
                                    std::exp(std::max(0.0, -s.real()) * la));
  out.head = head;
  out.head_prime = head_prime;
  return out;
}

inline long initial_cutoff(Complex s) {
  return std::max<long>(static_cast<long>(std::ceil(std::abs(s.imag()) / 2.0)) + 10, 20);
}

/// Runs Euler-Maclaurin with the N-doubling policy until `accept` holds.
template <class Accept>
EulerMaclaurinParts euler_maclaurin_adaptive(Complex s, double q, bool want_derivative,
                                             const EvalOptions& opts, Accept accept) {
  opts.validate();
  long n = std::min<long>(initial_cutoff(s), opts.max_terms);
  for (;;) {
    EulerMaclaurinParts parts = euler_maclaurin(s, q, n, want_derivative);
    if (accept(parts)) return parts;
    if (n >= opts.max_terms) {
      throw AccuracyError("Euler-Maclaurin: max_terms exhausted before reaching target error");
    }
    n = std::min(2 * n, opts.max_terms);
  }
}

struct ZetaValue {
  Complex value;
  Complex derivative;
  double error = 0.0;
};

/// zeta(s,q) and optionally its s-derivative, s != 1, Re s >= 0 expected.
inline ZetaValue hurwitz_direct(Complex s, double q, bool want_derivative,
                                const EvalOptions& opts) {
  const Complex sm1 = s - 1.0;
  ZetaValue out;
  euler_maclaurin_adaptive(s, q, want_derivative, opts, [&](const EulerMaclaurinParts& p) {
    out.value = p.head + p.power / sm1;
    out.derivative =
        p.head_prime - p.log_a * p.power / sm1 - p.power / (sm1 * sm1);
    out.error = p.error;
    return p.truncation <= opts.target_abs_error * std::max(1.0, std::abs(out.value));
  });
  return out;
}

/// log sin(z), stable for large |Im z|.
inline Complex log_sin(Complex z) {
  const Complex i{0.0, 1.0};
  if (std::abs(z.imag()) < 20.0) return std::log(std::sin(z));
  if (z.imag() > 0.0) {
    // sin z = (i/2) e^{-iz} (1 - e^{2iz})
    return std::log(0.5 * i) - i * z + std::log(1.0 - std::exp(2.0 * i * z));
  }
  return std::log(-0.5 * i) + i * z + std::log(1.0 - std::exp(-2.0 * i * z));
}

inline Complex cot(Complex z) {
  const Complex i{0.0, 1.0};
  if (z.imag() > 20.0) return -i;
  if (z.imag() < -20.0) return i;
  return std::cos(z) / std::sin(z);
}

}  // namespace detail

/// Principal log-gamma: Stirling series after upward recurrence to Re s >= 10.
inline Complex log_gamma(Complex s) {
  if (detail::is_nonpositive_integer(s)) {
    throw PoleError("log_gamma: pole at non-positive integer");
  }
  Complex z = s;
  Complex shift{0.0, 0.0};
  while (z.real() < 10.0) {
    shift += std::log(z);
    z += 1.0;
  }
  const Complex inv = 1.0 / z;
  const Complex inv2 = inv * inv;
  Complex series{0.0, 0.0};
  Complex p = inv;
  for (int k = 1; k <= 8; ++k) {
    series += detail::kBernoulli2k[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * p;
    p *= inv2;
  }
  Complex r = (z - 0.5) * std::log(z) - z + 0.5 * kLn2Pi + series - shift;
  if (s.imag() == 0.0 && s.real() > 0.0) r.imag(0.0);
  return r;
}

namespace detail {

template <class T>
T digamma_impl(T x) {
  T acc{0.0};
  while (std::real(x) < 10.0) {
    acc -= T{1.0} / x;
    x += 1.0;
  }
  const T inv = T{1.0} / x;
  const T inv2 = inv * inv;
  T series{0.0};
  T p = inv2;
  for (int k = 1; k <= 8; ++k) {
    series += kBernoulli2k[k - 1] / (2.0 * k) * p;
    p *= inv2;
  }
  return acc + std::log(x) - 0.5 * inv - series;
}

}  // namespace detail

/// psi(x) = d/dx ln Gamma(x) for x > 0.
inline double digamma(double x) {
  if (!(x > 0.0)) throw DomainError("digamma: requires x > 0");
  return detail::digamma_impl(x);
}

/// Complex digamma; poles at non-positive integers.
inline Complex digamma(Complex z) {
  if (detail::is_nonpositive_integer(z)) throw PoleError("digamma: pole at non-positive integer");
  return detail::digamma_impl(z);
}

namespace detail {

/// eta(s) = (s-1) zeta(s) and eta'(s), entire near s = 1; Re s >= 0.
inline ZetaValue eta_direct(Complex s, const EvalOptions& opts) {
  const Complex sm1 = s - 1.0;
  ZetaValue out;
  euler_maclaurin_adaptive(s, 1.0, true, opts, [&](const EulerMaclaurinParts& p) {
    out.value = sm1 * p.head + p.power;
    out.derivative = p.head + sm1 * p.head_prime - p.log_a * p.power;
    out.error = std::abs(sm1) * p.error;
    return std::abs(sm1) * p.truncation <=
           opts.target_abs_error * std::max(1.0, std::abs(out.value));
  });
  return out;
}

inline void check_not_one(Complex s, const char* who) {
  if (s == Complex{1.0, 0.0}) throw PoleError(std::string(who) + ": pole at s = 1");
}

/// zeta and zeta' with reflection for Re s < 0.
inline ZetaValue zeta_full(Complex s, bool want_derivative, const EvalOptions& opts) {
  check_not_one(s, "zeta");
  if (s.real() >= 0.0) return hurwitz_direct(s, 1.0, want_derivative, opts);

  // zeta(s) = chi(s) zeta(1-s), chi(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s).
  // zeta(1-s) is taken as eta(w)/(w-1) with w-1 = -s held exact, so rounding
  // of w = 1-s does not leak through the pole near s = 0.
  const Complex w = 1.0 - s;
  const ZetaValue eta = eta_direct(w, opts);
  const Complex mirror_value = eta.value / (-s);
  const Complex half_pi_s = 0.5 * kPi * s;
  const Complex log_chi = s * std::log(2.0) + (s - 1.0) * std::log(kPi) + log_gamma(w);
  Complex chi;
  if (s.imag() == 0.0) {
    chi = std::exp(log_chi.real()) * std::sin(half_pi_s.real());
  } else {
    chi = std::exp(log_chi + log_sin(half_pi_s));
  }
  ZetaValue out;
  out.value = chi * mirror_value;
  out.error = std::abs(chi) * eta.error / std::abs(s) +
              4.0 * std::numeric_limits<double>::epsilon() * std::abs(out.value) *
                  (1.0 + std::abs(s));
  if (want_derivative) {
    // d/dw [eta(w)/(w-1)] with w-1 = -s
    const Complex mirror_derivative = (eta.derivative * (-s) - eta.value) / (s * s);
    const Complex dlog_chi = std::log(2.0) + std::log(kPi) + 0.5 * kPi * cot(half_pi_s) -
                             digamma(w);
    out.derivative = chi * (dlog_chi * mirror_value - mirror_derivative);
  }
  return out;
}

}  // namespace detail

/// Riemann zeta(s), s != 1.
inline Complex zeta(Complex s, const EvalOptions& opts = {}) {
  return detail::zeta_full(s, false, opts).value;
}

inline double zeta(double s, const EvalOptions& opts = {}) {
  return zeta(Complex{s, 0.0}, opts).real();
}

/// zeta'(s) by termwise differentiation of the same Euler-Maclaurin sum.
inline Complex zeta_derivative(Complex s, const EvalOptions& opts = {}) {
  return detail::zeta_full(s, true, opts).derivative;
}

inline double zeta_derivative(double s, const EvalOptions& opts = {}) {
  return zeta_derivative(Complex{s, 0.0}, opts).real();
}

/// zeta'(s)/zeta(s).  Residue -1 at s = 1 (signalled as PoleError exactly
/// there); ZeroOfZetaError when zeta(s) is indistinguishable from zero.
inline Complex zeta_log_derivative(Complex s, const EvalOptions& opts = {}) {
  const detail::ZetaValue z = detail::zeta_full(s, true, opts);
  if (std::abs(z.value) <= 4.0 * z.error) {
    throw ZeroOfZetaError("zeta_log_derivative: zeta(s) vanishes to working accuracy");
  }
  return z.derivative / z.value;
}


/// zeta'/zeta(s) + 1/(s-1): the logarithmic derivative with its pole at s = 1
/// removed, computed as eta'/eta with eta(s) = (s-1) zeta(s).  Finite at s = 1
/// (value: Euler's constant).  Requires Re s >= 0.
inline Complex zeta_log_derivative_regular(Complex s, const EvalOptions& opts = {}) {
  if (s.real() < 0.0) {
    throw DomainError("zeta_log_derivative_regular: requires Re s >= 0");
  }
  const detail::ZetaValue e = detail::eta_direct(s, opts);
  if (std::abs(e.value) <= 4.0 * e.error) {
    throw ZeroOfZetaError("zeta_log_derivative_regular: zeta(s) vanishes to working accuracy");
  }
  return e.derivative / e.value;
}

inline double zeta_log_derivative_regular(double s, const EvalOptions& opts = {}) {
  return zeta_log_derivative_regular(Complex{s, 0.0}, opts).real();
}

/// Principal branch of log zeta(s): imaginary part in (-pi, pi].  On the real
/// axis the result is ln|zeta| + i*pi where zeta < 0 (the interval (0,1) and
/// below) and real where zeta > 0.
inline Complex log_zeta_principal(Complex s, const EvalOptions& opts = {}) {
  detail::check_not_one(s, "log_zeta_principal");
  if (s.imag() == 0.0) {
    const double x = s.real();
    double mag;
    double sign;
    if (x >= 0.0 && std::abs(x - 1.0) < 0.5) {
      // |zeta| = |eta| / |s-1| keeps the log accurate on both sides of the pole
      const double eta = detail::eta_direct(s, opts).value.real();
      mag = std::log(std::abs(eta)) - std::log(std::abs(x - 1.0));
      sign = (x > 1.0) ? (eta > 0 ? 1.0 : -1.0) : (eta > 0 ? -1.0 : 1.0);
    } else {
      const double z = zeta(x, opts);
      if (z == 0.0) throw ZeroOfZetaError("log_zeta_principal: zeta(s) = 0");
      mag = std::log(std::abs(z));
      sign = z > 0.0 ? 1.0 : -1.0;
    }
    return {mag, sign > 0.0 ? 0.0 : kPi};
  }
  const Complex z = zeta(s, opts);
  if (z == Complex{0.0, 0.0}) throw ZeroOfZetaError("log_zeta_principal: zeta(s) = 0");
  Complex r = std::log(z);
  if (r.imag() == -kPi) r.imag(kPi);
  return r;
}

/// Hurwitz zeta(z,q) for q > 0, z != 1.
inline Complex hurwitz_zeta(Complex z, double q, const EvalOptions& opts = {}) {
  if (!(q > 0.0)) throw DomainError("hurwitz_zeta: requires q > 0");
  detail::check_not_one(z, "hurwitz_zeta");
  if (z.real() < -2.0 * detail::kEulerMaclaurinOrder + 2.0) {
    throw AccuracyError("hurwitz_zeta: Re z too negative for the fixed correction order");
  }
  return detail::hurwitz_direct(z, q, false, opts).value;
}

/// lim_{z->1} (zeta(z,q) - 1/(z-1)) = -psi(q).
inline double hurwitz_finite_part(double q) {
  if (!(q > 0.0)) throw DomainError("hurwitz_finite_part: requires q > 0");
  return -digamma(q);
}

namespace detail {

inline double ei_series(double x) {
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k < 500; ++k) {
    term *= x / k;
    const double add = term / k;
    sum += add;
    if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
  }
  return kEulerGamma + std::log(std::abs(x)) + sum;
}

// e^x/x * sum k!/x^k, stopped at the smallest term.
inline double ei_asymptotic(double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * k / x;
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return std::exp(x) / x * sum;
}

// E1(y) for y > 1 by modified Lentz on the continued fraction.
inline double e1_continued_fraction(double y) {
  const double tiny = 1e-300;
  double b = y + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -double(i) * double(i);
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-y);
}

}  // namespace detail

/// Exponential integral Ei(x), principal value for x > 0.
inline double exp_integral_ei(double x) {
  if (x == 0.0) throw PoleError("exp_integral_ei: singular at x = 0");
  if (x > 32.0) return detail::ei_asymptotic(x);
  if (x < -1.0) return -detail::e1_continued_fraction(-x);
  return detail::ei_series(x);
}

}  // namespace rgas
