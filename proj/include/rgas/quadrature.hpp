#pragma once

// Adaptive Gauss-Kronrod (G7/K15) integration with global error control,
// graded panels for integrable endpoint singularities, semi-infinite ranges,
// exponential-weight averages and Cauchy principal values.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <type_traits>
#include <utility>
#include <vector>

#include "rgas/errors.hpp"

namespace rgas {

template <class T>
struct QuadResult {
  T value{};
  double abs_error = 0.0;
  long evaluations = 0;
  bool converged = false;
};

/// Where an integrable (e.g. logarithmic) singularity sits.
enum class EndpointSingularity { none, left, right, both };

struct QuadOptions {
  double abs_tol = 1e-10;
  int max_subdivisions = 4000;
  EndpointSingularity singular = EndpointSingularity::none;
  /// Throw QuadratureError instead of returning converged = false.
  bool throw_on_failure = false;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Panel {
  double a = 0.0;
  double b = 0.0;
  T value{};
  double error = 0.0;
  bool splittable = true;
};

template <class T, class F>
Panel<T> kronrod15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T kronrod = kKronrodWeights[7] * fc;
  T gauss = kGaussWeights[3] * fc;
  double resabs = kKronrodWeights[7] * std::abs(fc);
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const T f1 = f(center - dx);
    const T f2 = f(center + dx);
    kronrod += kKronrodWeights[i] * (f1 + f2);
    resabs += kKronrodWeights[i] * (std::abs(f1) + std::abs(f2));
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * (f1 + f2);
  }
  Panel<T> p;
  p.a = a;
  p.b = b;
  p.value = kronrod * half;
  const double diff = std::abs((kronrod - gauss) * half);
  const double floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs * std::abs(half);
  p.error = std::max(diff, floor);
  const double width_floor = 64.0 * std::numeric_limits<double>::epsilon() *
                             std::max({std::abs(a), std::abs(b), 1e-280});
  p.splittable = (b - a) > width_floor;
  return p;
}

template <class F>
using quad_value_t = std::decay_t<std::invoke_result_t<F&, double>>;

/// Global adaptive bisection starting from a supplied partition.
template <class F>
QuadResult<quad_value_t<F>> adaptive(F& f, const std::vector<double>& breaks,
                                     const QuadOptions& opts) {
  using T = quad_value_t<F>;
  QuadResult<T> out;
  std::vector<Panel<T>> heap;
  auto by_error = [](const Panel<T>& x, const Panel<T>& y) { return x.error < y.error; };
  auto total_error = [&] {
    double e = 0.0;
    for (const auto& p : heap) e += p.error;
    return e;
  };
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] <= breaks[i]) continue;
    heap.push_back(kronrod15<T>(f, breaks[i], breaks[i + 1]));
    out.evaluations += 15;
  }
  std::make_heap(heap.begin(), heap.end(), by_error);

  double err = total_error();
  int subdivisions = 0;
  while (err > opts.abs_tol && subdivisions < opts.max_subdivisions) {
    std::pop_heap(heap.begin(), heap.end(), by_error);
    Panel<T> worst = heap.back();
    if (!worst.splittable) {
      heap.back().error = worst.error;
      std::push_heap(heap.begin(), heap.end(), by_error);
      break;
    }
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    heap.push_back(kronrod15<T>(f, worst.a, mid));
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(kronrod15<T>(f, mid, worst.b));
    std::push_heap(heap.begin(), heap.end(), by_error);
    out.evaluations += 30;
    ++subdivisions;
    // Re-summing keeps the running total free of cancellation drift.
    err = total_error();
  }

  std::sort(heap.begin(), heap.end(),
            [](const Panel<T>& x, const Panel<T>& y) { return x.a < y.a; });
  T value{};
  for (const auto& p : heap) value += p.value;
  out.value = value;
  out.abs_error = err;
  out.converged = err <= opts.abs_tol;
  if (!out.converged && opts.throw_on_failure) {
    throw QuadratureError("integrate: error estimate " + std::to_string(err) +
                          " above tolerance " + std::to_string(opts.abs_tol));
  }
  return out;
}

/// Geometric grading toward one or both endpoints: ratio 1/2, 60 panels each.
inline std::vector<double> graded_breaks(double a, double b, EndpointSingularity where) {
  constexpr int kLevels = 60;
  std::vector<double> breaks{a, b};
  const double w = b - a;
  auto grade_right = [&](double lo, double hi) {
    std::vector<double> v;
    v.push_back(lo);
    for (int k = 1; k <= kLevels; ++k) {
      const double step = (hi - lo) * std::ldexp(1.0, -k);
      if (step < 1024.0 * std::numeric_limits<double>::epsilon() * std::abs(hi)) break;
      const double x = hi - step;
      if (x <= v.back() || x >= hi) break;
      v.push_back(x);
    }
    v.push_back(hi);
    return v;
  };
  auto grade_left = [&](double lo, double hi) {
    std::vector<double> v;
    v.push_back(lo);
    std::vector<double> inner;
    for (int k = kLevels; k >= 1; --k) {
      const double step = (hi - lo) * std::ldexp(1.0, -k);
      if (step < 1024.0 * std::numeric_limits<double>::epsilon() * std::abs(lo)) continue;
      const double x = lo + step;
      if (x <= lo || (!inner.empty() && x <= inner.back())) continue;
      inner.push_back(x);
    }
    v.insert(v.end(), inner.begin(), inner.end());
    v.push_back(hi);
    return v;
  };
  switch (where) {
    case EndpointSingularity::none:
      return breaks;
    case EndpointSingularity::right:
      return grade_right(a, b);
    case EndpointSingularity::left:
      return grade_left(a, b);
    case EndpointSingularity::both: {
      const double m = a + 0.5 * w;
      auto left = grade_left(a, m);
      auto right = grade_right(m, b);
      left.insert(left.end(), right.begin() + 1, right.end());
      return left;
    }
  }
  return breaks;
}

}  // namespace detail

/// int_a^b f.  b may be +infinity (mapped through x = a + t/(1-t)); the
/// singular hint grades panels geometrically toward the named endpoint(s).
template <class F>
auto integrate(F&& f, double a, double b, const QuadOptions& opts = {})
    -> QuadResult<detail::quad_value_t<F>> {
  using T = detail::quad_value_t<F>;
  if (!(a < b)) throw DomainError("integrate: requires a < b");
  if (std::isinf(b)) {
    auto mapped = [&](double t) -> T {
      const double u = 1.0 - t;
      return f(a + t / u) * (1.0 / (u * u));
    };
    EndpointSingularity hint = opts.singular == EndpointSingularity::left
                                   ? EndpointSingularity::left
                                   : EndpointSingularity::none;
    QuadOptions o = opts;
    o.singular = hint;
    std::vector<double> breaks = detail::graded_breaks(0.0, 1.0, hint);
    return detail::adaptive(mapped, breaks, o);
  }
  std::vector<double> breaks = detail::graded_breaks(a, b, opts.singular);
  return detail::adaptive(f, breaks, opts);
}

/// Convenience overload with an absolute tolerance.
template <class F>
auto integrate(F&& f, double a, double b, double tol,
               EndpointSingularity singular = EndpointSingularity::none) {
  QuadOptions o;
  o.abs_tol = tol;
  o.singular = singular;
  return integrate(std::forward<F>(f), a, b, o);
}

/// int_a^b over an explicit partition (interior breakpoints at kinks or
/// near-singular features).
template <class F>
auto integrate_partitioned(F&& f, std::vector<double> breaks, double tol,
                           int max_subdivisions = 4000) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  QuadOptions o;
  o.abs_tol = tol;
  o.max_subdivisions = max_subdivisions;
  return detail::adaptive(f, breaks, o);
}

/// Weight cutoff for exponential averages: e^{-40} is below double noise.
inline constexpr double kExpWeightCutoff = 40.0;

/// int_0^inf g(w) rate e^{-rate w} dw.  Panels of width 5/rate on
/// [0, 40/rate] plus an estimated tail; `extra_breaks` adds interior
/// breakpoints where g has features.  Throws QuadratureError when g grows fast
/// enough to make the truncated tail meaningful.
template <class G>
auto integrate_exp_weight(G&& g, double rate, double tol,
                          const std::vector<double>& extra_breaks = {}) {
  using T = detail::quad_value_t<G>;
  if (!(rate > 0.0)) throw DomainError("integrate_exp_weight: rate must be positive");
  const double cutoff = kExpWeightCutoff / rate;
  std::vector<double> breaks;
  for (int k = 0; k <= 8; ++k) breaks.push_back(k * cutoff / 8.0);
  for (double x : extra_breaks) {
    if (x > 0.0 && x < cutoff) breaks.push_back(x);
  }
  auto weighted = [&](double w) -> T { return g(w) * (rate * std::exp(-rate * w)); };
  auto result = integrate_partitioned(weighted, breaks, tol);

  // Tail: for sub-exponential g, int_c^inf |g| rate e^{-rate w} ~ |g(c)| e^{-40}.
  const double gc = std::abs(g(cutoff));
  const double g2c = std::abs(g(2.0 * cutoff));
  result.evaluations += 2;
  if (g2c > std::exp(0.5 * kExpWeightCutoff) * std::max(gc, 1.0)) {
    throw QuadratureError("integrate_exp_weight: integrand growth defeats the exponential weight");
  }
  result.abs_error += 2.0 * std::max(gc, g2c) * std::exp(-kExpWeightCutoff);
  result.converged = result.abs_error <= tol;
  return result;
}

/// Cauchy principal value of int_a^b h(x)/(x - pole) dx with h smooth at the
/// pole.  The symmetric piece is folded, int_0^d (h(p+u) - h(p-u))/u du, so h
/// is never evaluated at the pole; the remainder is a regular integral.
/// b may be +infinity.
template <class H>
auto principal_value(H&& h, double pole, double a, double b, double tol) {
  using T = detail::quad_value_t<H>;
  if (!(a < pole && pole < b)) {
    throw DomainError("principal_value: pole must lie strictly inside (a, b)");
  }
  const double d = std::min(pole - a, b - pole);
  auto folded = [&](double u) -> T { return (h(pole + u) - h(pole - u)) / u; };
  auto sym = integrate(folded, 0.0, d, 0.5 * tol);
  QuadResult<T> out = sym;
  const double lo = pole + d;
  const double hi_left = pole - d;
  auto plain = [&](double x) -> T { return h(x) / (x - pole); };
  if (b > lo) {
    auto rest = integrate(plain, lo, b, 0.5 * tol);
    out.value += rest.value;
    out.abs_error += rest.abs_error;
    out.evaluations += rest.evaluations;
  } else if (hi_left > a) {
    auto rest = integrate(plain, a, hi_left, 0.5 * tol);
    out.value += rest.value;
    out.abs_error += rest.abs_error;
    out.evaluations += rest.evaluations;
  }
  out.converged = out.abs_error <= tol;
  return out;
}

}  // namespace rgas
