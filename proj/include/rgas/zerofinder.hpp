#pragma once

// Ordinates of the nontrivial zeta zeros on the critical line, found by a
// Gram-point scan of Hardy's Z function, plus a small text file format for
// caching them.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rgas/errors.hpp"
#include "rgas/numkernel.hpp"

namespace rgas {

enum class ZeroSource { computed, loaded };

struct ZeroTable {
  std::vector<double> gammas;
  double abs_error = 0.0;
  ZeroSource source = ZeroSource::computed;

  std::size_t count() const { return gammas.size(); }
  std::size_t count_below(double T) const {
    return static_cast<std::size_t>(std::lower_bound(gammas.begin(), gammas.end(), T) -
                                    gammas.begin());
  }
};

struct HardyEval {
  double t = 0.0;
  double z_value = 0.0;
  double theta = 0.0;
};

inline double riemann_siegel_theta(double t) {
  if (!(t > 0.0)) throw DomainError("riemann_siegel_theta: need t > 0");
  return log_gamma(Complex{0.25, 0.5 * t}).imag() - 0.5 * t * std::log(kPi);
}

inline HardyEval hardy_eval(double t) {
  const double th = riemann_siegel_theta(t);
  const Complex z = zeta(Complex{0.5, t});
  const Complex rot = std::polar(1.0, th) * z;
  if (std::abs(rot.imag()) > 1e-9 * std::max(1.0, std::abs(z))) {
    throw AccuracyError("hardy_z: rotated zeta not real at t=" + std::to_string(t) +
                        " (imag " + std::to_string(rot.imag()) + ")");
  }
  return {t, rot.real(), th};
}

inline double hardy_z(double t) { return hardy_eval(t).z_value; }

/// (T/2pi) ln(T/2pi) - T/2pi + 7/8
inline double zero_count_estimate(double T) {
  if (!(T > 2.0 * kPi)) throw DomainError("zero_count_estimate: need T > 2 pi");
  const double x = T / (2.0 * kPi);
  return x * std::log(x) - x + 0.875;
}

namespace detail {

/// theta(g) = n pi by Newton, starting from `guess` (past the minimum of theta).
inline double gram_point(int n, double guess) {
  double t = std::max(guess, 7.0);
  for (int it = 0; it < 60; ++it) {
    const double f = riemann_siegel_theta(t) - n * kPi;
    // theta'(t) = Re psi(1/4 + it/2)/2 - ln(pi)/2
    const double d = 0.5 * digamma(Complex{0.25, 0.5 * t}).real() - 0.5 * std::log(kPi);
    const double step = f / d;
    t -= step;
    if (std::abs(step) < 1e-13 * t) break;
  }
  return t;
}

struct Sample {
  double t;
  double z;
};

inline bool sign_change(const Sample& a, const Sample& b) {
  return (a.z < 0.0) != (b.z < 0.0);
}

/// Bisection to a 1e-12 bracket, then one secant step inside it.  Returns
/// the ordinate and an error estimate.
inline std::pair<double, double> refine(Sample a, Sample b) {
  while (b.t - a.t > 1e-12) {
    const double m = 0.5 * (a.t + b.t);
    if (m <= a.t || m >= b.t) break;
    const Sample s{m, hardy_z(m)};
    if (s.z == 0.0) return {m, b.t - a.t};
    if (sign_change(a, s)) b = s; else a = s;
  }
  double x = 0.5 * (a.t + b.t);
  double slope = 0.0;
  if (b.z != a.z) {
    slope = (b.z - a.z) / (b.t - a.t);
    x = std::clamp(a.t - a.z / slope, a.t, b.t);
  }
  // residual/slope is the error the evaluation noise allows
  double err = b.t - a.t;
  if (slope != 0.0) err = std::max(err, std::abs(hardy_z(x) / slope));
  return {x, err};
}

/// Samples over [lo, hi] (already containing both ends) subdivided `pieces`
/// times per original interval.
inline std::vector<Sample> subdivide(const std::vector<Sample>& pts, int pieces) {
  std::vector<Sample> out;
  out.push_back(pts.front());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double w = (pts[i + 1].t - pts[i].t) / pieces;
    for (int k = 1; k < pieces; ++k) {
      const double t = pts[i].t + k * w;
      out.push_back({t, hardy_z(t)});
    }
    out.push_back(pts[i + 1]);
  }
  return out;
}

inline int count_changes(const std::vector<Sample>& pts) {
  int c = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) c += sign_change(pts[i], pts[i + 1]);
  return c;
}

}  // namespace detail

inline constexpr int kMaxZeros = 10000;

/// First `count` ordinates.  Gram blocks between good Gram points must hold
/// exactly as many sign changes as Gram intervals; short blocks are
/// subdivided 8x (up to three times) before giving up.
inline ZeroTable find_zeros(int count) {
  if (count < 1 || count > kMaxZeros) throw DomainError("find_zeros: count must be in [1, 10000]");
  using detail::Sample;
  ZeroTable table;
  table.source = ZeroSource::computed;
  double max_err = 1e-12;

  auto good = [](int n, double z) { return (n % 2 == 0) ? z > 0.0 : z < 0.0; };

  int n = -1;
  double g = detail::gram_point(n, 10.0);
  Sample s{g, hardy_z(g)};
  if (!good(n, s.z)) throw MissedZeroError("find_zeros: g_{-1} is not a good Gram point");

  while (static_cast<int>(table.gammas.size()) < count) {
    const int a = n;
    std::vector<Sample> block{s};
    do {
      ++n;
      g = detail::gram_point(n, g + kPi / std::max(0.1, 0.5 * std::log(g / (2.0 * kPi))));
      s = {g, hardy_z(g)};
      block.push_back(s);
      if (n - a > 200) throw MissedZeroError("find_zeros: no good Gram point within 200 intervals");
    } while (!good(n, s.z));
    const int expected = n - a;

    std::vector<Sample> grid = block;
    for (int level = 0; detail::count_changes(grid) < expected; ++level) {
      if (level == 3) {
        throw MissedZeroError("find_zeros: Gram block [" + std::to_string(block.front().t) + ", " +
                              std::to_string(block.back().t) + "] shows " +
                              std::to_string(detail::count_changes(grid)) + " sign changes, " +
                              "expected " + std::to_string(expected));
      }
      grid = detail::subdivide(grid, 8);
    }
    if (detail::count_changes(grid) > expected) {
      throw MissedZeroError("find_zeros: too many sign changes in Gram block near t=" +
                            std::to_string(block.front().t));
    }
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      if (!detail::sign_change(grid[i], grid[i + 1])) continue;
      auto [x, err] = detail::refine(grid[i], grid[i + 1]);
      table.gammas.push_back(x);
      max_err = std::max(max_err, err);
    }
    // N(g_n) = n + 1 at a good Gram point closing a Rosser block
    if (table.gammas.size() != static_cast<std::size_t>(n + 1)) {
      throw MissedZeroError("find_zeros: count below g_" + std::to_string(n) + " is " +
                            std::to_string(table.gammas.size()));
    }
    if (std::abs(zero_count_estimate(g) - static_cast<double>(n + 1)) > 1.0) {
      throw MissedZeroError("find_zeros: counting estimate disagrees at t=" + std::to_string(g));
    }
  }
  table.gammas.resize(count);
  for (std::size_t i = 1; i < table.gammas.size(); ++i) {
    if (!(table.gammas[i] > table.gammas[i - 1] + 1e-9)) {
      throw MissedZeroError("find_zeros: ordinates not separated near " +
                            std::to_string(table.gammas[i]));
    }
  }
  if (max_err > 1e-9) {
    throw AccuracyError("find_zeros: refinement error " + std::to_string(max_err) + " above 1e-9");
  }
  table.abs_error = max_err;
  return table;
}

namespace detail {

inline std::string format12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// Half a unit in the 12th significant digit of the largest ordinate.
inline double rounding_error12(const std::vector<double>& g) {
  if (g.empty()) return 0.0;
  const double top = std::abs(g.back());
  if (top == 0.0) return 0.0;
  return 0.5 * std::pow(10.0, std::floor(std::log10(top)) - 11.0);
}

}  // namespace detail

/// Header plus one ordinate per line at 12 significant digits.  The stored
/// abs_error already includes the rounding to 12 digits, so save(load(f))
/// reproduces f byte for byte.
inline void write_table(const ZeroTable& table, std::ostream& out) {
  const double err = std::max(table.abs_error, detail::rounding_error12(table.gammas));
  out << "# rgas-zeros v1 count=" << table.gammas.size() << " abs_error=" << detail::format12(err)
      << "\n";
  for (double g : table.gammas) out << detail::format12(g) << "\n";
}

inline void save_table(const ZeroTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("save_table: cannot open " + path);
  write_table(table, out);
  if (!out) throw IoError("save_table: write failed for " + path);
}

inline ZeroTable load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_table: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "empty zero table");
  std::size_t count = 0;
  double err = 0.0;
  {
    char tail = 0;
    unsigned long long c = 0;
    if (std::sscanf(line.c_str(), "# rgas-zeros v1 count=%llu abs_error=%lf %c", &c, &err, &tail) != 2 ||
        !(err >= 0.0)) {
      throw ParseError(1, "bad header, expected '# rgas-zeros v1 count=<n> abs_error=<e>'");
    }
    count = static_cast<std::size_t>(c);
  }
  ZeroTable t;
  t.source = ZeroSource::loaded;
  t.abs_error = err;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(line, &used);
    } catch (const std::exception&) {
      throw ParseError(lineno, "not a number: '" + line + "'");
    }
    if (line.find_first_not_of(" \t\r", used) != std::string::npos) {
      throw ParseError(lineno, "trailing characters: '" + line + "'");
    }
    if (!(v > 14.0)) throw ParseError(lineno, "ordinate must exceed 14");
    if (!t.gammas.empty() && !(v > t.gammas.back())) {
      throw ParseError(lineno, "ordinates not strictly increasing");
    }
    t.gammas.push_back(v);
  }
  if (t.gammas.size() != count) {
    throw ParseError(lineno, "header promises " + std::to_string(count) + " ordinates, found " +
                                 std::to_string(t.gammas.size()));
  }
  return t;
}

}  // namespace rgas
