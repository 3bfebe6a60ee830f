// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rgas/rgas.hpp"

namespace {

using rgas::Complex;
using rgas::kPi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

int failures = 0;

void criterion(int id, const char* name, double seconds_allowed, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("threw: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (dt > seconds_allowed) {
    o.pass = false;
    o.detail += fmt(" [over time budget %.0f s]", seconds_allowed);
  }
  if (!o.pass) ++failures;
  std::printf("%s %2d %-30s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), dt);
  std::fflush(stdout);
}

const rgas::ZeroTable& zeros1000() {
  static const rgas::ZeroTable t = rgas::find_zeros(1000);
  return t;
}

}  // namespace

int main() {
  criterion(1, "kernel accuracy", 1.0, [] {
    double worst = 0.0;
    auto acc = [&](double got, double want) { worst = std::max(worst, std::abs(got - want)); };
    acc(rgas::zeta(2.0), kPi * kPi / 6.0);
    acc(rgas::zeta(0.0), -0.5);
    acc(rgas::zeta(0.5), -1.46035450880958681289);
    acc(rgas::digamma(1.0), -0.57721566490153286061);
    acc(rgas::exp_integral_ei(1.0), 1.89511781635593675547);
    // -0.577215 is -gamma truncated (not rounded) to six places: one unit in the last place
    const double printed = std::abs(rgas::digamma(1.0) - (-0.577215));
    return Outcome{worst <= 1e-9 && printed < 1e-6,
                   fmt("max err %.2e, psi(1) vs -0.577215: %.1e", worst, printed)};
  });

  criterion(2, "functional equation", 5.0, [] {
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      for (int k = 0; k < 10; ++k) {
        const Complex s{0.1 + 0.2 * i, -30.0 + 60.0 * k / 9.0};
        const Complex w = 1.0 - s;
        // pi^{-s/2} Gamma(s/2) zeta(s) is symmetric under s -> 1-s
        const Complex lhs = std::exp(-0.5 * s * std::log(kPi) + rgas::log_gamma(0.5 * s)) * rgas::zeta(s);
        const Complex rhs = std::exp(-0.5 * w * std::log(kPi) + rgas::log_gamma(0.5 * w)) * rgas::zeta(w);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
    return Outcome{worst <= 1e-10, fmt("max residual %.2e on 50 points", worst)};
  });

  criterion(3, "mixture identity", 5.0, [] {
    // Z_F from the Mobius series for 1/zeta(2s), compared to Z_B(s)/Z_B(2s)
    const auto mu = rgas::mobius_table(100000);
    double inv = 0.0;
    for (long n = 100000; n >= 1; --n) inv += mu[n] * std::pow(static_cast<double>(n), -4.0);
    const double zf = rgas::partition_bosonic(2.0) * inv;
    const double res = std::abs(zf * rgas::partition_bosonic(4.0) - rgas::partition_bosonic(2.0));
    const double lib = rgas::mixture_identity_residual(2.0, 100000);
    return Outcome{res <= 1e-4 && lib <= 1e-4, fmt("residual %.2e (library route %.2e)", res, lib)};
  });

  criterion(4, "zero finder", 30.0, [] {
    const auto t = rgas::find_zeros(200);
    const double e1 = std::abs(t.gammas[0] - 14.134725);
    const double e2 = std::abs(t.gammas[1] - 21.022040);
    const std::size_t n100 = t.count_below(100.0);
    double audit = 0.0;
    for (double T : {50.0, 100.0, 200.0}) {
      audit = std::max(audit, std::abs(static_cast<double>(t.count_below(T)) -
                                       std::round(rgas::zero_count_estimate(T))));
    }
    return Outcome{e1 <= 1e-6 && e2 <= 1e-6 && n100 == 29 && audit <= 1.0,
                   fmt("g1 err %.1e, g2 err %.1e, N(100)=%.0f, audit max %.0f", e1, e2,
                       static_cast<double>(n100), audit)};
  });

  criterion(5, "superzeta constant", 60.0, [] {
    rgas::SuperzetaParams p;
    p.zeros = &zeros1000();
    const auto s = rgas::sum_inverse_rho(p);
    const double closed = 1.0 + 0.5 * 0.57721566490153286061 - 0.5 * std::log(4.0 * kPi);
    const double e_printed = std::abs(s.value - 0.0230957);
    const double e_closed = std::abs(s.value - closed);
    return Outcome{e_printed <= 1e-5 && e_closed <= 1e-5 && e_closed <= s.bound(),
                   fmt("G2(1,1/2) = %.10f, vs closed form %.1e (bound %.1e)", s.value, e_closed,
                       s.bound())};
  });

  criterion(6, "expansion vs direct", 10.0, [] {
    rgas::SuperzetaParams p;
    p.zeros = &zeros1000();
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> re(1.5, 6.0), im(-25.0, 25.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Complex s{re(rng), im(rng)};
      const auto ex = rgas::zeta_log_derivative_expansion(s, p);
      worst = std::max(worst, std::abs(ex.value - rgas::zeta_log_derivative(s)));
    }
    return Outcome{worst <= 1e-6, fmt("max |expansion - direct| %.2e over 20 points", worst)};
  });

  criterion(7, "central energy contract", 60.0, [] {
    double worst = 0.0;
    for (double beta : {0.5, 1.0, 2.0}) {
      for (double lambda : {1.0, 3.0}) {
        const auto b = rgas::energy_breakdown(rgas::EnsembleSpec::continuum(lambda), beta, zeros1000());
        worst = std::max(worst, std::abs(b.total - b.oracle) / std::abs(b.oracle));
      }
    }
    return Outcome{worst <= 1e-6, fmt("max relative |sum eps_i - oracle| %.2e on 6 points", worst)};
  });

  criterion(8, "complex free energy", 10.0, [] {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(0.2, 5.0);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double beta = u(rng), lambda = u(rng);
      const Complex f = rgas::free_energy_continuum(rgas::EnsembleSpec::continuum(lambda), beta);
      worst = std::max(worst, std::abs(f.imag() + (kPi / beta) * (1.0 - std::exp(-lambda / beta))));
    }
    return Outcome{worst <= 1e-8, fmt("max |Im f - closed form| %.2e at 10 points", worst)};
  });

  criterion(9, "hagedorn behavior", 1.0, [] {
    const auto spec = rgas::EnsembleSpec::discrete({1.0, 2.5}, {0.6, 0.4});
    std::vector<double> grid;
    for (int i = 1; i <= 40; ++i) grid.push_back(0.05 * i);
    grid.push_back(1.0);
    grid.push_back(1.0 + 1e-12);
    bool exact = true;
    for (const auto& r : rgas::hagedorn_scan(spec, grid)) exact = exact && (r.divergent == (r.beta <= 1.0));
    const double beta = 1.0 + 1e-4;
    const double asym = -(0.6 / beta) * std::log(1.0 / (beta - 1.0));
    const double ratio = rgas::free_energy_discrete(spec, beta) / asym;
    return Outcome{exact && std::abs(ratio - 1.0) <= 0.05,
                   std::string(exact ? "flags exact" : "flags WRONG") +
                       fmt(", f/asymptote at beta-1=1e-4: %.4f", ratio)};
  });

  criterion(10, "thermodynamic identity", 30.0, [] {
    const auto spec = rgas::EnsembleSpec::continuum(1.0);
    auto re_f = [&](double b) { return rgas::free_energy_continuum(spec, b, 1e-12).real(); };
    double worst = 0.0;
    for (int i = 0; i < 16; ++i) {
      const double beta = 0.5 + 3.5 * i / 15.0;
      const auto p = rgas::thermo_point(spec, beta);
      // s = beta^2 d(Re f)/d beta, from the free energy alone
      const double h = 1e-3 * beta;
      const double df =
          (-re_f(beta + 2 * h) + 8 * re_f(beta + h) - 8 * re_f(beta - h) + re_f(beta - 2 * h)) / (12 * h);
      worst = std::max(worst, std::abs(beta * (p.eps - p.f.real()) - beta * beta * df));
    }
    return Outcome{worst <= 1e-6, fmt("max |beta(eps - Re f) - beta^2 dRe f/dbeta| %.2e, 16 points", worst)};
  });

  criterion(11, "paper-mode report", 10.0, [] {
    std::string report;
    bool finite = true;
    for (auto [beta, lambda] : {std::pair{1.0, 1.0}, {2.0, 1.0}, {1.0, 3.0}, {0.5, 2.0}}) {
      const auto b = rgas::energy_breakdown(rgas::EnsembleSpec::continuum(lambda), beta, zeros1000());
      finite = finite && std::isfinite(b.thermal_part_deviation) && std::isfinite(b.thermal_part_paper);
      report += fmt(" (%g,%g):%+.4f", beta, lambda, b.thermal_part_deviation);
    }
    return Outcome{finite, "printed form - (oracle - eps_A):" + report};
  });

  std::printf("%s: %d of 11 criteria failed\n", failures == 0 ? "OK" : "FAILED", failures);
  return failures == 0 ? 0 : 1;
}
