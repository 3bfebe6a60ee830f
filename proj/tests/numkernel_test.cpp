#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rgas/numkernel.hpp"

namespace rgas {
namespace {

constexpr double kPi2Over6 = 1.6449340668482264365;

void expect_complex_near(Complex got, Complex want, double tol) {
  EXPECT_NEAR(got.real(), want.real(), tol) << "got " << got << " want " << want;
  EXPECT_NEAR(got.imag(), want.imag(), tol) << "got " << got << " want " << want;
}

TEST(Zeta, ClassicalValues) {
  EXPECT_NEAR(zeta(2.0), kPi2Over6, 1e-14);
  EXPECT_NEAR(zeta(0.0), -0.5, 1e-14);
  EXPECT_NEAR(zeta(0.5), -1.4603545088095868, 1e-13);
  EXPECT_NEAR(zeta(4.0), std::pow(kPi, 4) / 90.0, 1e-14);
  EXPECT_NEAR(zeta(-1.0), -1.0 / 12.0, 1e-14);
  EXPECT_NEAR(zeta(-2.0), 0.0, 1e-14);
}

TEST(Zeta, NearFirstZero) {
  EXPECT_LT(std::abs(zeta(Complex{0.5, 14.134725})), 1e-5);
}

// Reference values from mpmath at 30 digits.
TEST(Zeta, ComplexReferenceValues) {
  expect_complex_near(zeta(Complex{3, 4}), {0.89055490696507325815, -0.0080759454243272598468},
                      1e-13);
  expect_complex_near(zeta(Complex{-2.5, 1}),
                      {0.023593610586379648604, 0.0014077996058383770388}, 1e-13);
  expect_complex_near(zeta(Complex{0.5, 100}), {2.6926198856813240905, -0.020386029602598161771},
                      1e-12);
  expect_complex_near(zeta_derivative(Complex{-2.5, 1}),
                      {0.015897450369286376789, -0.026780027659161950767}, 1e-12);
  expect_complex_near(zeta_derivative(Complex{0.5, 100}),
                      {-3.7273127096446482387, -0.19422870257374323338}, 1e-11);
}

TEST(Zeta, PoleIsSignalled) {
  EXPECT_THROW(zeta(1.0), PoleError);
  EXPECT_THROW(zeta_derivative(1.0), PoleError);
  EXPECT_THROW(zeta_log_derivative(Complex{1.0, 0.0}), PoleError);
}

TEST(Zeta, InsufficientTermsIsAccuracyError) {
  EvalOptions opts;
  opts.max_terms = 16;
  EXPECT_THROW(zeta(Complex{0.5, 500.0}, opts), AccuracyError);
}

TEST(Zeta, SchwarzReflection) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> re(-3.0, 4.0), im(-60.0, 60.0);
  for (int i = 0; i < 40; ++i) {
    const Complex s{re(rng), im(rng)};
    if (std::abs(s - 1.0) < 1e-3) continue;
    const Complex a = zeta(std::conj(s));
    const Complex b = std::conj(zeta(s));
    EXPECT_LE(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(a))) << s;
  }
}

TEST(Zeta, FunctionalEquationResidualOnStripGrid) {
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 10; ++j) {
      const Complex s{0.1 + 0.2 * i, -30.0 + 60.0 * j / 9.0};
      const Complex lhs =
          std::exp(-0.5 * s * std::log(kPi) + log_gamma(0.5 * s)) * zeta(s);
      const Complex w = 1.0 - s;
      const Complex rhs =
          std::exp(-0.5 * w * std::log(kPi) + log_gamma(0.5 * w)) * zeta(w);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(Zeta, ErrorEstimateBoundsTrueError) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> re(0.05, 3.0), im(-200.0, 200.0);
  for (int i = 0; i < 20; ++i) {
    const Complex s{re(rng), im(rng)};
    const long n = detail::initial_cutoff(s);
    const auto coarse = detail::euler_maclaurin(s, 1.0, n, false);
    const auto fine = detail::euler_maclaurin(s, 1.0, 4 * n, false);
    const Complex zc = coarse.head + coarse.power / (s - 1.0);
    const Complex zf = fine.head + fine.power / (s - 1.0);
    EXPECT_LE(std::abs(zc - zf), coarse.error + fine.error) << s;
  }
}

TEST(ZetaDerivative, AgainstDirichletOracle) {
  EXPECT_NEAR(zeta_derivative(2.0), oracle::zeta_prime_at_2(), 1e-11);
  EXPECT_NEAR(zeta_derivative(2.0), -0.93754825431584375370, 1e-13);
}

TEST(ZetaDerivative, AtZeroIsMinusHalfLog2Pi) {
  EXPECT_NEAR(zeta_derivative(0.0), -0.5 * kLn2Pi, 1e-13);
  const double h = 1e-5;
  const double fd = (zeta(h) - zeta(-h)) / (2 * h);
  EXPECT_NEAR(zeta_derivative(0.0), fd, 1e-8);
  // zeta'(0)/zeta(0) = ln 2 pi; the Hadamard constant is built from it.
  EXPECT_NEAR(zeta_derivative(0.0) / zeta(0.0), kLn2Pi, 1e-13);
}

TEST(ZetaDerivative, CentralDifferenceAtThree) {
  const double h = 1e-5;
  const double fd = (zeta(3.0 + h) - zeta(3.0 - h)) / (2 * h);
  EXPECT_LE(std::abs(zeta_derivative(3.0) - fd), 1e-8);
}

TEST(ZetaDerivative, ComplexFiniteDifference) {
  for (Complex s : {Complex{0.3, 7.0}, Complex{-1.7, 3.0}, Complex{2.5, -15.0}}) {
    const double h = 1e-5;
    const Complex fd = (zeta(s + h) - zeta(s - h)) / (2 * h);
    const Complex d = zeta_derivative(s);
    EXPECT_LE(std::abs(d - fd), 1e-8 * std::max(1.0, std::abs(d))) << s;
  }
}

TEST(LogZeta, PrincipalBranch) {
  const Complex two = log_zeta_principal(Complex{2.0, 0.0});
  EXPECT_NEAR(two.real(), std::log(kPi2Over6), 1e-14);
  EXPECT_EQ(two.imag(), 0.0);

  const Complex half = log_zeta_principal(Complex{0.5, 0.0});
  EXPECT_NEAR(half.real(), std::log(1.4603545088095868), 1e-13);
  EXPECT_EQ(half.imag(), kPi);
}

TEST(LogZeta, ImaginaryPartIsExactlyPiInsideCriticalInterval) {
  for (int i = 1; i <= 99; ++i) {
    const double s = 0.01 * i;
    EXPECT_EQ(log_zeta_principal(Complex{s, 0.0}).imag(), kPi) << s;
  }
}

TEST(LogZeta, LogarithmicSingularityAtOne) {
  // ln zeta(s) = -ln|s-1| + gamma (s-1) + O((s-1)^2) on both sides
  for (double d : {1e-3, 1e-6, 1e-9}) {
    const double sr = 1.0 + d, sl = 1.0 - d;
    const double right = log_zeta_principal(Complex{sr, 0.0}).real();
    const double left = log_zeta_principal(Complex{sl, 0.0}).real();
    EXPECT_NEAR(right, -std::log(sr - 1.0), 2.0 * d);
    EXPECT_NEAR(left, -std::log(1.0 - sl), 2.0 * d);
  }
}

TEST(LogDerivative, ResidueAtOne) {
  const double s = 1.0 + 1e-6;
  EXPECT_NEAR((s - 1.0) * zeta_log_derivative(Complex{s, 0.0}).real(), -1.0, 1e-4);
}

TEST(LogDerivative, AgainstVonMangoldtOracle) {
  const double direct = zeta_log_derivative(Complex{2.0, 0.0}).real();
  EXPECT_NEAR(direct, -0.56996099309453280640, 1e-13);
  // prime-power sum to 2e5; PNT tail error is O(1/sqrt N)
  EXPECT_NEAR(direct, -oracle::minus_log_derivative(2.0, 200000), 2e-3);
}

TEST(LogDerivative, RegularPartMatchesQuotientAwayFromPole) {
  for (double s : {0.2, 0.7, 1.3, 2.0, 5.0}) {
    const double q = zeta_log_derivative(Complex{s, 0.0}).real() + 1.0 / (s - 1.0);
    EXPECT_NEAR(zeta_log_derivative_regular(s), q, 1e-12) << s;
  }
  EXPECT_NEAR(zeta_log_derivative_regular(1.0), kEulerGamma, 1e-13);
}

TEST(Hurwitz, ReducesToRiemannAndHalfShift) {
  expect_complex_near(hurwitz_zeta(Complex{2, 0}, 1.0), {kPi2Over6, 0}, 1e-14);
  expect_complex_near(hurwitz_zeta(Complex{2, 0}, 0.5), {kPi * kPi / 2.0, 0}, 1e-13);
  expect_complex_near(hurwitz_zeta(Complex{2.5, 1}, 0.3),
                      {7.8528807052013212265, 18.593143534318558879}, 1e-12);
  EXPECT_NEAR(hurwitz_zeta(Complex{-1.5, 0}, 2.5).real(), -2.1741958753289288779, 1e-11);
  EXPECT_NEAR(hurwitz_zeta(Complex{0.5, 0}, 0.7).real(), -1.0105365599351244428, 1e-13);
}

TEST(Hurwitz, ShiftIdentity) {
  for (double q : {0.25, 0.9, 2.3}) {
    for (Complex z : {Complex{2, 1}, Complex{0.4, -3}, Complex{3.5, 0}}) {
      const Complex lhs = hurwitz_zeta(z, q);
      const Complex rhs = hurwitz_zeta(z, q + 1.0) + std::exp(-z * std::log(q));
      EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST(Hurwitz, FinitePartAtPole) {
  EXPECT_NEAR(hurwitz_finite_part(1.0), 0.5772157, 5e-8);
  EXPECT_NEAR(hurwitz_finite_part(0.5), 1.9635100260214235, 1e-13);
  EXPECT_THROW(hurwitz_zeta(Complex{1, 0}, 0.5), PoleError);
  EXPECT_THROW(hurwitz_finite_part(0.0), DomainError);
}

TEST(Hurwitz, FinitePartRichardsonExtrapolation) {
  const double q = 2.0;
  auto sym = [&](double d) {
    const double up = hurwitz_zeta(Complex{1 + d, 0}, q).real() - 1.0 / d;
    const double dn = hurwitz_zeta(Complex{1 - d, 0}, q).real() + 1.0 / d;
    return 0.5 * (up + dn);  // even in d: error O(d^2)
  };
  const double d = 1e-2;
  const double extrapolated = (4.0 * sym(d / 2) - sym(d)) / 3.0;
  EXPECT_LE(std::abs(hurwitz_finite_part(q) - extrapolated), 1e-8);
  const double s = 1.0 + 1e-7;
  EXPECT_NEAR(hurwitz_zeta(Complex{s, 0}, 1.0).real() - 1.0 / (s - 1.0), kEulerGamma, 1e-6);
}

TEST(Digamma, Values) {
  EXPECT_NEAR(digamma(1.0), -0.577215, 1e-6);
  EXPECT_NEAR(digamma(1.0), -kEulerGamma, 1e-15);
  EXPECT_NEAR(digamma(2.0), 1.0 - kEulerGamma, 1e-15);
  // duplication formula: psi(1/2) = -gamma - 2 ln 2
  EXPECT_NEAR(digamma(0.5), -kEulerGamma - 2.0 * std::log(2.0), 1e-14);
  EXPECT_THROW(digamma(0.0), DomainError);
  EXPECT_THROW(digamma(-1.5), DomainError);
}

TEST(Digamma, Recurrence) {
  for (double x = 0.013; x < 40.0; x *= 1.37) {
    EXPECT_NEAR(digamma(x + 1.0), digamma(x) + 1.0 / x, 1e-12 * std::max(1.0, 1.0 / x)) << x;
  }
  const Complex z{0.3, 4.0};
  EXPECT_LE(std::abs(digamma(z + 1.0) - digamma(z) - 1.0 / z), 1e-13);
}

TEST(LogGamma, Values) {
  EXPECT_NEAR(log_gamma(Complex{5, 0}).real(), std::log(24.0), 1e-14);
  EXPECT_NEAR(log_gamma(Complex{0.5, 0}).real(), 0.5 * std::log(kPi), 1e-14);
  expect_complex_near(log_gamma(Complex{0.3, 20}),
                      {-31.096116950263604610, 39.601569651285237051}, 1e-12);
  expect_complex_near(log_gamma(Complex{-2.5, 0.5}),
                      {-0.93508562129827747868, -8.8709628852474591986}, 1e-12);
  EXPECT_THROW(log_gamma(Complex{-3, 0}), PoleError);
  EXPECT_THROW(log_gamma(Complex{0, 0}), PoleError);
}

TEST(LogGamma, RecurrenceRelative) {
  for (Complex s : {Complex{0.2, 0.1}, Complex{3.3, -7}, Complex{-4.4, 2}, Complex{12, 30}}) {
    const Complex ratio = std::exp(log_gamma(s + 1.0) - log_gamma(s));
    EXPECT_LE(std::abs(ratio - s) / std::abs(s), 1e-12) << s;
  }
}

TEST(ExpIntegral, Values) {
  EXPECT_NEAR(exp_integral_ei(1.0), 1.8951178163559367555, 1e-14);
  EXPECT_NEAR(exp_integral_ei(0.25), -0.54254326466191372953, 1e-14);
  EXPECT_NEAR(exp_integral_ei(0.25), oracle::ei_power_series(0.25), 1e-14);
  EXPECT_NEAR(exp_integral_ei(-1.0), -0.21938393439552027368, 1e-14);
  EXPECT_NEAR(exp_integral_ei(-0.5), -0.55977359477616081175, 1e-14);
  EXPECT_NEAR(exp_integral_ei(10.0) / 2492.2289762418777591, 1.0, 1e-14);
  EXPECT_NEAR(exp_integral_ei(50.0) / 105856368971316909630.6, 1.0, 1e-13);
  EXPECT_NEAR(exp_integral_ei(-40.0) / -1.0367732614516569722e-19, 1.0, 1e-13);
  EXPECT_THROW(exp_integral_ei(0.0), PoleError);
}

TEST(ExpIntegral, CrossoverContinuity) {
  const double below = exp_integral_ei(32.0);
  const double above = exp_integral_ei(std::nextafter(32.0, 64.0));
  EXPECT_NEAR(above / below, 1.0, 1e-12);
}

TEST(ExpIntegral, Slope) {
  const double x = 2.0, h = 1e-5;
  const double fd = (exp_integral_ei(x + h) - exp_integral_ei(x - h)) / (2 * h);
  EXPECT_NEAR(fd, std::exp(x) / x, 1e-6);
}

TEST(EvalOptions, Validation) {
  EvalOptions bad;
  bad.target_abs_error = 1e-16;
  EXPECT_THROW(zeta(Complex{2, 0}, bad), DomainError);
  bad = {};
  bad.max_terms = 4;
  EXPECT_THROW(zeta(Complex{2, 0}, bad), DomainError);
}

}  // namespace
}  // namespace rgas
