#pragma once

// Primes, Mobius, truncated Euler products and Dirichlet sums, and the
// occupation-number enumeration of the bosonic prime gas.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rgas/errors.hpp"
#include "rgas/numkernel.hpp"

namespace rgas {

struct PrimeTable {
  std::vector<std::int64_t> primes;
  std::int64_t limit = 0;  // every prime <= limit is present
};

/// Value together with a one-sided or symmetric bound on what was dropped.
struct Bounded {
  double value = 0.0;
  double bound = 0.0;
};

inline PrimeTable sieve(std::int64_t limit) {
  if (limit < 2) throw DomainError("sieve: limit must be >= 2");
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  PrimeTable t;
  t.limit = limit;
  for (std::int64_t n = 2; n <= limit; ++n) {
    if (composite[n]) continue;
    t.primes.push_back(n);
    for (std::int64_t m = n * n; m <= limit; m += n) composite[m] = true;
  }
  return t;
}

inline int mobius(std::int64_t n) {
  if (n < 1) throw DomainError("mobius: n must be >= 1");
  int sign = 1;
  for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  return n > 1 ? -sign : sign;
}

/// mu(1..n) by a linear sieve; entry 0 is unused.
inline std::vector<int> mobius_table(std::int64_t n) {
  std::vector<int> mu(static_cast<std::size_t>(std::max<std::int64_t>(n, 1)) + 1, 1);
  std::vector<std::int64_t> primes;
  std::vector<bool> composite(mu.size(), false);
  for (std::int64_t i = 2; i <= n; ++i) {
    if (!composite[i]) {
      primes.push_back(i);
      mu[i] = -1;
    }
    for (std::int64_t p : primes) {
      if (i * p > n) break;
      composite[i * p] = true;
      if (i % p == 0) {
        mu[i * p] = 0;
        break;
      }
      mu[i * p] = -mu[i];
    }
  }
  return mu;
}

// Each factor is (1 - p^-s)^-1.  The prime-membrane factor is sometimes
// written (1 - p)^-1, which has no s dependence and cannot reproduce the
// Euler product; we take the p^-s reading.
//
// Returned bound: zeta(s) lies in [value, value + bound].  With P the table
// limit, sum_{p>P} -ln(1 - p^-s) <= P^{1-s} / ((s-1)(1-2^-s)).
inline Bounded euler_product_bosonic(double s, const PrimeTable& table) {
  if (!(s > 1.0)) throw DomainError("euler_product_bosonic: product diverges for s <= 1");
  long double log_prod = 0.0L;
  for (std::int64_t p : table.primes) {
    log_prod -= std::log1p(-std::pow(static_cast<long double>(p), -static_cast<long double>(s)));
  }
  const double value = static_cast<double>(std::exp(log_prod));
  const double P = static_cast<double>(table.limit);
  const double tail_log = std::pow(P, 1.0 - s) / ((s - 1.0) * (1.0 - std::exp2(-s)));
  // plus a few ulps for the rounding of exp(log_prod)
  return {value, value * (std::expm1(tail_log) + 16.0 * std::numeric_limits<double>::epsilon())};
}

/// sum_{n<=N} mu(n) n^-s, truncating 1/zeta(s).
inline double dirichlet_inverse_zeta(double s, std::int64_t N) {
  if (!(s > 1.0)) throw DomainError("dirichlet_inverse_zeta: need s > 1");
  if (N < 1) throw DomainError("dirichlet_inverse_zeta: need N >= 1");
  const auto mu = mobius_table(N);
  long double sum = 0.0L;
  for (std::int64_t n = N; n >= 1; --n) {
    if (mu[n] != 0) sum += mu[n] * std::pow(static_cast<long double>(n), -static_cast<long double>(s));
  }
  return static_cast<double>(sum);
}

namespace detail {
inline void check_hagedorn(double beta_omega, const char* who) {
  if (!(beta_omega > 1.0)) {
    throw HagedornError(std::string(who) + ": beta*omega = " + std::to_string(beta_omega) +
                        " is at or beyond the Hagedorn point");
  }
}
}  // namespace detail

inline double partition_bosonic(double beta_omega) {
  detail::check_hagedorn(beta_omega, "partition_bosonic");
  return zeta(beta_omega);
}

inline double partition_parafermion(double beta_omega, int r) {
  detail::check_hagedorn(beta_omega, "partition_parafermion");
  if (r < 2) throw DomainError("partition_parafermion: r must be >= 2");
  return zeta(beta_omega) / zeta(r * beta_omega);
}

inline double partition_fermionic(double beta_omega) {
  detail::check_hagedorn(beta_omega, "partition_fermionic");
  return partition_parafermion(beta_omega, 2);
}

/// |Z_F(s) Z_B(2s) - Z_B(s)| with Z_F built from the Mobius series rather
/// than from a ratio of zeta values.
inline double mixture_identity_residual(double beta_omega, std::int64_t N) {
  detail::check_hagedorn(beta_omega, "mixture_identity_residual");
  const double zf = zeta(beta_omega) * dirichlet_inverse_zeta(2.0 * beta_omega, N);
  return std::abs(zf * zeta(2.0 * beta_omega) - zeta(beta_omega));
}

/// Occupation numbers of the prime modes, stored sparsely as
/// (prime index, count) with ascending index.
struct OccupationState {
  std::vector<std::pair<std::size_t, int>> occupations;

  double energy(double omega, const PrimeTable& table) const {
    double e = 0.0;
    for (auto [k, n] : occupations) e += n * std::log(static_cast<double>(table.primes[k]));
    return omega * e;
  }
  std::int64_t product(const PrimeTable& table) const {
    std::int64_t v = 1;
    for (auto [k, n] : occupations)
      for (int i = 0; i < n; ++i) v *= table.primes[k];
    return v;
  }
};

inline constexpr std::int64_t kMaxEnumeratedStates = 1'000'000;

namespace detail {
inline std::int64_t state_bound(double cutoff) {
  if (!(cutoff >= 0.0)) throw DomainError("state enumeration: cutoff must be >= 0");
  // exp(ln 6) may land just below 6
  const double e = std::exp(cutoff) * (1.0 + 1e-12);
  if (e > static_cast<double>(kMaxEnumeratedStates)) {
    throw DomainError("state enumeration: cutoff " + std::to_string(cutoff) +
                      " exceeds the 1e6-state guard");
  }
  return static_cast<std::int64_t>(std::floor(e));
}

template <class Visit>
void enumerate(const PrimeTable& t, std::size_t k, std::int64_t prod, std::int64_t N,
               OccupationState& st, Visit& visit) {
  visit(st, prod);
  for (std::size_t j = k; j < t.primes.size(); ++j) {
    const std::int64_t p = t.primes[j];
    if (prod * p > N) break;
    std::int64_t q = prod;
    int n = 0;
    st.occupations.emplace_back(j, 0);
    while (q * p <= N) {
      q *= p;
      st.occupations.back().second = ++n;
      enumerate(t, j + 1, q, N, st, visit);
    }
    st.occupations.pop_back();
  }
}
}  // namespace detail

/// Every occupation state with sum n_k ln p_k <= cutoff.
inline std::vector<OccupationState> enumerate_states(double cutoff, PrimeTable* table_out = nullptr) {
  const std::int64_t N = detail::state_bound(cutoff);
  const PrimeTable t = sieve(std::max<std::int64_t>(N, 2));
  std::vector<OccupationState> out;
  OccupationState st;
  auto visit = [&](const OccupationState& s, std::int64_t) { out.push_back(s); };
  detail::enumerate(t, 0, 1, N, st, visit);
  if (table_out) *table_out = t;
  return out;
}

/// sum over states below the cutoff of exp(-beta omega E); the bound is the
/// integral tail N^{1-s}/(s-1) to the full zeta(s).
inline Bounded state_enumeration_partition(double beta_omega, double cutoff) {
  detail::check_hagedorn(beta_omega, "state_enumeration_partition");
  const std::int64_t N = detail::state_bound(cutoff);
  const PrimeTable t = sieve(std::max<std::int64_t>(N, 2));
  long double sum = 0.0L;
  OccupationState st;
  auto visit = [&](const OccupationState&, std::int64_t prod) {
    sum += std::pow(static_cast<long double>(prod), -static_cast<long double>(beta_omega));
  };
  detail::enumerate(t, 0, 1, N, st, visit);
  const double s = beta_omega;
  return {static_cast<double>(sum), std::pow(static_cast<double>(N), 1.0 - s) / (s - 1.0)};
}

}  // namespace rgas
