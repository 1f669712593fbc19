#pragma once

// Sieves and arithmetic functions: k-free indicators, k-free counting,
// Euler's totient and the Dirichlet coefficients a_l and h_l.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace ratpow {

/// Rejects exponent pairs the counting problem is not defined for:
/// integer powers (k < 2) and fractions not in lowest terms.
inline void validate_exponent(long j, long k) {
  if (j < 1) throw DomainError("j must be >= 1");
  if (k < 2) throw DomainError("k must be >= 2 (integer powers are not allowed)");
  if (std::gcd(j, k) != 1) throw DomainError("j/k must be in lowest terms");
}

using Factorization = std::vector<std::pair<std::uint64_t, unsigned>>;

inline Factorization factorize(std::uint64_t n) {
  Factorization out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::uint64_t upow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

/// Largest r >= 0 with r^e <= n.
inline std::uint64_t iroot(std::uint64_t n, unsigned e) {
  if (e == 1 || n < 2) return n;
  auto r = static_cast<std::uint64_t>(std::pow(static_cast<double>(n), 1.0 / e));
  auto fits = [&](std::uint64_t c) {
    unsigned __int128 acc = 1;
    for (unsigned i = 0; i < e; ++i) {
      acc *= c;
      if (acc > n) return false;
    }
    return true;
  };
  while (r > 0 && !fits(r)) --r;
  while (fits(r + 1)) ++r;
  return r;
}

inline bool is_kfree(long k, long n) {
  if (k < 2) throw DomainError("is_kfree: k must be >= 2");
  if (n < 1) throw DomainError("is_kfree: n must be >= 1");
  for (auto [p, e] : factorize(static_cast<std::uint64_t>(n)))
    if (e >= static_cast<unsigned>(k)) return false;
  return true;
}

/// Jump convention for step functions evaluated exactly at a jump.
enum class QConvention { RightContinuous, Midpoint };

/// The exact value base^(num/den) for a nonnegative rational base. Only
/// its floor and integrality are ever needed, and both are decided with
/// integer arithmetic.
struct RationalRoot {
  Rational base;
  unsigned num = 1;
  unsigned den = 1;

  /// Largest N >= 0 with N^den <= base^num.
  BigInt floor() const {
    if (base <= 0) return 0;
    const BigInt p = ipow(base.get_num(), num);
    const BigInt q = ipow(base.get_den(), num);
    // N^den * q <= p
    double approx = std::pow(base.get_d(), static_cast<double>(num) / den);
    BigInt n = approx > 1e300 ? BigInt(0) : BigInt(std::floor(approx));
    auto fits = [&](const BigInt& c) { return ipow(c, den) * q <= p; };
    while (n > 0 && !fits(n)) --n;
    while (fits(n + 1)) ++n;
    return n;
  }

  bool is_integer() const {
    if (base <= 0) return base == 0;
    BigInt n = floor();
    return ipow(n, den) * ipow(base.get_den(), num) == ipow(base.get_num(), num);
  }
};

namespace detail {
inline BigInt floor_of(const Rational& x) { return ratpow::floor(x); }
inline bool integral(const Rational& x) { return ratpow::is_integer(x); }
inline BigInt floor_of(const RationalRoot& x) { return x.floor(); }
inline bool integral(const RationalRoot& x) { return x.is_integer(); }
}  // namespace detail

/// Flags of k-free integers up to a limit, with prefix counts. The sieve
/// grows segment by segment so that repeated counting queries at
/// increasing arguments share one pass.
class KfreeSieve {
 public:
  explicit KfreeSieve(unsigned k, std::uint64_t limit = 1) : k_(k) {
    if (k < 2) throw DomainError("KfreeSieve: k must be >= 2");
    flags_.push_back(0);
    counts_.push_back(0);
    extend(std::max<std::uint64_t>(limit, 1));
  }

  unsigned k() const { return k_; }
  std::uint64_t limit() const { return flags_.size() - 1; }

  /// Sieves the segment (limit, new_limit].
  void extend(std::uint64_t new_limit) {
    const std::uint64_t lo = limit() + 1;
    if (new_limit < lo) return;
    if (new_limit > (std::uint64_t{1} << 33)) throw BudgetError("KfreeSieve: limit too large");
    const std::uint64_t seg = new_limit - lo + 1;
    std::vector<std::uint8_t> seg_flags(seg, 1);
    const std::uint64_t pmax = iroot(new_limit, k_);
    std::vector<std::uint8_t> composite(pmax + 1, 0);
    for (std::uint64_t p = 2; p <= pmax; ++p) {
      if (composite[p]) continue;
      for (std::uint64_t q = p * p; q <= pmax; q += p) composite[q] = 1;
      const std::uint64_t pk = upow(p, k_);
      for (std::uint64_t m = (lo + pk - 1) / pk * pk; m <= new_limit; m += pk) seg_flags[m - lo] = 0;
    }
    flags_.reserve(new_limit + 1);
    counts_.reserve(new_limit + 1);
    for (std::uint64_t i = 0; i < seg; ++i) {
      flags_.push_back(seg_flags[i]);
      counts_.push_back(counts_.back() + seg_flags[i]);
    }
  }

  bool is_kfree(std::uint64_t n) {
    if (n == 0) return false;
    if (n > limit()) extend(grow_to(n));
    return flags_[n] != 0;
  }

  /// Number of k-free integers in [1, n].
  std::uint64_t count(std::uint64_t n) {
    if (n > limit()) extend(grow_to(n));
    return counts_[n];
  }

  /// Q_k(x) for an exact threshold x (Rational or RationalRoot).
  template <class Threshold>
  Rational q_count(const Threshold& x, QConvention conv) {
    const BigInt n = detail::floor_of(x);
    if (n <= 0) return 0;
    const std::uint64_t nn = to_u64(n);
    Rational out(from_u64(count(nn)));
    if (conv == QConvention::Midpoint && detail::integral(x) && is_kfree(nn)) out -= Rational(1, 2);
    return out;
  }

 private:
  std::uint64_t grow_to(std::uint64_t n) const { return std::max(n, 2 * limit()); }

  unsigned k_;
  std::vector<std::uint8_t> flags_;
  std::vector<std::uint64_t> counts_;
};

/// Q_k(x): number of k-free n <= x, with a half-jump at k-free integer x
/// under the midpoint convention.
template <class Threshold>
Rational q_count(unsigned k, const Threshold& x, QConvention conv) {
  const BigInt n = detail::floor_of(x);
  KfreeSieve sieve(k, n > 1 ? to_u64(n) : 1);
  return sieve.q_count(x, conv);
}

inline std::uint64_t totient(std::uint64_t n) {
  if (n < 1) throw DomainError("totient: n must be >= 1");
  std::uint64_t out = n;
  for (auto [p, e] : factorize(n)) out = out / p * (p - 1);
  return out;
}

/// h_l = sum_{d | m} d*phi(d) where l = n*m^2 with n square-free.
inline std::uint64_t h_coeff(std::uint64_t l) {
  if (l < 1) throw DomainError("h_coeff: l must be >= 1");
  std::uint64_t out = 1;
  for (auto [p, e] : factorize(l)) {
    // sum_{i=0}^{f} p^i phi(p^i), f = floor(e/2)
    std::uint64_t term = 1, pw = 1;
    for (unsigned i = 1; i <= e / 2; ++i) {
      pw *= p;
      term += pw * (pw / p) * (p - 1);
    }
    out *= term;
  }
  return out;
}

/// a_l = 1/m when l = m^k n^j with n k-free, 0 otherwise.
///
/// Per prime p^e of l the exponent must split as e = k*a + j*b with
/// 0 <= b < k; gcd(j,k)=1 fixes b = e * j^{-1} mod k, and the split exists
/// iff j*b <= e.
inline Rational a_coeff(long j, long k, std::uint64_t l) {
  validate_exponent(j, k);
  if (l < 1) throw DomainError("a_coeff: l must be >= 1");
  long jinv = 1;
  while ((jinv * j) % k != 1) ++jinv;
  std::uint64_t m = 1;
  for (auto [p, e] : factorize(l)) {
    const long b = (static_cast<long>(e % k) * jinv) % k;
    if (j * b > static_cast<long>(e)) return 0;
    m *= upow(p, static_cast<unsigned>((e - j * b) / k));
  }
  return Rational(from_u64(1), from_u64(m));
}

/// Table of m such that a_l = 1/m (0 where a_l = 0) for l in [0, limit],
/// built by enumerating the pairs (m, n) directly.
inline std::vector<std::uint32_t> a_coeff_table(long j, long k, std::uint64_t limit) {
  validate_exponent(j, k);
  std::vector<std::uint32_t> out(limit + 1, 0);
  KfreeSieve sieve(static_cast<unsigned>(k), limit);
  for (std::uint64_t m = 1; upow(m, static_cast<unsigned>(k)) <= limit; ++m) {
    const std::uint64_t mk = upow(m, static_cast<unsigned>(k));
    const std::uint64_t nmax = iroot(limit / mk, static_cast<unsigned>(j));
    for (std::uint64_t n = 1; n <= nmax; ++n)
      if (sieve.is_kfree(n)) out[mk * upow(n, static_cast<unsigned>(j))] = static_cast<std::uint32_t>(m);
  }
  return out;
}

/// Table of h_l for l in [0, limit] (entry 0 unused), built from the
/// square-free decomposition l = n*m^2.
inline std::vector<std::uint64_t> h_coeff_table(std::uint64_t limit) {
  const std::uint64_t mmax = iroot(limit, 2);
  std::vector<std::uint64_t> phi(mmax + 1);
  std::iota(phi.begin(), phi.end(), 0);
  for (std::uint64_t p = 2; p <= mmax; ++p)
    if (phi[p] == p)
      for (std::uint64_t q = p; q <= mmax; q += p) phi[q] -= phi[q] / p;
  std::vector<std::uint64_t> g(mmax + 1, 0);
  for (std::uint64_t d = 1; d <= mmax; ++d)
    for (std::uint64_t q = d; q <= mmax; q += d) g[q] += d * phi[d];
  std::vector<std::uint64_t> out(limit + 1, 0);
  KfreeSieve sieve(2, limit);
  for (std::uint64_t m = 1; m <= mmax; ++m)
    for (std::uint64_t n = 1; n * m * m <= limit; ++n)
      if (sieve.is_kfree(n)) out[n * m * m] = g[m];
  return out;
}

}  // namespace ratpow
