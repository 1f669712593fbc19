#pragma once

// Exact elements of the additive monoid generated by n^(j/k), n k-free, as
// coefficient vectors over that basis, with certified real evaluation.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "bigfloat.hpp"
#include "errors.hpp"
#include "rational.hpp"

namespace ratpow {

/// Exponent pair j/k, validated on construction.
struct Exponent {
  int j = 1;
  int k = 2;

  Exponent() = default;
  Exponent(long j_, long k_) : j(static_cast<int>(j_)), k(static_cast<int>(k_)) { validate_exponent(j_, k_); }

  double value() const { return static_cast<double>(j) / k; }
  friend bool operator==(const Exponent&, const Exponent&) = default;
  friend auto operator<=>(const Exponent&, const Exponent&) = default;
};

/// Writes u^j = m^k * r with r k-free, so that u^(j/k) = m * r^(1/k).
struct ReducedPower {
  std::uint64_t coef;
  std::uint64_t base;
  friend bool operator==(const ReducedPower&, const ReducedPower&) = default;
};

inline ReducedPower reduce_power(std::uint64_t u, long j, long k) {
  validate_exponent(j, k);
  if (u < 1) throw DomainError("reduce_power: u must be >= 1");
  ReducedPower out{1, 1};
  for (auto [p, e] : factorize(u)) {
    const std::uint64_t ej = static_cast<std::uint64_t>(e) * j;
    out.coef *= upow(p, static_cast<unsigned>(ej / k));
    out.base *= upow(p, static_cast<unsigned>(ej % k));
  }
  return out;
}

/// Nonnegative integer combination sum_n m_n * n^(j/k) over k-free n. The
/// empty combination is zero.
class RadicalCombo {
 public:
  struct Term {
    std::uint64_t base;
    std::uint64_t coef;
    friend bool operator==(const Term&, const Term&) = default;
    friend auto operator<=>(const Term&, const Term&) = default;
  };

  RadicalCombo() = default;
  explicit RadicalCombo(Exponent e) : exp_(e) {}

  /// coef * base^(j/k); base must be k-free.
  static RadicalCombo single(Exponent e, std::uint64_t base, std::uint64_t coef = 1) {
    if (coef == 0) return RadicalCombo(e);
    if (base < 1 || !is_kfree(e.k, static_cast<long>(base)))
      throw DomainError("RadicalCombo: base " + std::to_string(base) + " is not k-free");
    RadicalCombo c(e);
    c.terms_.push_back({base, coef});
    c.approx_ = static_cast<double>(coef) * term_value(e, base);
    return c;
  }

  /// u^(j/k) for any positive integer u, routed to its canonical k-free base.
  static RadicalCombo power_of(Exponent e, std::uint64_t u) {
    if (u < 1) throw DomainError("RadicalCombo: u must be >= 1");
    std::uint64_t kfree = 1, kfull_root = 1;
    for (auto [p, ex] : factorize(u)) {
      kfull_root *= upow(p, ex / e.k);
      kfree *= upow(p, ex % e.k);
    }
    return single(e, kfree, upow(kfull_root, e.j));
  }

  Exponent exponent() const { return exp_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// The value is rational iff the only base present is 1.
  bool is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].base == 1); }
  std::uint64_t rational_value() const { return terms_.empty() ? 0 : terms_[0].coef; }

  /// Floating-point approximation, accurate to a small multiple of the
  /// unit roundoff relative to the value.
  double approx() const { return approx_; }

  friend RadicalCombo combo_add(const RadicalCombo& a, const RadicalCombo& b) {
    if (a.exp_ != b.exp_) throw DomainError("combo_add: mismatched exponents");
    RadicalCombo out(a.exp_);
    out.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto i = a.terms_.begin(), j = b.terms_.begin();
    while (i != a.terms_.end() || j != b.terms_.end()) {
      if (j == b.terms_.end() || (i != a.terms_.end() && i->base < j->base)) {
        out.terms_.push_back(*i++);
      } else if (i == a.terms_.end() || j->base < i->base) {
        out.terms_.push_back(*j++);
      } else {
        out.terms_.push_back({i->base, i->coef + j->coef});
        ++i;
        ++j;
      }
    }
    out.approx_ = a.approx_ + b.approx_;
    return out;
  }

  friend bool operator==(const RadicalCombo& a, const RadicalCombo& b) {
    return a.exp_ == b.exp_ && a.terms_ == b.terms_;
  }
  /// Structural (key) order, not value order.
  friend std::strong_ordering operator<=>(const RadicalCombo& a, const RadicalCombo& b) {
    if (auto c = a.exp_ <=> b.exp_; c != 0) return c;
    return a.terms_ <=> b.terms_;
  }

  static double term_value(Exponent e, std::uint64_t base) {
    const double b = static_cast<double>(base);
    if (e.k == 2) return std::pow(std::sqrt(b), e.j);
    if (e.k == 3) return std::pow(std::cbrt(b), e.j);
    return std::pow(b, e.value());
  }

 private:
  Exponent exp_;
  std::vector<Term> terms_;
  double approx_ = 0.0;
};

/// Canonical text `m1*r(n1)+m2*r(n2)+...`, bases ascending; zero is "0".
inline std::string to_string(const RadicalCombo& c) {
  if (c.is_zero()) return "0";
  std::string out;
  for (const auto& t : c.terms()) {
    if (!out.empty()) out += '+';
    out += std::to_string(t.coef) + "*r(" + std::to_string(t.base) + ")";
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const RadicalCombo& c) { return os << to_string(c); }

inline RadicalCombo parse_combo(Exponent e, std::string_view text) {
  RadicalCombo out(e);
  if (text == "0") return out;
  std::size_t pos = 0;
  auto read_uint = [&](std::uint64_t& v) {
    std::size_t start = pos;
    v = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') v = v * 10 + (text[pos++] - '0');
    if (pos == start) throw ParseError("bad combo '" + std::string(text) + "'");
  };
  auto expect = [&](std::string_view lit) {
    if (text.substr(pos, lit.size()) != lit) throw ParseError("bad combo '" + std::string(text) + "'");
    pos += lit.size();
  };
  std::uint64_t last_base = 0;
  while (true) {
    std::uint64_t coef, base;
    read_uint(coef);
    expect("*r(");
    read_uint(base);
    expect(")");
    if (coef == 0 || base <= last_base || !is_kfree(e.k, static_cast<long>(base)))
      throw ParseError("non-canonical combo '" + std::string(text) + "'");
    last_base = base;
    out = combo_add(out, RadicalCombo::single(e, base, coef));
    if (pos == text.size()) break;
    expect("+");
  }
  return out;
}

/// Enclosure [lo, hi] of a real value.
struct CertifiedValue {
  BigFloat lo;
  BigFloat hi;
  int precision_bits = 0;

  bool contains(double x) const { return mpfr_cmp_d(lo.get(), x) <= 0 && mpfr_cmp_d(hi.get(), x) >= 0; }
  double midpoint() const { return 0.5 * (lo.to_double() + hi.to_double()); }
};

/// Certified enclosure of the combo's value. Each term m * n^(j/k) is
/// rewritten as (m*a) * r^(1/k) via reduce_power and the k-th root is
/// rounded outward.
inline CertifiedValue combo_value(const RadicalCombo& c, int bits) {
  if (bits < 16) throw DomainError("combo_value: bits must be >= 16");
  const auto e = c.exponent();
  const mpfr_prec_t work = bits + 32 + 2 * static_cast<mpfr_prec_t>(c.terms().size());
  BigFloat lo(work), hi(work), tlo(work), thi(work);
  BigInt scale;
  for (const auto& t : c.terms()) {
    auto red = reduce_power(t.base, e.j, e.k);
    scale = from_u64(red.coef) * from_u64(t.coef);
    if (red.base == 1) {
      mpfr_set_z(tlo.get(), scale.get_mpz_t(), MPFR_RNDD);
      mpfr_set_z(thi.get(), scale.get_mpz_t(), MPFR_RNDU);
    } else {
      mpfr_set_ui(tlo.get(), red.base, MPFR_RNDD);
      mpfr_set_ui(thi.get(), red.base, MPFR_RNDU);
      mpfr_rootn_ui(tlo.get(), tlo.get(), e.k, MPFR_RNDD);
      mpfr_rootn_ui(thi.get(), thi.get(), e.k, MPFR_RNDU);
      mpfr_mul_z(tlo.get(), tlo.get(), scale.get_mpz_t(), MPFR_RNDD);
      mpfr_mul_z(thi.get(), thi.get(), scale.get_mpz_t(), MPFR_RNDU);
    }
    mpfr_add(lo.get(), lo.get(), tlo.get(), MPFR_RNDD);
    mpfr_add(hi.get(), hi.get(), thi.get(), MPFR_RNDU);
  }
  CertifiedValue out{BigFloat(bits + 2), BigFloat(bits + 2), bits};
  mpfr_set(out.lo.get(), lo.get(), MPFR_RNDD);
  mpfr_set(out.hi.get(), hi.get(), MPFR_RNDU);
  return out;
}

namespace detail {
inline constexpr double kApproxGuard = 1e-11;
inline constexpr int kMaxBits = 1 << 16;

inline bool clearly_apart(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) > kApproxGuard * scale;
}

inline std::strong_ordering from_int(int c) {
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}
}  // namespace detail

/// Exact ordering of the combo's value against a nonnegative rational.
/// Equality can only happen for rational combos and is decided
/// symbolically; everything else resolves by adaptive precision, since an
/// irrational value never equals w.
inline std::strong_ordering compare_threshold(const RadicalCombo& c, const Rational& w) {
  if (w < 0) throw DomainError("compare_threshold: w must be >= 0");
  if (c.is_rational()) {
    const Rational v(from_u64(c.rational_value()));
    return detail::from_int(cmp(v, w));
  }
  if (c.terms().size() == 1) {
    // m * n^(j/k) <=> p/q  iff  m^k n^j q^k <=> p^k
    const auto e = c.exponent();
    const auto& t = c.terms()[0];
    const BigInt lhs = ipow(t.coef, e.k) * ipow(t.base, e.j) * ipow(w.get_den(), e.k);
    return detail::from_int(cmp(lhs, ipow(w.get_num(), e.k)));
  }
  const double wd = w.get_d();
  if (detail::clearly_apart(c.approx(), wd)) return c.approx() < wd ? std::strong_ordering::less : std::strong_ordering::greater;
  for (int bits = 64; bits <= detail::kMaxBits; bits *= 2) {
    auto v = combo_value(c, bits);
    if (mpfr_cmp_q(v.lo.get(), w.get_mpq_t()) > 0) return std::strong_ordering::greater;
    if (mpfr_cmp_q(v.hi.get(), w.get_mpq_t()) < 0) return std::strong_ordering::less;
  }
  throw InternalError("compare_threshold: could not separate " + to_string(c) + " from " + to_string(w));
}

/// Exact ordering of the values of two combos. Distinct combos have
/// distinct values (the map n -> k-free part of n^j is injective and
/// k-th roots of distinct k-free integers are linearly independent).
inline std::strong_ordering compare_values(const RadicalCombo& a, const RadicalCombo& b) {
  if (a.exponent() != b.exponent()) throw DomainError("compare_values: mismatched exponents");
  if (a == b) return std::strong_ordering::equal;
  if (detail::clearly_apart(a.approx(), b.approx()))
    return a.approx() < b.approx() ? std::strong_ordering::less : std::strong_ordering::greater;
  for (int bits = 64; bits <= detail::kMaxBits; bits *= 2) {
    auto va = combo_value(a, bits);
    auto vb = combo_value(b, bits);
    if (mpfr_cmp(va.lo.get(), vb.hi.get()) > 0) return std::strong_ordering::greater;
    if (mpfr_cmp(va.hi.get(), vb.lo.get()) < 0) return std::strong_ordering::less;
  }
  throw InternalError("compare_values: could not separate " + to_string(a) + " and " + to_string(b));
}

}  // namespace ratpow
