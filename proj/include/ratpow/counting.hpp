#pragma once

// Exact ground truth: enumeration of the value set, the S and I
// staircases by independent constructions, and numeric checks of the
// sum/product forms of the generating function.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "arith.hpp"
#include "errors.hpp"
#include "measure.hpp"
#include "radical.hpp"
#include "rational.hpp"

namespace ratpow {

struct CountingLimits {
  /// Enumeration refuses to produce more than this many elements.
  std::size_t max_elements = 50'000'000;
};

/// Right-continuous or midpoint-valued step function with exact jumps.
struct Staircase {
  struct Jump {
    RadicalCombo at;
    Rational weight;
  };
  std::vector<Jump> jumps;  // strictly increasing in value
  QConvention convention = QConvention::Midpoint;

  Rational value_at(const Rational& w) const {
    Rational out = 0;
    for (const auto& j : jumps) {
      const auto c = compare_threshold(j.at, w);
      if (c == std::strong_ordering::greater) break;
      if (c == std::strong_ordering::equal && convention == QConvention::Midpoint)
        out += j.weight / 2;
      else
        out += j.weight;
    }
    return out;
  }
};

namespace detail {

/// k-free bases n with n^(j/k) <= w, ascending.
inline std::vector<std::uint64_t> bases_up_to(Exponent e, const Rational& w) {
  if (w <= 0) return {};
  const std::uint64_t top = to_u64(RationalRoot{w, static_cast<unsigned>(e.k), static_cast<unsigned>(e.j)}.floor());
  KfreeSieve sieve(static_cast<unsigned>(e.k), std::max<std::uint64_t>(top, 1));
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1; n <= top; ++n)
    if (sieve.is_kfree(n)) out.push_back(n);
  return out;
}

/// Depth-first walk over combos with value <= w; each combo visited once.
/// Bases ascend with depth and, within a base, the coefficient ascends,
/// so the first failing candidate ends its loop.
inline void walk_elements(Exponent e, const Rational& w, const std::function<void(const RadicalCombo&)>& visit,
                          const CountingLimits& limits) {
  const auto bases = bases_up_to(e, w);
  std::size_t produced = 0;
  std::vector<RadicalCombo> unit;
  unit.reserve(bases.size());
  for (auto n : bases) unit.push_back(RadicalCombo::single(e, n));
  std::function<void(std::size_t, const RadicalCombo&)> dfs = [&](std::size_t start, const RadicalCombo& partial) {
    for (std::size_t i = start; i < bases.size(); ++i) {
      RadicalCombo cand = combo_add(partial, unit[i]);
      if (compare_threshold(cand, w) == std::strong_ordering::greater) return;
      while (true) {
        if (++produced > limits.max_elements) throw BudgetError("enumeration exceeds the element budget");
        visit(cand);
        dfs(i + 1, cand);
        cand = combo_add(cand, unit[i]);
        if (compare_threshold(cand, w) == std::strong_ordering::greater) break;
      }
    }
  };
  dfs(0, RadicalCombo(e));
}

inline bool value_less(const RadicalCombo& a, const RadicalCombo& b) {
  return compare_values(a, b) == std::strong_ordering::less;
}

}  // namespace detail

/// All elements with value <= w, each once, sorted by value.
inline std::vector<RadicalCombo> enumerate_elements(Exponent e, const Rational& w, const CountingLimits& limits = {}) {
  std::vector<RadicalCombo> out;
  if (w <= 0) return out;
  detail::walk_elements(e, w, [&](const RadicalCombo& c) { out.push_back(c); }, limits);
  std::sort(out.begin(), out.end(), detail::value_less);
  return out;
}

/// S_{j,k}(w) = #{v in M_{j,k} : v <= w}.
inline std::uint64_t s_exact(Exponent e, const Rational& w, const CountingLimits& limits = {}) {
  std::uint64_t count = 0;
  if (w <= 0) return 0;
  detail::walk_elements(e, w, [&](const RadicalCombo&) { ++count; }, limits);
  return count;
}

/// Elements up to w_max sorted by value; answers exact counts at any
/// w <= w_max with binary search plus exact resolution near the boundary.
class ElementCounter {
 public:
  ElementCounter(Exponent e, const Rational& w_max, const CountingLimits& limits = {})
      : w_max_(w_max), elements_(enumerate_elements(e, w_max, limits)) {
    approx_.reserve(elements_.size());
    for (const auto& c : elements_) approx_.push_back(c.approx());
  }

  const std::vector<RadicalCombo>& elements() const { return elements_; }
  const Rational& w_max() const { return w_max_; }

  std::uint64_t count(const Rational& w) const {
    if (w > w_max_) throw DomainError("ElementCounter: w exceeds w_max");
    if (w <= 0) return 0;
    const double wd = w.get_d();
    const double band = 4 * detail::kApproxGuard * std::max(1.0, wd);
    auto lo = std::lower_bound(approx_.begin(), approx_.end(), wd - band) - approx_.begin();
    auto hi = std::upper_bound(approx_.begin(), approx_.end(), wd + band) - approx_.begin();
    std::uint64_t out = static_cast<std::uint64_t>(lo);
    for (auto i = lo; i < hi; ++i)
      if (compare_threshold(elements_[static_cast<std::size_t>(i)], w) != std::strong_ordering::greater) ++out;
    return out;
  }

 private:
  Rational w_max_;
  std::vector<RadicalCombo> elements_;
  std::vector<double> approx_;
};

/// I_{j,k} on (0, cap]: jump 1/m at each m * n^(j/k), sorted exactly by
/// comparing m^k n^j.
inline Staircase i_staircase(Exponent e, const Rational& cap) {
  struct Pair {
    std::uint64_t m, n;
    BigInt key;
  };
  std::vector<Pair> pairs;
  if (cap > 0) {
    KfreeSieve sieve(static_cast<unsigned>(e.k));
    const BigInt pk = ipow(cap.get_num(), e.k), qk = ipow(cap.get_den(), e.k);
    for (std::uint64_t m = 1; Rational(from_u64(m)) <= cap; ++m) {
      const BigInt mk = ipow(m, e.k) * qk;
      for (std::uint64_t n = 1;; ++n) {
        const BigInt lhs = mk * ipow(n, e.j);
        if (lhs > pk) break;
        if (sieve.is_kfree(n)) pairs.push_back({m, n, ipow(m, e.k) * ipow(n, e.j)});
      }
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.key < b.key; });
  Staircase out;
  out.convention = QConvention::Midpoint;
  out.jumps.reserve(pairs.size());
  for (const auto& p : pairs)
    out.jumps.push_back({RadicalCombo::single(e, p.n, p.m), Rational(from_u64(1), from_u64(p.m))});
  return out;
}

/// S_{j,k} on (0, cap] as a staircase of unit jumps.
inline Staircase s_staircase(Exponent e, const Rational& cap, QConvention conv = QConvention::RightContinuous,
                             const CountingLimits& limits = {}) {
  Staircase out;
  out.convention = conv;
  for (auto& c : enumerate_elements(e, cap, limits)) out.jumps.push_back({std::move(c), Rational(1)});
  return out;
}

/// I_{j,k}(w) with the midpoint convention at jumps, from the jump list.
inline Rational i_exact(Exponent e, const Rational& w) {
  if (w <= 0) return 0;
  return i_staircase(e, w).value_at(w);
}

/// I_{j,k}(w) = sum_{m <= w} (1/m) Q_k((w/m)^{k/j}), Q_k at the midpoint
/// convention, from k-free prefix counts.
inline Rational i_via_q(Exponent e, const Rational& w, KfreeSieve* shared = nullptr) {
  if (w <= 0) return 0;
  KfreeSieve local(static_cast<unsigned>(e.k));
  KfreeSieve& sieve = shared ? *shared : local;
  if (sieve.k() != static_cast<unsigned>(e.k)) throw DomainError("i_via_q: sieve has the wrong k");
  Rational out = 0;
  const BigInt top = floor(w);
  for (std::uint64_t m = 1; BigInt(from_u64(m)) <= top; ++m) {
    const Rational ratio = w / Rational(from_u64(m));
    out += sieve.q_count(RationalRoot{ratio, static_cast<unsigned>(e.k), static_cast<unsigned>(e.j)},
                         QConvention::Midpoint) /
           Rational(from_u64(m));
  }
  return out;
}

/// exp*(dI) on [0, cap].
inline PointMassMeasure s_measure(Exponent e, const Rational& cap) { return conv_exp(build_dI(e, cap), cap); }

inline std::uint64_t checked_count(const Rational& r) {
  if (!is_integer(r)) throw InternalError("convolution-exponential count " + to_string(r) + " is not an integer");
  return to_u64(r.get_num());
}

/// S_{j,k}(w) as the integral of exp*(dI) over (0, w].
inline std::uint64_t s_via_conv_exp(Exponent e, const Rational& w) {
  if (w <= 0) return 0;
  return checked_count(cumulative(s_measure(e, w), w, false));
}

/// Same for several w, sharing one measure built at the largest w.
inline std::vector<std::uint64_t> s_via_conv_exp(Exponent e, const std::vector<Rational>& ws) {
  std::vector<std::uint64_t> out(ws.size(), 0);
  if (ws.empty()) return out;
  const Rational cap = *std::max_element(ws.begin(), ws.end());
  if (cap <= 0) return out;
  const auto mu = s_measure(e, cap);
  for (std::size_t i = 0; i < ws.size(); ++i)
    if (ws[i] > 0) out[i] = checked_count(cumulative(mu, ws[i], false));
  return out;
}

// ---------------------------------------------------------------------------
// Sum and product forms of Z_{j,k}(s) = 1 + sum_v e^{-sv} = prod_n (1 - e^{-s n^{j/k}})^{-1}

struct Enclosure {
  double lo;
  double hi;
  bool contains(double x) const { return lo <= x && x <= hi; }
  friend bool overlaps(const Enclosure& a, const Enclosure& b) { return a.lo <= b.hi && b.lo <= a.hi; }
};

struct ZForms {
  double sum_form;        // 1 + sum_{v <= v_cap} e^{-sv}
  double product_form;    // prod_{n k-free <= n_cap}
  double log_sum_form;    // exp(sum_{m n^{j/k} <= v_cap} e^{-s m n^{j/k}} / m)
  Enclosure sum_enclosure;
  Enclosure product_enclosure;
  Enclosure log_sum_enclosure;

  /// All three enclosures of Z(s) intersect.
  bool consistent() const {
    const double lo = std::max({sum_enclosure.lo, product_enclosure.lo, log_sum_enclosure.lo});
    const double hi = std::min({sum_enclosure.hi, product_enclosure.hi, log_sum_enclosure.hi});
    return lo <= hi * (1 + 1e-12);
  }
};

namespace detail {

/// int_N^inf e^{-s x^{j/k}} dx = (k/j) s^{-k/j} Gamma(k/j, s N^{j/k}).
inline double stretched_exp_tail(Exponent e, double s, double N) {
  const double a = 1.0 / e.value();
  return a * std::pow(s, -a) * boost::math::tgamma(a, s * std::pow(N, e.value()));
}

/// Partial product over k-free n <= n_cap and an upper bound on ln of the
/// missing factor.
inline std::pair<double, double> product_with_tail(Exponent e, double s, std::uint64_t n_cap) {
  KfreeSieve sieve(static_cast<unsigned>(e.k), n_cap);
  double log_prod = 0.0;
  for (std::uint64_t n = 1; n <= n_cap; ++n)
    if (sieve.is_kfree(n)) log_prod -= std::log1p(-std::exp(-s * RadicalCombo::term_value(e, n)));
  // sum_{n > N} -ln(1 - y_n) <= sum y_n / (1 - y_N) <= int_N^inf e^{-s x^{j/k}} dx / (1 - y_N)
  const double yN = std::exp(-s * RadicalCombo::term_value(e, n_cap));
  const double tail = stretched_exp_tail(e, s, static_cast<double>(n_cap)) / (1.0 - yN);
  return {log_prod, tail};
}

}  // namespace detail

inline ZForms z_forms_check(Exponent e, double s, std::uint64_t n_cap, const Rational& v_cap,
                            const CountingLimits& limits = {}) {
  if (!(s > 0)) throw DomainError("z_forms_check: s must be > 0");
  if (n_cap < 1 || v_cap <= 0) throw DomainError("z_forms_check: caps must be positive");
  ZForms out{};
  // sum form
  double sum = 1.0;
  detail::walk_elements(e, v_cap, [&](const RadicalCombo& c) { sum += std::exp(-s * c.approx()); }, limits);
  // log-sum form over dI
  double log_sum = 0.0;
  const auto dI = build_dI(e, v_cap);
  for (const auto& [p, w] : dI.masses()) log_sum += w.get_d() * std::exp(-s * p.approx());
  const auto [log_prod, prod_tail] = detail::product_with_tail(e, s, n_cap);
  // Tails beyond v_cap: e^{-sv} <= e^{-s V/2} e^{-s v/2} for v > V, so the
  // sum tail is at most e^{-sV/2} Z(s/2) and the log-sum tail at most
  // e^{-sV/2} ln Z(s/2); Z(s/2) is bounded above by its product form.
  const auto [log_prod_half, tail_half] = detail::product_with_tail(e, s / 2, n_cap);
  const double ln_z_half_hi = log_prod_half + tail_half;
  const double damp = std::exp(-s * v_cap.get_d() / 2);
  const double slack = 1e-13;
  out.sum_form = sum;
  out.product_form = std::exp(log_prod);
  out.log_sum_form = std::exp(log_sum);
  out.sum_enclosure = {sum * (1 - slack), (sum + damp * std::exp(ln_z_half_hi)) * (1 + slack)};
  out.product_enclosure = {out.product_form * (1 - slack), std::exp(log_prod + prod_tail) * (1 + slack)};
  out.log_sum_enclosure = {out.log_sum_form * (1 - slack), std::exp(log_sum + damp * ln_z_half_hi) * (1 + slack)};
  return out;
}

}  // namespace ratpow
