#pragma once

// Finite point-mass measures with exact rational weights keyed by
// RadicalCombo, their convolution and convolution exponential; plus
// sampled densities on a uniform grid for the continuous estimates.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "radical.hpp"
#include "rational.hpp"

namespace ratpow {

class PointMassMeasure {
 public:
  using MassMap = std::map<RadicalCombo, Rational>;

  PointMassMeasure(Exponent e, Rational cap) : exp_(e), cap_(std::move(cap)) {
    if (cap_ < 0) throw DomainError("PointMassMeasure: cap must be >= 0");
  }

  static PointMassMeasure delta0(Exponent e, const Rational& cap) {
    PointMassMeasure out(e, cap);
    out.masses_.emplace(RadicalCombo(e), Rational(1));
    return out;
  }

  Exponent exponent() const { return exp_; }
  const Rational& cap() const { return cap_; }
  const MassMap& masses() const { return masses_; }
  std::size_t size() const { return masses_.size(); }
  bool empty() const { return masses_.empty(); }

  /// Adds weight at a support point; the point must not exceed the cap.
  void add(const RadicalCombo& at, const Rational& weight) {
    if (at.exponent() != exp_) throw DomainError("PointMassMeasure: mismatched exponents");
    if (compare_threshold(at, cap_) == std::strong_ordering::greater)
      throw DomainError("PointMassMeasure: support point " + to_string(at) + " above cap");
    add_unchecked(at, weight);
  }

  Rational weight_at(const RadicalCombo& at) const {
    auto it = masses_.find(at);
    return it == masses_.end() ? Rational(0) : it->second;
  }

  bool has_zero_mass() const { return masses_.count(RadicalCombo(exp_)) != 0; }

  friend PointMassMeasure operator+(const PointMassMeasure& a, const PointMassMeasure& b) {
    if (a.exp_ != b.exp_) throw DomainError("measure sum: mismatched exponents");
    PointMassMeasure out(a.exp_, std::min(a.cap_, b.cap_));
    for (const auto* m : {&a, &b})
      for (const auto& [p, w] : m->masses_)
        if (compare_threshold(p, out.cap_) != std::strong_ordering::greater) out.add_unchecked(p, w);
    return out;
  }

  friend bool operator==(const PointMassMeasure& a, const PointMassMeasure& b) {
    return a.exp_ == b.exp_ && a.masses_ == b.masses_;
  }

  void add_unchecked(const RadicalCombo& at, const Rational& weight) {
    if (weight == 0) return;
    auto [it, inserted] = masses_.try_emplace(at, weight);
    if (!inserted) {
      it->second += weight;
      if (it->second == 0) masses_.erase(it);
    }
  }

 private:
  Exponent exp_;
  Rational cap_;
  MassMap masses_;
};

/// dI: weight 1/m at every m * n^(j/k) <= cap, n k-free.
inline PointMassMeasure build_dI(Exponent e, const Rational& cap) {
  if (cap <= 0) throw DomainError("build_dI: cap must be > 0");
  PointMassMeasure out(e, cap);
  KfreeSieve sieve(static_cast<unsigned>(e.k));
  for (std::uint64_t m = 1; Rational(from_u64(m)) <= cap; ++m) {
    // n^j <= (cap/m)^k
    const Rational ratio = cap / Rational(from_u64(m));
    const BigInt nmax = RationalRoot{ratio, static_cast<unsigned>(e.k), static_cast<unsigned>(e.j)}.floor();
    const std::uint64_t top = to_u64(nmax);
    for (std::uint64_t n = 1; n <= top; ++n)
      if (sieve.is_kfree(n)) out.add_unchecked(RadicalCombo::single(e, n, m), Rational(from_u64(1), from_u64(m)));
  }
  return out;
}

namespace detail {
struct SupportPoint {
  const RadicalCombo* at;
  const Rational* weight;
};

inline std::vector<SupportPoint> by_value(const PointMassMeasure& m) {
  std::vector<SupportPoint> out;
  out.reserve(m.size());
  for (const auto& [p, w] : m.masses()) out.push_back({&p, &w});
  std::sort(out.begin(), out.end(), [](const SupportPoint& a, const SupportPoint& b) { return a.at->approx() < b.at->approx(); });
  return out;
}
}  // namespace detail

/// mu * nu restricted to support <= cap. Aggregation is by canonical
/// key, so the result does not depend on iteration order.
inline PointMassMeasure convolve(const PointMassMeasure& mu, const PointMassMeasure& nu, const Rational& cap) {
  if (mu.exponent() != nu.exponent()) throw DomainError("convolve: mismatched exponents");
  PointMassMeasure out(mu.exponent(), cap);
  const auto right = detail::by_value(nu);
  const double cap_hi = cap.get_d() * (1 + 4 * detail::kApproxGuard) + 1e-300;
  Rational prod;
  for (const auto& [p, wp] : mu.masses()) {
    for (const auto& q : right) {
      if (p.approx() + q.at->approx() > cap_hi) break;
      RadicalCombo sum = combo_add(p, *q.at);
      if (compare_threshold(sum, cap) == std::strong_ordering::greater) continue;
      prod = wp * *q.weight;
      out.add_unchecked(sum, prod);
    }
  }
  return out;
}

/// delta_0 + mu + mu^{*2}/2! + ... truncated to support <= cap. Requires
/// no mass at zero so that the m-fold supports leave [0, cap] and the
/// series terminates.
inline PointMassMeasure conv_exp(const PointMassMeasure& mu, const Rational& cap) {
  if (mu.has_zero_mass()) throw DomainError("conv_exp: measure has mass at zero; series would not terminate");
  PointMassMeasure out = PointMassMeasure::delta0(mu.exponent(), cap);
  PointMassMeasure base(mu.exponent(), cap);
  for (const auto& [p, w] : mu.masses())
    if (compare_threshold(p, cap) != std::strong_ordering::greater) base.add_unchecked(p, w);
  PointMassMeasure power = base;
  Rational factorial = 1;
  for (unsigned long m = 1; !power.empty(); ++m) {
    factorial *= static_cast<unsigned long>(m);
    for (const auto& [p, w] : power.masses()) out.add_unchecked(p, w / factorial);
    power = convolve(power, base, cap);
  }
  return out;
}

/// Exact total weight at support points with value <= w.
inline Rational cumulative(const PointMassMeasure& mu, const Rational& w, bool include_zero) {
  if (w > mu.cap()) throw DomainError("cumulative: w exceeds the measure's cap");
  Rational out = 0;
  for (const auto& [p, weight] : mu.masses()) {
    if (p.is_zero()) {
      if (include_zero) out += weight;
      continue;
    }
    if (compare_threshold(p, w) != std::strong_ordering::greater) out += weight;
  }
  return out;
}

/// One line per support point in ascending value:
/// `<canonical combo>\t<weight as p/q>\t<decimal value>`.
inline void dump(std::ostream& os, const PointMassMeasure& mu) {
  std::vector<const PointMassMeasure::MassMap::value_type*> rows;
  for (const auto& kv : mu.masses()) rows.push_back(&kv);
  std::sort(rows.begin(), rows.end(),
            [](auto* a, auto* b) { return compare_values(a->first, b->first) == std::strong_ordering::less; });
  char buf[64];
  for (const auto* kv : rows) {
    std::snprintf(buf, sizeof buf, "%.15g", kv->first.approx());
    Rational w = kv->second;
    os << to_string(kv->first) << '\t' << to_string(w) << '\t' << buf << '\n';
  }
}

// ---------------------------------------------------------------------------
// Grid densities

/// Density sampled at t = i*h, i = 0..n-1, plus an atom at t = 0.
struct GridDensity {
  Rational step;
  std::vector<double> samples;
  double atom0 = 0.0;

  double h() const { return step.get_d(); }
  std::size_t size() const { return samples.size(); }
  double t_max() const { return samples.empty() ? 0.0 : h() * static_cast<double>(samples.size() - 1); }

  /// Samples fn on [0, t_max]. Densities with a jump should return the
  /// average of the one-sided limits at the jump itself, which keeps the
  /// trapezoid rule second order.
  static GridDensity sample(const Rational& step, double t_max, const std::function<double(double)>& fn,
                            double atom = 0.0) {
    if (step <= 0) throw DomainError("GridDensity: step must be > 0");
    GridDensity g{step, {}, atom};
    const double h = step.get_d();
    const auto n = static_cast<std::size_t>(std::llround(std::floor(t_max / h + 1e-9))) + 1;
    g.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) g.samples[i] = fn(h * static_cast<double>(i));
    return g;
  }

  static GridDensity zero(const Rational& step, double t_max) {
    return sample(step, t_max, [](double) { return 0.0; });
  }

  /// Trapezoid cumulative integral from 0+ (atom excluded), one entry per node.
  std::vector<double> cumulative_integral() const {
    std::vector<double> out(samples.size(), 0.0);
    for (std::size_t i = 1; i < samples.size(); ++i) out[i] = out[i - 1] + 0.5 * h() * (samples[i - 1] + samples[i]);
    return out;
  }

  /// Integral over (0, t], linearly interpolated between nodes.
  double integral_to(double t) const {
    if (t <= 0 || samples.empty()) return 0.0;
    const auto cum = cumulative_integral();
    const double x = t / h();
    auto i = static_cast<std::size_t>(std::floor(x));
    if (i >= samples.size() - 1) return cum.back();
    const double frac = x - static_cast<double>(i);
    return cum[i] + frac * (cum[i + 1] - cum[i]);
  }

  /// Density at t by linear interpolation.
  double at(double t) const {
    if (samples.empty() || t < 0) return 0.0;
    const double x = t / h();
    auto i = static_cast<std::size_t>(std::floor(x));
    if (i >= samples.size() - 1) return samples.back();
    const double frac = x - static_cast<double>(i);
    return samples[i] + frac * (samples[i + 1] - samples[i]);
  }
};

/// Trapezoid discretization of (f*g)(t) = int_0^t f(v) g(t-v) dv, with
/// the atoms at zero acting as shifts.
inline GridDensity grid_convolve(const GridDensity& f, const GridDensity& g) {
  if (f.step != g.step) throw DomainError("grid_convolve: step mismatch");
  const std::size_t n = std::min(f.size(), g.size());
  GridDensity out{f.step, std::vector<double>(n, 0.0), f.atom0 * g.atom0};
  const double h = f.h();
  for (std::size_t t = 1; t < n; ++t) {
    double acc = 0.5 * (f.samples[0] * g.samples[t] + f.samples[t] * g.samples[0]);
    for (std::size_t i = 1; i < t; ++i) acc += f.samples[i] * g.samples[t - i];
    out.samples[t] = h * acc;
  }
  for (std::size_t t = 0; t < n; ++t) out.samples[t] += f.atom0 * g.samples[t] + g.atom0 * f.samples[t];
  return out;
}

/// exp*(f) on [0, t_max]: unit atom plus sum_m f^{*m}/m!. An atom c at zero
/// factors out as e^c. The series stops once the majorant
/// C^m t^{m-1}/((m-1)! m!) with C = sup|f| bounds the remaining tail
/// below tol.
inline GridDensity grid_conv_exp(const GridDensity& f, double t_max, double tol = 1e-15) {
  GridDensity base = f;
  const double h = f.h();
  const auto n = std::min(f.size(), static_cast<std::size_t>(std::llround(std::floor(t_max / h + 1e-9))) + 1);
  base.samples.resize(n);
  base.atom0 = 0.0;
  double sup = 0.0;
  for (double v : base.samples) sup = std::max(sup, std::abs(v));

  GridDensity total{f.step, base.samples, 1.0};
  GridDensity term = base;
  double scale = 1.0;
  for (double v : total.samples) scale = std::max(scale, std::abs(v));
  const double t = base.t_max();
  // log of the majorant term for index m
  auto log_major = [&](unsigned m) {
    return m * std::log(std::max(sup, 1e-300)) + (m - 1) * std::log(std::max(t, 1e-300)) - std::lgamma(m) -
           std::lgamma(m + 1.0);
  };
  for (unsigned m = 2; m < 2000; ++m) {
    const double lm = log_major(m);
    // once the ratio C t/(m(m+1)) < 1/2 the tail from m on is at most twice term m
    if (sup == 0.0 || (sup * t < 0.5 * m * (m + 1.0) && std::log(2.0) + lm < std::log(tol * scale))) break;
    term = grid_convolve(term, base);
    for (double& v : term.samples) v /= m;
    for (std::size_t i = 0; i < n; ++i) total.samples[i] += term.samples[i];
    for (double v : total.samples) scale = std::max(scale, std::abs(v));
  }
  if (f.atom0 != 0.0) {
    const double factor = std::exp(f.atom0);
    total.atom0 *= factor;
    for (double& v : total.samples) v *= factor;
  }
  return total;
}

}  // namespace ratpow
