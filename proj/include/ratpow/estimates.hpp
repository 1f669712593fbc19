#pragma once

// Analytic approximations of I_{j,k} and S_{j,k}: first order, centerline,
// truncated sum over zeta zeros, the closed-form convolution-exponential
// series for c*v^a, hybrids, and residual-order diagnostics.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <vector>

#include "counting.hpp"
#include "errors.hpp"
#include "measure.hpp"
#include "zeta.hpp"

namespace ratpow {

/// Constants shared by the estimators for one exponent pair.
struct EstimateConstants {
  Exponent exp;
  double ratio;       // k/j
  double leading;     // zeta(1 + k/j) / zeta(k)
  double center;      // gamma - j (1 - 1/k) ln 2 pi
  double density_c;   // (k/j) * leading, coefficient of v^{k/j - 1} in dI
  double density_a;   // k/j - 1

  explicit EstimateConstants(Exponent e)
      : exp(e),
        ratio(1.0 / e.value()),
        leading(zeta(1.0 + ratio) / zeta(static_cast<double>(e.k))),
        center(kEulerGamma - e.j * (1.0 - 1.0 / e.k) * std::log(2 * std::numbers::pi)),
        density_c(ratio * leading),
        density_a(ratio - 1.0) {}
};

/// zeta(1+k/j)/zeta(k) w^{k/j}; zero for w <= 0.
inline double i_first(const EstimateConstants& c, double w) {
  if (w <= 0) return 0.0;
  return c.leading * std::pow(w, c.ratio);
}

/// First order plus chi_[1,inf) ln w and the constant term; zero at w <= 0.
inline double i_center(const EstimateConstants& c, double w) {
  if (w <= 0) return 0.0;
  return i_first(c, w) + (w >= 1.0 ? std::log(w) : 0.0) + c.center;
}

/// Centerline plus 2 Re sum over zeros 0 < Im rho < T of
/// zeta(rho/j + 1) zeta(rho/k) / zeta'(rho) * w^{rho/j} / rho.
class ResidueSum {
 public:
  ResidueSum(const EstimateConstants& c, const ZeroTable& zeros, double height, double deriv_floor = 1e-8)
      : consts_(c) {
    const double j = c.exp.j, k = c.exp.k;
    for (std::size_t t = 0; t < zeros.size() && zeros.ordinates[t] < height; ++t) {
      const Complex rho(0.5, zeros.ordinates[t]);
      const Complex d = t < zeros.derivs.size() ? zeros.derivs[t] : zeta_deriv(rho);
      if (std::abs(d) < deriv_floor) throw ConditioningError("ResidueSum: zeta'(rho) below floor");
      rho_over_j_.push_back(rho / j);
      coef_.push_back(zeta(rho / j + 1.0) * zeta(rho / k) / (d * rho));
    }
  }

  std::size_t zeros_used() const { return coef_.size(); }
  const std::vector<Complex>& coefficients() const { return coef_; }

  /// The oscillatory part alone: sum over 0 < Im rho < T of both rho and
  /// its conjugate, paired into 2 Re(.).
  double oscillation(double w) const {
    if (w <= 0) return 0.0;
    const double lw = std::log(w);
    double out = 0.0;
    for (std::size_t t = 0; t < coef_.size(); ++t) out += 2.0 * (coef_[t] * std::exp(rho_over_j_[t] * lw)).real();
    return out;
  }

  double operator()(double w) const {
    if (w <= 0) return 0.0;
    return i_center(consts_, w) + oscillation(w);
  }

 private:
  EstimateConstants consts_;
  std::vector<Complex> rho_over_j_;
  std::vector<Complex> coef_;
};

inline double i_residue(const EstimateConstants& c, double w, double height, const ZeroTable& zeros) {
  return ResidueSum(c, zeros, height)(w);
}

// ---------------------------------------------------------------------------
// exp*(c v^a) = delta_0 + sum_m c^m Gamma(a+1)^m / (m! Gamma(m(a+1))) t^{m(a+1)-1}

namespace detail {
template <class TermLog>
double positive_series(TermLog&& log_term, double rel_tol = 1e-16) {
  double sum = 0.0, prev = -INFINITY;
  for (int m = 1; m < 100000; ++m) {
    const double lt = log_term(m);
    const double term = std::exp(lt);
    sum += term;
    if (lt < prev && term <= rel_tol * sum) break;
    prev = lt;
  }
  return sum;
}
}  // namespace detail

/// Density of exp*(c v^a) at t > 0 (atom excluded); c > 0, a > -1.
inline double conv_exp_power_density(double c, double a, double t) {
  if (!(a > -1.0)) throw DomainError("conv_exp_power_density: a must be > -1");
  if (c == 0.0 || t < 0.0) return 0.0;
  if (t == 0.0) return a == 0.0 ? c : (a > 0 ? 0.0 : INFINITY);
  const double ga = std::lgamma(a + 1.0), lc = std::log(c), lt = std::log(t);
  return detail::positive_series([&](int m) {
    const double p = m * (a + 1.0);
    return m * (lc + ga) - std::lgamma(m + 1.0) - std::lgamma(p) + (p - 1.0) * lt;
  });
}

/// Integral over (0, w] of the same density.
inline double conv_exp_power_integral(double c, double a, double w) {
  if (!(a > -1.0)) throw DomainError("conv_exp_power_integral: a must be > -1");
  if (c == 0.0 || w <= 0.0) return 0.0;
  const double ga = std::lgamma(a + 1.0), lc = std::log(c), lw = std::log(w);
  return detail::positive_series([&](int m) {
    const double p = m * (a + 1.0);
    return m * (lc + ga) - std::lgamma(m + 1.0) - std::lgamma(p) + p * lw - std::log(p);
  });
}

/// First-order S estimate: integral of exp* of the first-order dI.
inline double s_first(const EstimateConstants& c, double w) {
  return conv_exp_power_integral(c.density_c, c.density_a, w);
}

/// Density of the first-order dI, c v^a (right limit at t = 0).
inline double first_order_dI(const EstimateConstants& c, double t) {
  if (t < 0) return 0.0;
  if (t == 0) return c.density_a == 0 ? c.density_c : (c.density_a > 0 ? 0.0 : INFINITY);
  return c.density_c * std::pow(t, c.density_a);
}

/// chi_[1,inf)(t)/t with the midpoint value at t = 1.
inline double log_truncated_dI(double t) {
  if (t < 1.0) return 0.0;
  return t == 1.0 ? 0.5 : 1.0 / t;
}

/// The centerline S estimate on a grid up to w_max, queryable at any
/// w <= w_max:
///   e^{center} * int_{0+}^w exp*(c v^a) * exp*(chi_[1,inf) / v).
class CenterlineS {
 public:
  CenterlineS(const EstimateConstants& c, double w_max, const Rational& step) : consts_(c) {
    if (step <= 0) throw DomainError("CenterlineS: step must be > 0");
    const double h = step.get_d();
    const double t_max = std::ceil(std::max(w_max, h) / h) * h;
    auto series = GridDensity::sample(
        step, t_max, [&](double t) { return conv_exp_power_density(c.density_c, c.density_a, t); }, 1.0);
    log_factor_ = grid_conv_exp(GridDensity::sample(step, t_max, log_truncated_dI), t_max);
    product_ = grid_convolve(series, log_factor_);
    cumulative_ = product_.cumulative_integral();
    scale_ = std::exp(c.center);
  }

  double operator()(double w) const {
    if (w <= 0) return 0.0;
    const double x = w / product_.h();
    auto i = static_cast<std::size_t>(std::floor(x));
    if (i >= cumulative_.size() - 1) return scale_ * cumulative_.back();
    const double frac = x - static_cast<double>(i);
    return scale_ * (cumulative_[i] + frac * (cumulative_[i + 1] - cumulative_[i]));
  }

  /// exp*(chi_[1,inf)/v) on the grid (density part plus unit atom).
  const GridDensity& log_factor() const { return log_factor_; }

 private:
  EstimateConstants consts_;
  GridDensity log_factor_;
  GridDensity product_;
  std::vector<double> cumulative_;
  double scale_ = 1.0;
};

inline double s_center(const EstimateConstants& c, double w, const Rational& step = Rational(1, 256)) {
  if (w <= 0) return 0.0;
  return CenterlineS(c, w, step)(w);
}

/// Hybrid S estimate: the exact dI on (0, w0], then the centerline dI
/// beyond. The atom at w0 makes the hybrid I continue as I_center past w0.
/// Point masses off the grid are split linearly between neighbouring nodes.
class HybridS {
 public:
  HybridS(const EstimateConstants& c, double w_max, const Rational& w0, const Rational& step) {
    if (w0 <= 0) throw DomainError("HybridS: w0 must be > 0");
    const double h = step.get_d();
    const double t_max = std::ceil(std::max(w_max, h) / h) * h;
    const double w0d = w0.get_d();
    auto density = GridDensity::sample(step, t_max, [&](double t) {
      if (t < w0d) return 0.0;
      const double v = first_order_dI(c, t) + log_truncated_dI(t);
      return t == w0d ? v / 2 : v;
    });
    auto deposit = [&](double at, double weight) {
      const double x = at / h;
      auto i = static_cast<std::size_t>(std::floor(x));
      if (i + 1 >= density.size()) return;
      const double frac = x - static_cast<double>(i);
      density.samples[i] += weight * (1 - frac) / h;
      density.samples[i + 1] += weight * frac / h;
    };
    const auto exact = build_dI(c.exp, w0);
    for (const auto& [p, wt] : exact.masses()) deposit(p.approx(), wt.get_d());
    deposit(w0d, i_center(c, w0d) - i_exact(c.exp, w0).get_d());
    auto e = grid_conv_exp(density, t_max);
    cumulative_ = e.cumulative_integral();
    h_ = h;
  }

  double operator()(double w) const {
    if (w <= 0) return 0.0;
    const double x = w / h_;
    auto i = static_cast<std::size_t>(std::floor(x));
    if (i >= cumulative_.size() - 1) return cumulative_.back();
    const double frac = x - static_cast<double>(i);
    return cumulative_[i] + frac * (cumulative_[i + 1] - cumulative_[i]);
  }

 private:
  std::vector<double> cumulative_;
  double h_ = 1.0;
};

// ---------------------------------------------------------------------------
// Residual diagnostics

struct ResidualReport {
  std::vector<double> w;
  std::vector<double> residuals;      // I_exact - leading term
  std::vector<double> window_w;       // geometric centre of each window
  std::vector<double> window_max;     // max |R| per window
  double alpha = 0.0;                 // fitted envelope exponent
  double reference_exponent = 0.0;    // (k/j) beta_k
  double unconditional_exponent = 0.0;  // 1/j
};

struct ResidualOptions {
  double w_min = 1.0;
  std::size_t samples = 400;
  std::size_t windows = 8;
};

/// Samples R_{j,k}(w) = I_exact(w) - zeta(1+k/j)/zeta(k) w^{k/j} on a log
/// grid over [w_min, w_max] and fits log(max |R| per window) against log w.
inline ResidualReport residual_report(Exponent e, const Rational& w_max, double beta_k, const ResidualOptions& opt = {}) {
  if (w_max.get_d() <= opt.w_min) throw DomainError("residual_report: w_max below the first jump; report would be empty");
  if (opt.samples < 2 || opt.windows < 2) throw DomainError("residual_report: need at least two samples and windows");
  const EstimateConstants c(e);
  const auto stairs = i_staircase(e, w_max);
  ResidualReport rep;
  rep.reference_exponent = c.ratio * beta_k;
  rep.unconditional_exponent = 1.0 / e.j;
  const double l0 = std::log(opt.w_min), l1 = std::log(w_max.get_d());
  for (std::size_t i = 0; i < opt.samples; ++i) {
    const double wd = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(opt.samples - 1));
    Rational w(static_cast<long>(std::llround(wd * 1e6)), 1000000L);
    w.canonicalize();
    if (w > w_max) w = w_max;
    rep.w.push_back(w.get_d());
    rep.residuals.push_back(stairs.value_at(w).get_d() - i_first(c, w.get_d()));
  }
  std::vector<double> xs, ys;
  for (std::size_t b = 0; b < opt.windows; ++b) {
    const double lo = l0 + (l1 - l0) * static_cast<double>(b) / static_cast<double>(opt.windows);
    const double hi = l0 + (l1 - l0) * static_cast<double>(b + 1) / static_cast<double>(opt.windows);
    double env = 0.0;
    for (std::size_t i = 0; i < rep.w.size(); ++i) {
      const double lw = std::log(rep.w[i]);
      if (lw >= lo && (lw < hi || (b + 1 == opt.windows && lw <= hi))) env = std::max(env, std::abs(rep.residuals[i]));
    }
    if (env <= 0) continue;
    rep.window_w.push_back(std::exp(0.5 * (lo + hi)));
    rep.window_max.push_back(env);
    xs.push_back(0.5 * (lo + hi));
    ys.push_back(std::log(env));
  }
  if (xs.size() < 2) throw DomainError("residual_report: too few nonempty windows to fit");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  rep.alpha = sxy / sxx;
  return rep;
}

}  // namespace ratpow
