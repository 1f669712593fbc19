#pragma once

// The acceptance checks, shared by `ratpow verify` and the acceptance binary.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "counting.hpp"
#include "estimates.hpp"
#include "zeta.hpp"

#ifndef RATPOW_DATA_DIR
#define RATPOW_DATA_DIR "data"
#endif

namespace ratpow {

struct VerifyOptions {
  std::string zeros_file = RATPOW_DATA_DIR "/zeros100.txt";
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

namespace checks {

inline std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

inline double rms(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

/// S via the convolution exponential equals the direct count exactly, and
/// every nonzero weight of exp*(dI) is exactly 1.
inline CheckResult theorem1(const VerifyOptions&) {
  CheckResult r{"theorem1", false, {}, 0.0};
  r.pass = true;
  std::ostringstream os;
  const Rational cap(8);
  for (auto [j, k] : {std::pair{1, 2}, {1, 3}, {2, 3}}) {
    const Exponent e{j, k};
    const auto mu = s_measure(e, cap);
    std::size_t bad_weights = 0;
    for (const auto& [p, w] : mu.masses())
      if (!p.is_zero() && w != 1) ++bad_weights;
    std::size_t mism = 0;
    for (int i = 1; i <= 25; ++i) {
      Rational w(8 * i, 25);
      w.canonicalize();
      const Rational via = cumulative(mu, w, false);
      if (!is_integer(via) || to_u64(via.get_num()) != s_exact(e, w)) ++mism;
    }
    if (bad_weights || mism) r.pass = false;
    os << "(" << j << "," << k << "): support " << mu.size() << ", non-unit weights " << bad_weights
       << ", count mismatches " << mism << "/25; ";
  }
  r.detail = os.str();
  return r;
}

/// I_exact equals the Q_k construction as exact rationals.
inline CheckResult staircase(const VerifyOptions&) {
  CheckResult r{"staircase", false, {}, 0.0};
  r.pass = true;
  std::ostringstream os;
  for (auto [j, k, top] : {std::tuple{1, 2, 150}, {1, 3, 80}, {2, 3, 80}, {3, 2, 80}}) {
    const Exponent e{j, k};
    const auto stairs = i_staircase(e, Rational(top, 10));
    KfreeSieve sieve(static_cast<unsigned>(k));
    std::size_t mism = 0;
    for (int i = 0; i <= top; ++i) {
      Rational w(i, 10);
      w.canonicalize();
      if (stairs.value_at(w) != i_via_q(e, w, &sieve)) ++mism;
    }
    if (mism) r.pass = false;
    os << "(" << j << "," << k << ") " << mism << "/" << top + 1 << " mismatches; ";
  }
  r.detail = os.str();
  return r;
}

inline CheckResult first3pct(const VerifyOptions&) {
  CheckResult r{"first3pct", false, {}, 0.0};
  const Exponent e{1, 2};
  const double exact = i_exact(e, Rational(15)).get_d();
  const double est = i_first(EstimateConstants(e), 15.0);
  const double rel = std::abs(est - exact) / exact;
  r.pass = rel <= 0.035;
  r.detail = fmt("I_exact(15)=%.6g I_first(15)=%.6g rel err %.4f (limit 0.035)", exact, est, rel);
  return r;
}

inline CheckResult center10pct(const VerifyOptions&) {
  CheckResult r{"center10pct", false, {}, 0.0};
  const Exponent e{1, 2};
  const CenterlineS center(EstimateConstants(e), 20.0, Rational(1, 256));
  const auto counter = ElementCounter(e, Rational(20));
  r.pass = true;
  std::string d;
  for (int w : {5, 10, 15, 20}) {
    const double exact = static_cast<double>(counter.count(Rational(w)));
    const double est = center(w);
    const double rel = std::abs(est - exact) / exact;
    if (!(rel <= 0.10)) r.pass = false;
    d += fmt("w=%d S=%.0f S_center=%.6g rel %.4f; ", w, exact, est, rel);
  }
  r.detail = d + "(limit 0.10, h=1/256)";
  return r;
}

inline CheckResult plateau(const VerifyOptions&) {
  CheckResult r{"plateau", false, {}, 0.0};
  const Rational step(1, 256);
  const auto g = grid_conv_exp(GridDensity::sample(step, 6.0, log_truncated_dI), 6.0);
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double t = g.h() * static_cast<double>(i);
    if (t < 3.0 || t > 6.0) continue;
    lo = std::min(lo, g.samples[i]);
    hi = std::max(hi, g.samples[i]);
  }
  r.pass = lo >= 0.57 && hi <= 0.61;
  r.detail = fmt("exp*(chi/t) on [3,6]: min %.5f max %.5f (band [0.57,0.61]; e^-gamma = %.5f)", lo, hi,
                 std::exp(-kEulerGamma));
  return r;
}

/// Tri-zeta against partial Dirichlet sums of a_l and, through the
/// reflection factor, of h_l, with explicit tail majorants.
inline CheckResult dirichlet(const VerifyOptions&) {
  CheckResult r{"dirichlet", false, {}, 0.0};
  r.pass = true;
  const Exponent e{1, 2};
  const std::uint64_t L = 1000000;
  std::string d;
  const auto a = a_coeff_table(1, 2, L);
  for (double x : {1.5, 2.0, 3.0}) {
    double partial = 0.0;
    for (std::uint64_t l = L; l >= 1; --l)
      if (a[l]) partial += std::pow(static_cast<double>(l), -x) / a[l];
    // 0 < a_l <= 1 for j = 1, so the tail lies in [0, L^{1-x}/(x-1)]
    const double tail = std::pow(static_cast<double>(L), 1 - x) / (x - 1);
    const double target = tri_zeta(e, Complex(x, 0)).real();
    const double gap = target - partial;
    const bool ok = gap >= -1e-10 && gap <= tail + 1e-10;
    if (!ok) r.pass = false;
    d += fmt("a: x=%.1f gap %.3g tail<=%.3g %s; ", x, gap, tail, ok ? "ok" : "FAIL");
  }
  const auto h = h_coeff_table(L);
  const std::uint64_t M = iroot(L, 2);
  for (double x : {-0.6, -0.8, -1.2}) {
    const double s = 1 - x;
    double partial = 0.0;
    for (std::uint64_t l = L; l >= 1; --l)
      if (h[l]) partial += static_cast<double>(h[l]) * std::pow(static_cast<double>(l), -s);
    // h_l <= sigma_2(m) <= zeta(2) m^2 for l = n m^2; sum over all n >= 1
    double tail = 0.0;
    for (std::uint64_t m = 1; m <= M; ++m) {
      const double N = std::floor(static_cast<double>(L) / static_cast<double>(m * m));
      tail += std::pow(static_cast<double>(m), 2 - 2 * s) * std::pow(N, 1 - s) / (s - 1);
    }
    tail += zeta(s) * std::pow(static_cast<double>(M), 3 - 2 * s) / (2 * s - 3);
    tail *= zeta(2.0);
    const Complex z(x, 0);
    const double factor = reflection_factor(e, z).real();
    const double target = tri_zeta(e, z).real();
    const double reflected = reflected_tri_zeta(e, z).real();
    const double gap = reflected - partial;
    const bool series_ok = gap >= -1e-9 && gap <= tail;
    const bool ok = series_ok && std::abs(target - factor * partial) <= std::abs(factor) * tail + 1e-9 &&
                    std::abs(target - factor * reflected) <= 1e-9 * std::max(1.0, std::abs(target));
    if (!ok) r.pass = false;
    d += fmt("h: x=%.1f gap %.3g tail<=%.3g %s; ", x, gap, tail, ok ? "ok" : "FAIL");
  }
  r.detail = d;
  return r;
}

inline CheckResult zeta_engine(const VerifyOptions& opt) {
  CheckResult r{"zeta", false, {}, 0.0};
  const double pi = std::numbers::pi;
  const double e2 = std::abs(zeta(2.0) - pi * pi / 6);
  const double em1 = std::abs(zeta(-1.0) + 1.0 / 12);
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> re(-0.9, 3.0), im(-30.0, 30.0);
  double worst = 0.0;
  for (int n = 0; n < 50;) {
    const Complex z(re(rng), im(rng));
    if (std::abs(z - 1.0) < 0.5) continue;
    const double hstep = 1e-5;
    const Complex fd = (zeta(z + hstep) - zeta(z - hstep)) / (2 * hstep);
    worst = std::max(worst, std::abs(zeta_deriv(z) - fd));
    ++n;
  }
  std::string zeros_detail;
  bool zeros_ok = true;
  try {
    const auto table = load_zeros_file(opt.zeros_file);
    double worst_zero = 0.0;
    for (double g : table.ordinates) worst_zero = std::max(worst_zero, std::abs(zeta(Complex(0.5, g))));
    zeros_ok = worst_zero < 1e-6;
    zeros_detail = fmt("%zu zeros, max |zeta(rho)| %.2g", table.size(), worst_zero);
  } catch (const std::exception& ex) {
    zeros_ok = false;
    zeros_detail = std::string("zeros file rejected: ") + ex.what();
  }
  r.pass = e2 <= 1e-12 && em1 <= 1e-10 && worst <= 1e-6 && zeros_ok;
  r.detail = fmt("|zeta(2)-pi^2/6| %.2g, |zeta(-1)+1/12| %.2g, max |zeta'-fd| %.2g over 50 points; ", e2, em1, worst) +
             zeros_detail;
  return r;
}

inline CheckResult residue(const VerifyOptions& opt) {
  CheckResult r{"residue", false, {}, 0.0};
  const Exponent e{1, 2};
  const EstimateConstants c(e);
  ZeroTable table;
  try {
    table = load_zeros_file(opt.zeros_file);
  } catch (const std::exception& ex) {
    r.detail = std::string("zeros file rejected: ") + ex.what();
    return r;
  }
  const ResidueSum sum(c, table, table.max_ordinate() + 1.0);
  const auto stairs = i_staircase(e, Rational(20));
  std::vector<double> dc, dr;
  for (int i = 40; i <= 400; ++i) {
    const Rational w(i, 20);
    const double exact = stairs.value_at(w).get_d();
    dc.push_back(i_center(c, w.get_d()) - exact);
    dr.push_back(sum(w.get_d()) - exact);
  }
  const double rc = rms(dc), rr = rms(dr);
  r.pass = rr < rc;
  r.detail = fmt("%zu zeros: RMS residue %.4f vs centerline %.4f on [2,20]", sum.zeros_used(), rr, rc);
  return r;
}

inline CheckResult residual(const VerifyOptions&) {
  CheckResult r{"residual", false, {}, 0.0};
  const auto rep = residual_report(Exponent{1, 2}, Rational(12), 0.5);
  r.pass = rep.alpha <= 1.3;
  r.detail = fmt("fitted alpha %.4f (limit 1.3; reference %.3g, unconditional %.3g)", rep.alpha,
                 rep.reference_exponent, rep.unconditional_exponent);
  return r;
}

/// Grid exp* of c v^a against the closed-form series on [0, 5].
inline CheckResult lemma(const VerifyOptions&) {
  CheckResult r{"lemma", false, {}, 0.0};
  r.pass = true;
  const Rational step(1, 256);
  const double h = step.get_d();
  const double limit = std::max(1e-3, 5 * h);
  double worst = 0.0;
  std::string d;
  for (double a : {0.0, 0.5, 1.0, 2.0})
    for (double c : {0.5, 1.4615}) {
      const auto f = GridDensity::sample(step, 5.0, [&](double t) { return c * std::pow(t, a); });
      const auto g = grid_conv_exp(f, 5.0);
      double err = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double t = h * static_cast<double>(i);
        const double s = conv_exp_power_density(c, a, t);
        err = std::max(err, std::abs(g.samples[i] - s) / std::max(1.0, std::abs(s)));
      }
      worst = std::max(worst, err);
      if (!(err <= limit)) r.pass = false;
    }
  r.detail = fmt("max relative deviation %.3g (limit %.3g)", worst, limit);
  return r;
}

}  // namespace checks

struct NamedCheck {
  const char* name;
  std::function<CheckResult(const VerifyOptions&)> run;
};

inline const std::vector<NamedCheck>& all_checks() {
  static const std::vector<NamedCheck> list = {
      {"theorem1", checks::theorem1}, {"staircase", checks::staircase}, {"first3pct", checks::first3pct},
      {"center10pct", checks::center10pct}, {"plateau", checks::plateau}, {"dirichlet", checks::dirichlet},
      {"zeta", checks::zeta_engine}, {"residue", checks::residue}, {"residual", checks::residual},
      {"lemma", checks::lemma},
  };
  return list;
}

/// Runs the named checks (all when `only` is empty). Exceptions count as
/// failures. Throws DomainError for unknown names.
inline std::vector<CheckResult> run_checks(const VerifyOptions& opt, const std::vector<std::string>& only = {}) {
  for (const auto& name : only) {
    bool known = false;
    for (const auto& c : all_checks()) known = known || name == c.name;
    if (!known) throw DomainError("unknown check: " + name);
  }
  std::vector<CheckResult> out;
  for (const auto& c : all_checks()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.name) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult res;
    try {
      res = c.run(opt);
    } catch (const std::exception& ex) {
      res = CheckResult{c.name, false, std::string("exception: ") + ex.what(), 0.0};
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(res));
  }
  return out;
}

inline std::string format_result(const CheckResult& r) {
  return std::string(r.pass ? "PASS " : "FAIL ") + r.name + " (" + checks::fmt("%.2fs", r.seconds) + "): " + r.detail;
}

}  // namespace ratpow
