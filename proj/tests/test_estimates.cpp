#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ratpow/counting.hpp"
#include "ratpow/estimates.hpp"

using namespace ratpow;

namespace {

constexpr double kZeta2 = 1.6449340668482264365;
constexpr double kZeta3 = 1.2020569031595942854;
constexpr double kGamma = 0.57721566490153286061;

const Exponent kHalf(1, 2);

double rms(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

// c^m w^{2m} / ((2m)! m!), c = 2 zeta(3)/zeta(2)
double s_first_half_term(double w, int m) {
  const double c = 2 * kZeta3 / kZeta2;
  double t = 1.0;
  for (int i = 1; i <= m; ++i) t *= c * w * w / i;
  for (int i = 1; i <= 2 * m; ++i) t /= i;
  return t;
}

double s_first_half_series(double w, int terms) {
  double sum = 0.0;
  for (int m = terms; m >= 1; --m) sum += s_first_half_term(w, m);
  return sum;
}

ZeroTable bundled_zeros() { return load_zeros_file(RATPOW_DATA_DIR "/zeros100.txt"); }

}  // namespace

TEST(Constants, FirstOrderCoefficient) {
  const EstimateConstants c(kHalf);
  EXPECT_NEAR(c.leading, kZeta3 / kZeta2, 1e-13);
  EXPECT_NEAR(c.center, kGamma - 0.5 * std::log(2 * std::numbers::pi), 1e-14);
  EXPECT_NEAR(EstimateConstants(Exponent(2, 3)).center, kGamma - 2 * (2.0 / 3) * std::log(2 * std::numbers::pi), 1e-14);
}

TEST(IFirst, Examples) {
  const EstimateConstants c(kHalf);
  EXPECT_EQ(i_first(c, 0), 0.0);
  EXPECT_EQ(i_first(c, -1), 0.0);
  EXPECT_NEAR(i_first(c, 1), 0.7308, 1e-4);
  const double exact = i_exact(kHalf, Rational(15)).get_d();
  EXPECT_LE(std::abs(i_first(c, 15) - exact) / exact, 0.03);
}

TEST(ICenter, Examples) {
  const EstimateConstants c(kHalf);
  EXPECT_NEAR(i_center(c, 1), kZeta3 / kZeta2 + kGamma - 0.5 * std::log(2 * std::numbers::pi), 1e-12);
  EXPECT_EQ(i_center(c, 0), 0.0);
  // below 1 only the first-order term and the constant remain
  EXPECT_NEAR(i_center(c, 0.5), i_first(c, 0.5) + c.center, 1e-15);
}

TEST(ICenter, EntwinedWithStaircase) {
  const EstimateConstants c(kHalf);
  const auto stairs = i_staircase(kHalf, Rational(15));
  double worst = 0;
  for (int i = 50; i <= 150; ++i) {
    const double w = i / 10.0;
    worst = std::max(worst, std::abs(i_center(c, w) - stairs.value_at(Rational(i, 10)).get_d()));
  }
  // step heights near w = 15 reach ~ 2, the curve stays within a few
  EXPECT_LT(worst, 4.0);
}

TEST(IResidue, EmptySumIsCenterline) {
  const EstimateConstants c(kHalf);
  const auto zeros = bundled_zeros();
  const ResidueSum none(c, zeros, 0.0);
  EXPECT_EQ(none.zeros_used(), 0u);
  const ResidueSum empty_table(c, ZeroTable{}, 100.0);
  for (double w : {1.0, 2.5, 7.0, 19.0}) {
    EXPECT_DOUBLE_EQ(none(w), i_center(c, w));
    EXPECT_DOUBLE_EQ(empty_table(w), i_center(c, w));
  }
}

TEST(IResidue, SummandsFiniteAndConjugateSymmetric) {
  const auto zeros = bundled_zeros();
  const Complex rho(0.5, zeros.ordinates[0]);
  const Complex rho_bar = std::conj(rho);
  const double w = 7.3;
  auto summand = [&](Complex r) {
    return zeta(r + 1.0) * zeta(r / 2.0) / zeta_deriv(r) * std::exp(r * std::log(w)) / r;
  };
  const Complex a = summand(rho), b = summand(rho_bar);
  EXPECT_TRUE(std::isfinite(a.real()) && std::isfinite(a.imag()));
  EXPECT_LT(std::abs(a - std::conj(b)), 1e-9 * std::abs(a));
  const ResidueSum one(EstimateConstants(kHalf), zeros, 15.0);
  ASSERT_EQ(one.zeros_used(), 1u);
  EXPECT_NEAR(one.oscillation(w), (a + b).real(), 1e-9 * std::abs(a));
}

TEST(IResidue, ImprovesOnCenterline) {
  const EstimateConstants c(kHalf);
  const auto zeros = bundled_zeros();
  const auto stairs = i_staircase(kHalf, Rational(20));
  std::vector<double> truth, ws;
  for (int i = 40; i <= 400; ++i) {
    ws.push_back(i / 20.0);
    truth.push_back(stairs.value_at(Rational(i, 20)).get_d());
  }
  auto err_at = [&](double T) {
    const ResidueSum s(c, zeros, T);
    std::vector<double> d;
    for (std::size_t i = 0; i < ws.size(); ++i) d.push_back(s(ws[i]) - truth[i]);
    return rms(d);
  };
  const double e0 = err_at(0), e100 = err_at(100);
  EXPECT_LT(e100, e0);
  // recorded, not asserted: the error tends to fall as T grows
  for (double T : {25.0, 50.0, 75.0, 100.0, 237.0}) RecordProperty("rms_T" + std::to_string(static_cast<int>(T)), std::to_string(err_at(T)));
}

TEST(SFirst, MatchesExplicitSeries) {
  const EstimateConstants c(kHalf);
  EXPECT_EQ(s_first(c, 0), 0.0);
  for (double w : {0.5, 1.0, 2.0, 5.0, 10.0}) EXPECT_NEAR(s_first(c, w), s_first_half_series(w, 40), 1e-12 * s_first(c, w)) << w;
  // first twenty terms individually
  for (int m = 1; m <= 20; ++m) {
    const double w = 3.0;
    const double term = s_first_half_term(w, m);
    const double cc = c.density_c;
    const double lib = std::exp(m * std::log(cc) - std::lgamma(m + 1.0) - std::lgamma(2.0 * m) + 2 * m * std::log(w) - std::log(2.0 * m));
    EXPECT_NEAR(lib, term, 1e-12 * term) << m;
  }
  // scale only, no accuracy promise
  EXPECT_GT(s_first(c, 2), 4 / 2.0);
  EXPECT_LT(s_first(c, 2), 4 * 2.0);
}

TEST(SFirst, AgreesWithGridConvExp) {
  for (Exponent e : {Exponent(1, 2), Exponent(1, 3), Exponent(2, 3)}) {
    const EstimateConstants c(e);
    const Rational h(1, 256);
    const auto f = GridDensity::sample(h, 6.0, [&](double t) { return first_order_dI(c, t); });
    const auto g = grid_conv_exp(f, 6.0);
    for (double w : {1.0, 3.0, 6.0}) {
      const double ref = s_first(c, w);
      EXPECT_NEAR(g.integral_to(w), ref, 0.02 * std::max(1.0, ref)) << e.j << "/" << e.k << " w=" << w;
    }
  }
}

TEST(LemmaSeries, DensityIntegratesToCumulative) {
  for (double a : {0.0, 0.5, 1.0, 2.0}) {
    const double c = 1.4615;
    // Simpson on the density
    const int n = 2000;
    const double W = 4.0, h = W / n;
    double s = conv_exp_power_density(c, a, 0) + conv_exp_power_density(c, a, W);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * conv_exp_power_density(c, a, i * h);
    EXPECT_NEAR(s * h / 3, conv_exp_power_integral(c, a, W), 1e-6 * conv_exp_power_integral(c, a, W)) << a;
  }
  EXPECT_THROW(conv_exp_power_density(1.0, -1.0, 1.0), DomainError);
}

TEST(SCenter, WithinTenPercentOfExact) {
  const EstimateConstants c(kHalf);
  const CenterlineS center(c, 30.0, Rational(1, 256));
  EXPECT_EQ(center(0), 0.0);
  EXPECT_EQ(s_center(c, 0), 0.0);
  CountingLimits limits;
  limits.max_elements = 200'000'000;
  for (int w = 5; w <= 30; w += 5) {
    const double exact = static_cast<double>(s_exact(kHalf, Rational(w), limits));
    EXPECT_LE(std::abs(center(w) - exact) / exact, 0.10) << "w=" << w;
  }
}

TEST(SCenter, LogFactorPlateau) {
  const CenterlineS center(EstimateConstants(kHalf), 8.0, Rational(1, 256));
  // settles at e^{-gamma}, not at the coarse-grid value 0.59
  EXPECT_NEAR(center.log_factor().at(3.0), std::exp(-kGamma), 5e-3);
  EXPECT_NEAR(center.log_factor().at(6.0), std::exp(-kGamma), 2e-3);
}

TEST(Estimators, VanishAtZeroAndNondecreasing) {
  for (Exponent e : {Exponent(1, 2), Exponent(1, 3), Exponent(2, 3)}) {
    const EstimateConstants c(e);
    const CenterlineS center(c, 12.0, Rational(1, 128));
    EXPECT_EQ(i_first(c, 0), 0.0);
    EXPECT_EQ(i_center(c, 0), 0.0);
    EXPECT_EQ(s_first(c, 0), 0.0);
    EXPECT_EQ(center(0), 0.0);
    double pf = -1, pc = -INFINITY, ps = -1, pz = -1;
    for (int i = 0; i <= 110; ++i) {
      const double w = 1.0 + i / 10.0;
      ASSERT_GE(i_first(c, w), pf);
      ASSERT_GE(i_center(c, w), pc);
      ASSERT_GE(s_first(c, w), ps);
      ASSERT_GE(center(w), pz);
      pf = i_first(c, w), pc = i_center(c, w), ps = s_first(c, w), pz = center(w);
    }
  }
}

TEST(Hybrid, ExactBelowSwitchPoint) {
  const EstimateConstants c(kHalf);
  const HybridS hyb(c, 10.0, Rational(4), Rational(1, 512));
  EXPECT_EQ(hyb(0), 0.0);
  for (double w : {1.3, 2.5, 3.1, 3.9}) {
    const Rational wr(static_cast<long>(w * 10), 10);
    EXPECT_NEAR(hyb(w), static_cast<double>(s_exact(kHalf, wr)), 0.5) << w;
  }
  // past w0 it stays within the centerline's accuracy band
  for (int w : {6, 8, 10}) {
    const double exact = static_cast<double>(s_exact(kHalf, Rational(w)));
    EXPECT_LE(std::abs(hyb(w) - exact) / exact, 0.10) << w;
  }
  EXPECT_THROW(HybridS(c, 5.0, Rational(0), Rational(1, 256)), DomainError);
}

TEST(Residual, EnvelopeExponentHalf) {
  const auto rep = residual_report(kHalf, Rational(12), 0.5);
  EXPECT_TRUE(std::is_sorted(rep.w.begin(), rep.w.end()));
  EXPECT_EQ(rep.w.size(), rep.residuals.size());
  EXPECT_DOUBLE_EQ(rep.reference_exponent, 1.0);
  EXPECT_DOUBLE_EQ(rep.unconditional_exponent, 1.0);
  EXPECT_LE(rep.alpha, 1.3);
  EXPECT_NEAR(rep.w.front(), 1.0, 1e-12);
  EXPECT_NEAR(rep.w.back(), 12.0, 1e-12);
}

TEST(Residual, EnvelopeExponentThird) {
  const auto rep = residual_report(Exponent(1, 3), Rational(12), 1.0 / 3);
  EXPECT_NEAR(rep.reference_exponent, 1.0, 1e-12);
  EXPECT_LE(rep.alpha, 1.3);
}

TEST(Residual, EmptyRangeRejected) {
  EXPECT_THROW(residual_report(kHalf, Rational(1, 2), 0.5), DomainError);
  EXPECT_THROW(residual_report(kHalf, Rational(1), 0.5), DomainError);
}
