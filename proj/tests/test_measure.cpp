#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "ratpow/counting.hpp"
#include "ratpow/measure.hpp"
#include "ratpow/zeta.hpp"

using namespace ratpow;

namespace {

const Exponent kHalf(1, 2);

RadicalCombo at(std::uint64_t base, std::uint64_t coef = 1, Exponent e = kHalf) { return RadicalCombo::single(e, base, coef); }

// t g(t) = 1 + G(t-1) for exp*(chi_[1,inf)/t), integrated with a fine
// explicit scheme.
double log_factor_oracle(double t_end, double h = 1e-4) {
  const auto n = static_cast<std::size_t>(std::llround(t_end / h));
  std::vector<double> g(n + 1, 0.0), G(n + 1, 0.0);
  const auto lag = static_cast<std::size_t>(std::llround(1.0 / h));
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = h * static_cast<double>(i);
    g[i] = i < lag ? 0.0 : (1.0 + G[i - lag]) / t;
    G[i] = G[i - 1] + 0.5 * h * (g[i - 1] + g[i]);
  }
  return g[n];
}

}  // namespace

TEST(BuildDI, Examples) {
  const auto mu = build_dI(kHalf, Rational(2));
  EXPECT_EQ(mu.size(), 4u);
  EXPECT_EQ(mu.weight_at(at(1)), 1);
  EXPECT_EQ(mu.weight_at(at(2)), 1);
  EXPECT_EQ(mu.weight_at(at(3)), 1);
  EXPECT_EQ(mu.weight_at(at(1, 2)), Rational(1, 2));
  EXPECT_TRUE(build_dI(kHalf, Rational(1, 2)).empty());
  const auto cube = build_dI(Exponent(1, 3), Rational(1));
  EXPECT_EQ(cube.size(), 1u);
  EXPECT_EQ(cube.weight_at(at(1, 1, Exponent(1, 3))), 1);
  EXPECT_THROW(build_dI(kHalf, Rational(0)), DomainError);
}

TEST(BuildDI, MatchesDirectEnumeration) {
  for (Exponent e : {Exponent(1, 2), Exponent(2, 3), Exponent(3, 2)}) {
    const Rational cap(9);
    const auto mu = build_dI(e, cap);
    std::size_t expected = 0;
    for (std::uint64_t m = 1; m <= 9; ++m)
      for (std::uint64_t n = 1; std::pow(static_cast<double>(n), e.value()) * m <= 9 + 1e-9; ++n)
        if (is_kfree(e.k, static_cast<long>(n)) && compare_threshold(at(n, m, e), cap) != std::strong_ordering::greater) {
          ++expected;
          ASSERT_EQ(mu.weight_at(at(n, m, e)), Rational(1, static_cast<unsigned long>(m)));
        }
    EXPECT_EQ(mu.size(), expected);
  }
}

TEST(Convolve, Examples) {
  const Rational cap(2);
  const auto mu = build_dI(kHalf, cap);
  EXPECT_EQ(convolve(PointMassMeasure::delta0(kHalf, cap), mu, cap), mu);
  PointMassMeasure one(kHalf, cap);
  one.add(at(1), 1);
  const auto sq = convolve(one, one, cap);
  EXPECT_EQ(sq.size(), 1u);
  EXPECT_EQ(sq.weight_at(at(1, 2)), 1);
  const auto musq = convolve(mu, mu, cap);
  EXPECT_EQ(musq.size(), 1u);
  EXPECT_EQ(musq.weight_at(at(1, 2)), 1);
  EXPECT_THROW(convolve(mu, build_dI(Exponent(1, 3), cap), cap), DomainError);
}

TEST(Convolve, AboveCapRejectedOnAdd) {
  PointMassMeasure m(kHalf, Rational(1));
  EXPECT_THROW(m.add(at(2), 1), DomainError);
  EXPECT_NO_THROW(m.add(at(1), 1));
}

TEST(ConvExp, Examples) {
  const Rational cap(2);
  EXPECT_EQ(conv_exp(PointMassMeasure(kHalf, cap), cap), PointMassMeasure::delta0(kHalf, cap));
  const auto s = conv_exp(build_dI(kHalf, cap), cap);
  EXPECT_EQ(s.weight_at(at(1, 2)), 1);
  EXPECT_EQ(s.weight_at(at(2)), 1);
  EXPECT_EQ(s.weight_at(RadicalCombo(kHalf)), 1);
  EXPECT_THROW(conv_exp(PointMassMeasure::delta0(kHalf, cap), cap), DomainError);
}

TEST(ConvExp, EveryWeightIsOne) {
  for (Exponent e : {Exponent(1, 2), Exponent(1, 3), Exponent(2, 3)}) {
    const Rational cap(6);
    const auto s = conv_exp(build_dI(e, cap), cap);
    for (const auto& [p, w] : s.masses()) ASSERT_EQ(w, 1) << to_string(p);
    EXPECT_EQ(s.size(), s_exact(e, cap) + 1);
  }
}

TEST(ConvExp, ExponentialOfSumIsProduct) {
  const Rational cap(5);
  for (Exponent e : {Exponent(1, 2), Exponent(2, 3)}) {
    const auto dI = build_dI(e, cap);
    PointMassMeasure odd(e, cap), even(e, cap);
    for (const auto& [p, w] : dI.masses()) (p.terms()[0].base % 2 ? odd : even).add(p, w);
    EXPECT_EQ(conv_exp(odd + even, cap), convolve(conv_exp(odd, cap), conv_exp(even, cap), cap));
  }
}

TEST(ConvExp, PreservesCumulativeOrder) {
  std::mt19937_64 rng(23);
  const Rational cap(6);
  std::uniform_int_distribution<std::uint64_t> base(1, 30), coef(1, 4), num(1, 5);
  for (int trial = 0; trial < 20; ++trial) {
    PointMassMeasure F(kHalf, cap), G(kHalf, cap);
    for (int i = 0; i < 6; ++i) {
      std::uint64_t b = base(rng);
      while (!is_kfree(2, static_cast<long>(b))) b = base(rng);
      const auto p = at(b, coef(rng));
      if (compare_threshold(p, cap) == std::strong_ordering::greater) continue;
      const Rational w(static_cast<unsigned long>(num(rng)), 3ul);
      F.add(p, w);
      // G gets the same mass at a point no larger, plus extra mass
      G.add(p.terms()[0].coef > 1 ? at(b, p.terms()[0].coef - 1) : p, w);
      G.add(at(1, coef(rng)), Rational(1, 7));
    }
    const auto eF = conv_exp(F, cap), eG = conv_exp(G, cap);
    for (int i = 1; i <= 24; ++i) {
      const Rational w(i, 4);
      ASSERT_LE(cumulative(eF, w, true), cumulative(eG, w, true)) << trial << " w=" << to_string(w);
    }
  }
}

TEST(Cumulative, Examples) {
  const Rational cap(2);
  const auto s = conv_exp(build_dI(kHalf, cap), cap);
  EXPECT_EQ(cumulative(s, cap, false), 4);
  const auto d = PointMassMeasure::delta0(kHalf, Rational(5));
  EXPECT_EQ(cumulative(d, Rational(5), true), 1);
  EXPECT_EQ(cumulative(d, Rational(5), false), 0);
  EXPECT_THROW(cumulative(s, Rational(3), false), DomainError);
}

TEST(Dump, SortedByValue) {
  std::ostringstream os;
  dump(os, build_dI(kHalf, Rational(2)));
  EXPECT_EQ(os.str(),
            "1*r(1)\t1\t1\n"
            "1*r(2)\t1\t1.4142135623731\n"
            "1*r(3)\t1\t1.73205080756888\n"
            "2*r(1)\t1/2\t2\n");
}

TEST(GridConvolve, Examples) {
  const Rational h(1, 128);
  const auto f = GridDensity::sample(h, 4.0, [](double t) { return std::sin(t); });
  GridDensity delta = GridDensity::zero(h, 4.0);
  delta.atom0 = 1.0;
  const auto same = grid_convolve(f, delta);
  for (std::size_t i = 0; i < f.size(); ++i) ASSERT_DOUBLE_EQ(same.samples[i], f.samples[i]);
  const auto one = GridDensity::sample(h, 4.0, [](double) { return 1.0; });
  const auto ramp = grid_convolve(one, one);
  for (std::size_t i = 0; i < ramp.size(); ++i) ASSERT_NEAR(ramp.samples[i], h.get_d() * static_cast<double>(i), 1e-12);
  const auto z = grid_convolve(GridDensity::zero(h, 4.0), f);
  for (double v : z.samples) ASSERT_EQ(v, 0.0);
  EXPECT_THROW(grid_convolve(f, GridDensity::zero(Rational(1, 64), 4.0)), DomainError);
}

TEST(GridConvolve, SecondOrderOnSmoothDensities) {
  // t * t = t^3 / 6
  double prev_err = 0.0;
  for (int n : {32, 64, 128}) {
    const Rational h(1, n);
    const auto f = GridDensity::sample(h, 3.0, [](double t) { return t; });
    const auto c = grid_convolve(f, f);
    const double err = std::abs(c.samples.back() - 27.0 / 6);
    if (prev_err > 0) {
      EXPECT_LT(err, prev_err / 3.5);
    }
    prev_err = err;
  }
}

TEST(GridConvExp, ZeroDensityIsUnitAtom) {
  const auto g = grid_conv_exp(GridDensity::zero(Rational(1, 64), 3.0), 3.0);
  EXPECT_EQ(g.atom0, 1.0);
  for (double v : g.samples) EXPECT_EQ(v, 0.0);
}

TEST(GridConvExp, ConstantDensityMatchesSeries) {
  const double c = 1.3;
  const Rational h(1, 256);
  const auto g = grid_conv_exp(GridDensity::sample(h, 5.0, [&](double) { return c; }), 5.0);
  for (double t : {0.5, 1.0, 2.5, 5.0}) {
    // sum_m c^m t^{m-1} / (m! (m-1)!)
    double s = 0.0, term = c;
    for (int m = 1; m < 60; ++m) {
      s += term;
      term *= c * t / ((m + 1.0) * m);
    }
    EXPECT_NEAR(g.at(t), s, 1e-4 * s) << t;
  }
  EXPECT_EQ(g.atom0, 1.0);
}

TEST(GridConvExp, AtomAtZeroFactorsOut) {
  const Rational h(1, 128);
  auto f = GridDensity::sample(h, 3.0, [](double t) { return t; });
  const auto plain = grid_conv_exp(f, 3.0);
  f.atom0 = 0.25;
  const auto shifted = grid_conv_exp(f, 3.0);
  EXPECT_DOUBLE_EQ(shifted.atom0, std::exp(0.25));
  for (std::size_t i = 0; i < plain.size(); ++i) ASSERT_NEAR(shifted.samples[i], std::exp(0.25) * plain.samples[i], 1e-12);
}

TEST(GridConvExp, LogTruncatedFactorTracksRenewalOracle) {
  const Rational h(1, 256);
  const auto f = GridDensity::sample(h, 8.0, [](double t) { return t < 1 ? 0.0 : (t == 1 ? 0.5 : 1.0 / t); });
  const auto g = grid_conv_exp(f, 8.0);
  for (double t : {1.5, 2.0, 2.5, 3.0, 4.0, 6.0, 8.0}) EXPECT_NEAR(g.at(t), log_factor_oracle(t), 2e-3) << t;
  // the factor settles at e^{-gamma}
  for (double t : {4.0, 5.0, 6.0, 8.0}) EXPECT_NEAR(g.at(t), std::exp(-kEulerGamma), 4e-3) << t;
}
