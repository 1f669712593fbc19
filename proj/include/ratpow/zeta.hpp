#pragma once

// Riemann zeta for real and complex arguments (Euler-Maclaurin with the
// functional equation for Re z <= -1), zeta', the tri-zeta ratio and the
// zero-table reader.

#include <array>
#include <cmath>
#include <complex>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "radical.hpp"

namespace ratpow {

using Complex = std::complex<double>;

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

struct ZetaConfig {
  /// Largest |Im z| accepted. The bundled 100-zero table reaches 236.5.
  double max_height = 300.0;
  /// Number of Bernoulli correction terms.
  int bernoulli_terms = 30;
};

inline const ZetaConfig& default_zeta_config() {
  static const ZetaConfig cfg{};
  return cfg;
}

namespace detail {

/// B_{2k}/(2k)! for k = 1..60.
inline const std::array<double, 61>& bernoulli_over_factorial() {
  static const std::array<double, 61> table = [] {
    std::array<double, 61> t{};
    const double two_pi = 2 * std::numbers::pi;
    constexpr double small[10][2] = {{1, 6},      {-1, 30},   {1, 42},       {-1, 30},     {5, 66},
                                     {-691, 2730}, {7, 6}, {-3617, 510}, {43867, 798}, {-174611, 330}};
    for (int k = 1; k <= 60; ++k) {
      // B_{2k}/(2k)! = (-1)^{k+1} 2 zeta(2k) / (2 pi)^{2k}
      if (k <= 10) {
        double fact = 1.0;
        for (int i = 2; i <= 2 * k; ++i) fact *= i;
        t[k] = small[k - 1][0] / small[k - 1][1] / fact;
        continue;
      }
      double z2k = 0.0;
      for (int n = 200; n >= 1; --n) z2k += std::pow(static_cast<double>(n), -2.0 * k);
      t[k] = (k % 2 ? 2.0 : -2.0) * z2k / std::pow(two_pi, 2.0 * k);
    }
    return t;
  }();
  return table;
}

inline void check_height(Complex z, const ZetaConfig& cfg) {
  if (std::abs(z.imag()) > cfg.max_height)
    throw DomainError("zeta: |Im z| = " + std::to_string(std::abs(z.imag())) + " exceeds the configured height cap");
}

inline int auto_terms(Complex z, int m) { return static_cast<int>(std::ceil((std::abs(z) + 2.0 * m) / std::numbers::pi)) + 5; }

}  // namespace detail

/// Value and a computed bound on the Euler-Maclaurin remainder.
struct ZetaEval {
  Complex value;
  double error_bound;
};

/// Euler-Maclaurin summation with N direct terms and M Bernoulli terms.
inline ZetaEval zeta_em_bounded(Complex s, int terms, int bernoulli) {
  if (s == Complex(1.0, 0.0)) throw DomainError("zeta: pole at z = 1");
  if (bernoulli < 1 || bernoulli > 59 || terms < 2) throw DomainError("zeta_em: parameters out of range");
  const auto& bf = detail::bernoulli_over_factorial();
  Complex sum = 0.0;
  for (int n = terms - 1; n >= 1; --n) sum += std::exp(-s * std::log(static_cast<double>(n)));
  const double N = terms;
  const Complex N_s = std::exp(-s * std::log(N));
  sum += N_s * N / (s - 1.0) + 0.5 * N_s;
  Complex poly = s;  // s (s+1) ... (s+2k-2)
  Complex npow = N_s / N;
  Complex last = 0.0;
  for (int k = 1; k <= bernoulli; ++k) {
    last = bf[k] * poly * npow;
    sum += last;
    poly *= (s + (2.0 * k - 1)) * (s + 2.0 * k);
    npow /= N * N;
  }
  const Complex next = bf[bernoulli + 1] * poly * npow;
  const double sigma = s.real() + 2 * bernoulli + 1;
  const double bound = sigma > 0 ? std::abs(s + (2.0 * bernoulli + 1)) / sigma * std::abs(next) : std::abs(last);
  return {sum, bound};
}

inline Complex zeta_em(Complex z, int terms, int bernoulli) { return zeta_em_bounded(z, terms, bernoulli).value; }

/// Euler-Maclaurin with parameters chosen from |z|; valid for Re z > -1.
inline Complex zeta_em(Complex z, const ZetaConfig& cfg = default_zeta_config()) {
  detail::check_height(z, cfg);
  if (z.real() <= -1.0) throw DomainError("zeta_em: Re z must be > -1");
  return zeta_em(z, detail::auto_terms(z, cfg.bernoulli_terms), cfg.bernoulli_terms);
}

/// d/dz of the Euler-Maclaurin expansion, term by term.
inline Complex zeta_em_deriv(Complex s, int terms, int bernoulli) {
  if (s == Complex(1.0, 0.0)) throw DomainError("zeta': pole at z = 1");
  const auto& bf = detail::bernoulli_over_factorial();
  Complex sum = 0.0;
  for (int n = terms - 1; n >= 2; --n) {
    const double ln = std::log(static_cast<double>(n));
    sum -= ln * std::exp(-s * ln);
  }
  const double N = terms, lnN = std::log(N);
  const Complex N_s = std::exp(-s * lnN);
  // d/ds N^{1-s}/(s-1) and d/ds N^{-s}/2
  sum += -lnN * N_s * N / (s - 1.0) - N_s * N / ((s - 1.0) * (s - 1.0)) - 0.5 * lnN * N_s;
  Complex poly = s, dpoly = 1.0;
  Complex npow = N_s / N;
  for (int k = 1; k <= bernoulli; ++k) {
    // d/ds [poly * N^{-s-2k+1}] = dpoly*npow - lnN*poly*npow
    sum += bf[k] * (dpoly - lnN * poly) * npow;
    const Complex a = s + (2.0 * k - 1), b = s + 2.0 * k;
    dpoly = dpoly * a * b + poly * (a + b);
    poly *= a * b;
    npow /= N * N;
  }
  return sum;
}

namespace detail {

/// log Gamma(z) for Re z >= 1/2 via Lanczos (g = 7, n = 9).
inline Complex lgamma_right(Complex z) {
  static constexpr std::array<double, 9> c = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                               771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                               -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  z -= 1.0;
  Complex x = c[0];
  for (int i = 1; i < 9; ++i) x += c[i] / (z + static_cast<double>(i));
  const Complex t = z + 7.5;
  return 0.5 * std::log(2 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace detail

/// Complex Gamma with reflection for Re z < 1/2.
inline Complex gamma(Complex z) {
  if (z.real() < 0.5) {
    const Complex s = std::sin(std::numbers::pi * z);
    if (std::abs(s) == 0.0) throw DomainError("gamma: pole");
    return std::numbers::pi / (s * std::exp(detail::lgamma_right(1.0 - z)));
  }
  return std::exp(detail::lgamma_right(z));
}

/// Functional equation zeta(z) = 2^z pi^{z-1} sin(pi z/2) Gamma(1-z) zeta(1-z).
inline Complex zeta_reflect(Complex z, const ZetaConfig& cfg = default_zeta_config()) {
  detail::check_height(z, cfg);
  if (z.imag() == 0.0) {
    const double x = z.real();
    if (x < 0 && std::fmod(x, 2.0) == 0.0) return 0.0;
    if (x == 0.0) return -0.5;
  }
  const Complex one_minus = 1.0 - z;
  const Complex log_front = z * std::log(2.0) + (z - 1.0) * std::log(std::numbers::pi) + detail::lgamma_right(one_minus);
  const Complex reflected = one_minus.real() > -1.0 ? zeta_em(one_minus, cfg) : zeta_reflect(one_minus, cfg);
  return std::exp(log_front) * std::sin(std::numbers::pi * z / 2.0) * reflected;
}

/// zeta(z) anywhere except the pole, within the height cap.
inline Complex zeta(Complex z, const ZetaConfig& cfg = default_zeta_config()) {
  return z.real() > -1.0 ? zeta_em(z, cfg) : zeta_reflect(z, cfg);
}

inline double zeta(double x) { return zeta(Complex(x, 0.0)).real(); }

/// zeta'(z) for Re z > -1.
inline Complex zeta_deriv(Complex z, const ZetaConfig& cfg = default_zeta_config()) {
  detail::check_height(z, cfg);
  if (z.real() <= -1.0) throw DomainError("zeta_deriv: Re z must be > -1");
  return zeta_em_deriv(z, detail::auto_terms(z, cfg.bernoulli_terms), cfg.bernoulli_terms);
}

struct TriZetaConfig {
  double pole_tolerance = 1e-8;
  double denominator_floor = 1e-12;
};

/// zeta(kz+1) zeta(jz) / zeta(jkz).
inline Complex tri_zeta(Exponent e, Complex z, const TriZetaConfig& tc = {}, const ZetaConfig& cfg = default_zeta_config()) {
  if (std::abs(static_cast<double>(e.j) * z - 1.0) < tc.pole_tolerance)
    throw ConditioningError("tri_zeta: too close to the pole jz = 1");
  if (std::abs(static_cast<double>(e.k) * z) < tc.pole_tolerance)
    throw ConditioningError("tri_zeta: too close to the pole kz + 1 = 1");
  const Complex den = zeta(static_cast<double>(e.j * e.k) * z, cfg);
  if (std::abs(den) < tc.denominator_floor) throw ConditioningError("tri_zeta: denominator zeta(jkz) vanishes");
  return zeta(static_cast<double>(e.k) * z + 1.0, cfg) * zeta(static_cast<double>(e.j) * z, cfg) / den;
}

/// zeta(-kz) zeta(1-jz) / zeta(1-jkz); for (1,2) and Re z < -1/2 this is
/// the Dirichlet series sum h_l / l^{1-z}.
inline Complex reflected_tri_zeta(Exponent e, Complex z, const ZetaConfig& cfg = default_zeta_config()) {
  const double j = e.j, k = e.k;
  return zeta(-k * z, cfg) * zeta(1.0 - j * z, cfg) / zeta(1.0 - j * k * z, cfg);
}

/// Factor F with tri_zeta(z) = F(z) * reflected_tri_zeta(z):
/// (2/k)(2 pi)^{(k+j-jk)z} cos(k z pi/2) sin(j z pi/2)/sin(jk z pi/2)
///   * Gamma(-kz) Gamma(-jz) / Gamma(-jkz).
inline Complex reflection_factor(Exponent e, Complex z) {
  const double j = e.j, k = e.k, pi = std::numbers::pi;
  return (2.0 / k) * std::exp((k + j - j * k) * z * std::log(2 * pi)) * std::cos(k * z * pi / 2.0) *
         std::sin(j * z * pi / 2.0) / std::sin(j * k * z * pi / 2.0) * gamma(-k * z) * gamma(-j * z) / gamma(-j * k * z);
}

// ---------------------------------------------------------------------------
// Zero tables

/// Ordinates gamma_t > 0 of zeros 1/2 + i gamma_t, ascending, with zeta'
/// at each zero.
struct ZeroTable {
  std::vector<double> ordinates;
  std::vector<Complex> derivs;

  std::size_t size() const { return ordinates.size(); }
  bool empty() const { return ordinates.empty(); }
  double max_ordinate() const { return ordinates.empty() ? 0.0 : ordinates.back(); }
};

struct ZeroValidation {
  double zeta_tolerance = 1e-6;
  double deriv_floor = 1e-8;
};

/// Reads one decimal ordinate per line ('#' comments and blank lines
/// ignored), checks ascending order, and validates each ordinate as a
/// simple zero on the critical line.
inline ZeroTable load_zeros(std::istream& in, const ZeroValidation& v = {}, const ZetaConfig& cfg = default_zeta_config()) {
  ZeroTable table;
  std::vector<std::size_t> lines;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t\r");
    const std::string tok = line.substr(b, e - b + 1);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw ParseError("not a number: '" + tok + "'", lineno);
    }
    if (used != tok.size() || !std::isfinite(value)) throw ParseError("not a number: '" + tok + "'", lineno);
    if (value <= 0.0) throw ParseError("ordinate must be positive", lineno);
    if (!table.ordinates.empty() && value <= table.ordinates.back()) throw ParseError("ordinates not ascending", lineno);
    table.ordinates.push_back(value);
    lines.push_back(lineno);
  }
  table.derivs.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const Complex rho(0.5, table.ordinates[i]);
    if (std::abs(rho.imag()) > cfg.max_height)
      throw DataError("line " + std::to_string(lines[i]) + ": ordinate above the zeta height cap");
    const double mag = std::abs(zeta_em(rho, cfg));
    if (!(mag < v.zeta_tolerance))
      throw DataError("line " + std::to_string(lines[i]) + ": |zeta(1/2 + i*" + std::to_string(table.ordinates[i]) +
                      ")| = " + std::to_string(mag) + " is not a zero");
    const Complex d = zeta_deriv(rho, cfg);
    if (std::abs(d) < v.deriv_floor)
      throw DataError("line " + std::to_string(lines[i]) + ": zeta' vanishes; multiple zeros are not supported");
    table.derivs.push_back(d);
  }
  return table;
}

inline ZeroTable load_zeros_file(const std::string& path, const ZeroValidation& v = {}) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open zeros file '" + path + "'");
  return load_zeros(in, v);
}

}  // namespace ratpow
