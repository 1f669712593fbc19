#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ratpow/estimates.hpp"
#include "ratpow/format.hpp"
#include "ratpow/verify.hpp"

using namespace ratpow;
using json = nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kIdentityViolation = 3 };

struct RunConfig {
  long j = 1;
  long k = 2;
  std::string w = "1";
  std::string w_max = "15";
  std::string step;
  std::string row_step = "1/2";
  int prec_bits = 64;
  std::string zeros_file;
  std::optional<double> height;
  std::string format;
  bool via_conv_exp = false;
  std::string hybrid_w0 = "0";
  std::vector<std::string> only;
  double budget = 5e7;

  Exponent exponent() const { return Exponent(j, k); }
};

void add_exponent_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--j", cfg.j, "numerator of the exponent j/k")->capture_default_str();
  cmd->add_option("--k", cfg.k, "denominator of the exponent j/k")->capture_default_str();
}

void add_budget_option(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--budget", cfg.budget, "maximum number of enumerated elements")->capture_default_str();
}

void add_format_option(CLI::App* cmd, RunConfig& cfg, const std::string& dflt, std::vector<std::string> allowed) {
  cmd->add_option("--format", cfg.format, "output format (default " + dflt + ")")
      ->check(CLI::IsMember(std::move(allowed)));
}

/// Predicted exp* support size at w from the first-order estimate; refuses
/// configurations beyond the budget.
bool within_budget(const EstimateConstants& c, double w, double budget) { return 1.25 * s_first(c, w) <= budget; }

CountingLimits limits_of(const RunConfig& cfg) {
  CountingLimits l;
  l.max_elements = static_cast<std::size_t>(cfg.budget);
  return l;
}

int cmd_count(const RunConfig& cfg) {
  const Exponent e = cfg.exponent();
  const Rational w = parse_rational(cfg.w);
  if (w < 0) throw DomainError("--w must be >= 0");
  const EstimateConstants c(e);
  if (!within_budget(c, w.get_d(), cfg.budget))
    throw BudgetError("w = " + cfg.w + " exceeds the enumeration budget (predicted size " +
                      format_number(s_first(c, w.get_d())) + ")");
  const std::uint64_t direct = s_exact(e, w, limits_of(cfg));
  std::optional<std::uint64_t> via;
  if (cfg.via_conv_exp) via = s_via_conv_exp(e, w);
  const bool agree = !via || *via == direct;
  if (cfg.format == "json") {
    json out = {{"j", e.j}, {"k", e.k}, {"w", to_string(w)}, {"S_exact", direct}};
    if (via) {
      out["S_via_conv_exp"] = *via;
      out["agree"] = agree;
    }
    std::cout << out.dump() << '\n';
  } else {
    std::cout << direct;
    if (via) std::cout << ' ' << *via << ' ' << (agree ? "OK" : "MISMATCH");
    std::cout << '\n';
  }
  return agree ? kOk : kIdentityViolation;
}

std::vector<Rational> row_grid(const Rational& w_max, const Rational& step) {
  if (step <= 0) throw DomainError("step must be > 0");
  if (w_max < 0) throw DomainError("--w-max must be >= 0");
  std::vector<Rational> out;
  for (Rational w = 0; w <= w_max; w += step) out.push_back(w);
  return out;
}

void emit_table(const RunConfig& cfg, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& row : rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (row[i] == kNotAvailable)
          obj[header[i]] = nullptr;
        else
          obj[header[i]] = std::stod(row[i]);
      }
      arr.push_back(obj);
    }
    std::cout << arr.dump() << '\n';
    return;
  }
  for (std::size_t i = 0; i < header.size(); ++i) std::cout << (i ? "," : "") << header[i];
  std::cout << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << row[i];
    std::cout << '\n';
  }
}

ZeroTable load_table(const RunConfig& cfg) {
  if (cfg.zeros_file.empty()) throw DomainError("--zeros-file is required when --height is given");
  return load_zeros_file(cfg.zeros_file);
}

int cmd_staircase(const RunConfig& cfg) {
  const Exponent e = cfg.exponent();
  const EstimateConstants c(e);
  const Rational w_max = parse_rational(cfg.w_max);
  const auto grid = row_grid(w_max, parse_rational(cfg.step.empty() ? "1/10" : cfg.step));
  std::optional<ResidueSum> residue;
  if (cfg.height) {
    if (*cfg.height < 0) throw DomainError("--height must be >= 0");
    residue.emplace(c, load_table(cfg), *cfg.height);
  }
  const auto stairs = i_staircase(e, w_max > 0 ? w_max : Rational(1));
  std::vector<std::string> header = {"w", "I_exact", "I_first", "I_center"};
  if (residue) header.push_back("I_residue");
  std::vector<std::vector<std::string>> rows;
  for (const auto& w : grid) {
    const double wd = w.get_d();
    std::vector<std::string> row = {format_number(wd), format_number(stairs.value_at(w).get_d()),
                                    format_number(i_first(c, wd)), format_number(i_center(c, wd))};
    if (residue) row.push_back(format_number((*residue)(wd)));
    rows.push_back(std::move(row));
  }
  if (cfg.format == "text") {
    // jump list with certified enclosures at the requested precision
    for (const auto& jump : stairs.jumps) {
      const auto v = combo_value(jump.at, cfg.prec_bits);
      std::cout << to_string(jump.at) << '\t' << to_string(jump.weight) << '\t' << v.lo.to_string() << '\t'
                << v.hi.to_string() << '\n';
    }
    return kOk;
  }
  emit_table(cfg, header, rows);
  return kOk;
}

int cmd_estimate_s(const RunConfig& cfg) {
  const Exponent e = cfg.exponent();
  const EstimateConstants c(e);
  const Rational w_max = parse_rational(cfg.w_max);
  const auto grid = row_grid(w_max, parse_rational(cfg.row_step));
  const Rational h = parse_rational(cfg.step.empty() ? "1/256" : cfg.step);
  if (h <= 0) throw DomainError("--step must be > 0");
  const Rational w0 = parse_rational(cfg.hybrid_w0);
  if (w0 < 0) throw DomainError("--hybrid-w0 must be >= 0");

  Rational exact_cap = 0;
  for (const auto& w : grid)
    if (within_budget(c, w.get_d(), cfg.budget)) exact_cap = w;
  std::optional<ElementCounter> counter;
  if (exact_cap > 0) counter.emplace(e, exact_cap, limits_of(cfg));
  const CenterlineS center(c, w_max.get_d(), h);
  std::optional<HybridS> hybrid;
  if (w0 > 0) hybrid.emplace(c, w_max.get_d(), w0, h);

  std::vector<std::string> header = {"w", "S_exact", "S_first", "S_center"};
  if (hybrid) header.push_back("S_hybrid");
  std::vector<std::vector<std::string>> rows;
  for (const auto& w : grid) {
    const double wd = w.get_d();
    std::string exact = kNotAvailable;
    if (w <= exact_cap) exact = std::to_string(counter ? counter->count(w) : 0);
    std::vector<std::string> row = {format_number(wd), exact, format_number(s_first(c, wd)), format_number(center(wd))};
    if (hybrid) row.push_back(format_number((*hybrid)(wd)));
    rows.push_back(std::move(row));
  }
  emit_table(cfg, header, rows);
  return kOk;
}

int cmd_verify(const RunConfig& cfg) {
  VerifyOptions opt;
  if (!cfg.zeros_file.empty()) opt.zeros_file = cfg.zeros_file;
  const auto results = run_checks(opt, cfg.only);
  bool all = true;
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& r : results) {
      arr.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
      all = all && r.pass;
    }
    std::cout << arr.dump(2) << '\n';
  } else {
    for (const auto& r : results) {
      std::cout << format_result(r) << '\n';
      all = all && r.pass;
    }
  }
  return all ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counting sums of rational powers j/k of integers"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* count = app.add_subcommand("count", "print S_{j,k}(w)");
  add_exponent_options(count, cfg);
  add_budget_option(count, cfg);
  count->add_option("--w", cfg.w, "threshold (integer, p/q or decimal)")->required();
  count->add_flag("--via-conv-exp", cfg.via_conv_exp, "also count through exp*(dI) and compare");
  add_format_option(count, cfg, "text", {"text", "json"});

  auto* stairs = app.add_subcommand("staircase", "tabulate I_{j,k} and its estimates");
  add_exponent_options(stairs, cfg);
  stairs->add_option("--w-max", cfg.w_max, "last grid point")->capture_default_str();
  stairs->add_option("--step", cfg.step, "grid spacing (default 1/10)");
  stairs->add_option("--zeros-file", cfg.zeros_file, "zeta zero ordinates, one per line");
  stairs->add_option("--height", cfg.height, "use zeros with ordinate below this height");
  stairs->add_option("--prec-bits", cfg.prec_bits, "precision of the jump enclosures in text output")
      ->check(CLI::Range(16, 1 << 16))
      ->capture_default_str();
  add_format_option(stairs, cfg, "csv", {"csv", "json", "text"});

  auto* est = app.add_subcommand("estimate-s", "tabulate S_{j,k} and its estimates");
  add_exponent_options(est, cfg);
  add_budget_option(est, cfg);
  est->add_option("--w-max", cfg.w_max, "last row")->capture_default_str();
  est->add_option("--row-step", cfg.row_step, "row spacing")->capture_default_str();
  est->add_option("--step", cfg.step, "grid step of the centerline convolution (default 1/256)");
  est->add_option("--hybrid-w0", cfg.hybrid_w0, "exact dI up to w0, then the centerline density (0 disables)")
      ->capture_default_str();
  add_format_option(est, cfg, "csv", {"csv", "json"});

  auto* verify = app.add_subcommand("verify", "run the acceptance checks");
  verify->add_option("--only", cfg.only, "run only the named check (repeatable)");
  verify->add_option("--zeros-file", cfg.zeros_file, "zeta zero ordinates, one per line");
  add_format_option(verify, cfg, "text", {"text", "json"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return kConfigError;
  }

  if (cfg.format.empty()) cfg.format = (*stairs || *est) ? "csv" : "text";
  try {
    if (*count) return cmd_count(cfg);
    if (*stairs) return cmd_staircase(cfg);
    if (*est) return cmd_estimate_s(cfg);
    if (*verify) return cmd_verify(cfg);
  } catch (const InternalError& ex) {
    std::cerr << "identity violation: " << ex.what() << '\n';
    return kIdentityViolation;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}
