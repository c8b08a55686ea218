#include "spernerlab/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace sperner {

double gen_binomial(double z, int k) {
  if (k < 0) throw ConfigError("gen_binomial: k must be >= 0");
  double result = 1;
  for (int i = 0; i < k; ++i) result *= (z - i) / (i + 1);
  return result;
}

double log_gen_binomial(double z, int k) {
  if (k < 0) throw ConfigError("log_gen_binomial: k must be >= 0");
  if (k == 0) return 0;
  if (!(z > k - 1))
    throw ConfigError("log_gen_binomial: needs z > k-1 for positive factors");
  return std::lgamma(z + 1) - std::lgamma(z - k + 1) - std::lgamma(double(k) + 1);
}

double log_binomial(std::uint64_t n, std::uint64_t m) {
  if (m > n) throw ConfigError("log_binomial: m > n");
  return std::lgamma(double(n) + 1) - std::lgamma(double(m) + 1) -
         std::lgamma(double(n - m) + 1);
}

double log2_binomial(std::uint64_t n, std::uint64_t m) {
  return log_binomial(n, m) / std::log(2.0);
}

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::KkExactInversion: return "kk_exact_inversion";
    case BoundKind::IsoLog: return "iso_log";
    case BoundKind::IsoSmallA: return "iso_small_a";
    case BoundKind::ExpansionOneOverK: return "expansion_1_over_k";
  }
  return "?";
}

nlohmann::json BoundReport::to_json() const {
  nlohmann::json j{{"a", a}, {"k", k}, {"n", n},
                   {"kind", to_string(kind)}, {"value", value}};
  if (z) j["z"] = *z;
  if (expansion) j["expansion"] = *expansion;
  if (slack) j["slack"] = *slack;
  return j;
}

BoundReport kk_shadow_bound(std::uint64_t a, int k, int n,
                            std::optional<double> actual) {
  if (k < 1 || k > n) throw ConfigError("kk_shadow_bound: need 1 <= k <= n");
  double log_full = log_gen_binomial(double(n), k);
  double log_a = std::log(double(a));
  if (a < 1 || log_a > log_full + 1e-9)
    throw ConfigError("kk_shadow_bound: a out of [1, binom(n,k)]");

  // Monotone bisection for gen_binomial(z,k) = a on z in [k,n], log space.
  double lo = double(k), hi = double(n);
  for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (log_gen_binomial(mid, k) < log_a)
      lo = mid;
    else
      hi = mid;
  }
  double z = 0.5 * (lo + hi);

  BoundReport report;
  report.a = a;
  report.k = k;
  report.n = n;
  report.kind = BoundKind::KkExactInversion;
  report.z = z;
  report.value = gen_binomial(z, k - 1);
  if (2 * k > n + 1)  // strictly above the middle layer(s)
    report.expansion = (1.0 + 1.0 / k) * double(a);
  if (actual) report.slack = *actual - report.value;
  return report;
}

IsoBounds iso_bounds(std::uint64_t a, int k, std::optional<double> actual_t) {
  if (k < 1) throw ConfigError("iso_bounds: k must be >= 1");
  int n = 2 * k - 1;
  double log_layer = log_binomial(std::uint64_t(n), std::uint64_t(k));
  if (a < 1 || std::log(double(a)) > log_layer + 1e-9)
    throw ConfigError("iso_bounds: a out of [1, binom(2k-1,k)]");

  IsoBounds out;
  out.log_bound.a = a;
  out.log_bound.k = k;
  out.log_bound.n = n;
  out.log_bound.kind = BoundKind::IsoLog;
  out.log_bound.value = double(a) / k * (log_layer - std::log(double(a)));
  if (actual_t) out.log_bound.slack = *actual_t - out.log_bound.value;

  if (a <= std::uint64_t(k)) {
    BoundReport small;
    small.a = a;
    small.k = k;
    small.n = n;
    small.kind = BoundKind::IsoSmallA;
    small.value = double(k) * double(a) - double(a) * double(a - 1) / 2.0;
    out.small_a = small;
  }
  return out;
}

void CostLedger::add(std::string label, double bits, bool approximate) {
  if (!(bits >= 0))
    throw ConfigError("cost ledger entry '" + label + "' has negative bits");
  total_ += bits;
  entries_.push_back({std::move(label), bits, approximate});
}

nlohmann::json CostLedger::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries_) {
    nlohmann::json j{{"label", e.label}, {"bits", e.bits}};
    if (e.approximate) j["approximate"] = true;
    arr.push_back(j);
  }
  return arr;
}

CostLedger CostLedger::from_json(const nlohmann::json& j) {
  CostLedger ledger;
  for (const auto& entry : j)
    ledger.add(entry.at("label").get<std::string>(),
               entry.at("bits").get<double>(), entry.value("approximate", false));
  return ledger;
}

double cost_binomial_bits(std::uint64_t n, std::uint64_t m) {
  if (m > n) throw ConfigError("cost_binomial_bits: m > n");
  return log2_binomial(n, m);
}

double cost_binomial_at_most_bits(std::uint64_t n, std::uint64_t m,
                                  bool* approximate) {
  if (m > n) throw ConfigError("cost_binomial_at_most_bits: m > n");
  if (approximate) *approximate = false;
  if (m == 0) return 0;
  if (n <= 10000) {
    // exact: log-sum-exp over log binom(n,i), i <= m
    double max_log = 0;
    std::vector<double> logs(m + 1);
    for (std::uint64_t i = 0; i <= m; ++i) {
      logs[i] = log_binomial(n, i);
      max_log = std::max(max_log, logs[i]);
    }
    double sum = 0;
    for (double l : logs) sum += std::exp(l - max_log);
    return (max_log + std::log(sum)) / std::log(2.0);
  }
  if (approximate) *approximate = true;
  return double(m) * std::log2(std::exp(1.0) * double(n) / double(m));
}

double cost_tree_bits(double max_degree, std::uint64_t a) {
  if (max_degree < 1 || a < 1)
    throw ConfigError("cost_tree_bits: need d >= 1 and a >= 1");
  return double(a - 1) * std::log2(std::exp(1.0) * max_degree);
}

double small_family_cost_bits(int k, std::uint64_t a) {
  if (k < 2 || a < 1) throw ConfigError("small_family_cost_bits: need k >= 2, a >= 1");
  return log2_binomial(std::uint64_t(2 * k - 1), std::uint64_t(k)) +
         cost_tree_bits(double(k) * (k - 1), a);
}

double small_family_cost_display(int k, std::uint64_t a) {
  return 2.0 * k + 3.0 * double(a) * std::log2(double(k));
}

}  // namespace sperner
