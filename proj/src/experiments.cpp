#include "spernerlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_set>

namespace sperner {

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  std::size_t workers = std::min<std::size_t>(std::size_t(threads), count);
  pool.reserve(workers);
  for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

// ---- sweeps ----------------------------------------------------------------

double SweepRow::mean_width() const {
  int solved = holds + fails;
  return solved > 0 ? double(width_sum) / solved : 0.0;
}
double SweepRow::mean_isolated() const {
  int solved = holds + fails;
  return solved > 0 ? double(isolated_sum) / solved : 0.0;
}
double SweepRow::mean_nearly_isolated() const {
  int solved = holds + fails;
  return solved > 0 ? double(nearly_sum) / solved : 0.0;
}

namespace {

struct TrialOutcome {
  int verdict = 2;  // 0 holds, 1 fails, 2 error
  std::int64_t width = 0;
  std::int64_t isolated = 0;
  std::int64_t nearly = 0;
  std::int64_t three_layer = 0;
  std::int64_t defect_pairs = 0;
};

TrialOutcome run_sweep_trial(const std::string& kind, int n, double p,
                             RngStream stream, const SolverGuards& guards) {
  TrialOutcome out;
  try {
    Family x = sample_powerset(n, p, stream);
    auto report = kind == "hit" ? check_hit_conclusion(x, false, guards)
                                : check_main_conclusion(x, false, guards);
    out.verdict = report.verdict == Verdict::Fails ? 1 : 0;
    out.width = std::int64_t(report.width);
    out.three_layer = report.witness_in_three_layers ? 1 : 0;
    if ((n + 1) / 2 + 1 <= n)
      out.defect_pairs = std::int64_t(defect_pair_count(x, (n + 1) / 2));
    int upper = (n + 1) / 2 + 1;
    if (upper <= n) {
      auto special = find_special(x, upper);
      out.isolated = std::int64_t(special.isolated.size());
      out.nearly = std::int64_t(special.nearly_isolated.size());
    }
    int lower = n / 2 - 1;
    if (lower >= 0)
      out.nearly += std::int64_t(find_special(x, lower).nearly_isolated.size());
  } catch (const GuardError&) {
    out.verdict = 2;
  }
  return out;
}

}  // namespace

std::vector<SweepRow> sweep(const std::string& kind,
                            const std::vector<int>& n_values,
                            const std::vector<double>& p_grid, int trials,
                            std::uint64_t master_seed, int threads,
                            const SolverGuards& guards) {
  if (kind != "main" && kind != "hit")
    throw ConfigError("sweep kind must be 'main' or 'hit'");
  if (trials < 1) throw ConfigError("sweep needs trials >= 1");

  std::vector<SweepRow> rows;
  std::uint64_t cell = 0;
  for (int n : n_values) {
    for (double p : p_grid) {
      auto start = std::chrono::steady_clock::now();
      std::vector<TrialOutcome> outcomes;
      outcomes.resize(std::size_t(trials));
      parallel_for(std::size_t(trials), threads, [&](std::size_t i) {
        outcomes[i] = run_sweep_trial(
            kind, n, p, derive_stream(master_seed, (cell << 32) | i), guards);
      });

      SweepRow row;
      row.kind = kind;
      row.n = n;
      row.p = p;
      row.trials = trials;
      row.master_seed = master_seed;
      for (const auto& o : outcomes) {
        if (o.verdict == 0) ++row.holds;
        else if (o.verdict == 1) ++row.fails;
        else ++row.errors;
        row.width_sum += o.width;
        row.isolated_sum += o.isolated;
        row.nearly_sum += o.nearly;
        row.three_layer_sum += o.three_layer;
        row.defect_pair_sum += o.defect_pairs;
      }
      row.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
              .count();
      rows.push_back(std::move(row));
      ++cell;
    }
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "kind,n_or_k,p,trials,holds,fails,errors,mean_width,mean_isolated,"
         "mean_nearly_isolated,master_seed\n";
  for (const auto& r : rows) {
    out << r.kind << ',' << r.n << ',' << format_double(r.p) << ',' << r.trials
        << ',' << r.holds << ',' << r.fails << ',' << r.errors << ','
        << format_double(r.mean_width()) << ',' << format_double(r.mean_isolated())
        << ',' << format_double(r.mean_nearly_isolated()) << ',' << r.master_seed
        << '\n';
  }
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  write_sweep_csv(rows, out);
  return out.str();
}

nlohmann::json sweep_json(const std::vector<SweepRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"kind", r.kind},
                   {"n_or_k", r.n},
                   {"p", r.p},
                   {"trials", r.trials},
                   {"holds", r.holds},
                   {"fails", r.fails},
                   {"errors", r.errors},
                   {"mean_width", r.mean_width()},
                   {"mean_isolated", r.mean_isolated()},
                   {"mean_nearly_isolated", r.mean_nearly_isolated()},
                   {"master_seed", r.master_seed}});
  }
  return arr;
}

// ---- audit rows -------------------------------------------------------------

void write_audit_csv(const std::vector<AuditRow>& rows, std::ostream& out) {
  out << "id,point,lhs,rhs,margin,pass\n";
  for (const auto& r : rows)
    out << r.id << ',' << r.point << ',' << format_double(r.lhs) << ','
        << format_double(r.rhs) << ',' << format_double(r.margin) << ','
        << (r.pass ? 1 : 0) << '\n';
}

std::string audit_csv(const std::vector<AuditRow>& rows) {
  std::ostringstream out;
  write_audit_csv(rows, out);
  return out.str();
}

nlohmann::json audit_json(const std::vector<AuditRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows)
    arr.push_back({{"id", r.id},
                   {"point", r.point},
                   {"lhs", r.lhs},
                   {"rhs", r.rhs},
                   {"margin", r.margin},
                   {"pass", r.pass}});
  return arr;
}

// ---- expectation audit ------------------------------------------------------

nlohmann::json ExpectationAudit::to_json() const {
  return {{"id", row.id},          {"point", row.point},
          {"lhs", row.lhs},        {"rhs", row.rhs},
          {"margin", row.margin},  {"pass", row.pass},
          {"exact", exact},        {"mc_mean", mc_mean},
          {"mc_stderr", mc_stderr},{"trials", trials},
          {"master_seed", master_seed}};
}

std::string ExpectationAudit::csv() const {
  std::ostringstream out;
  out << "id,point,lhs,rhs,margin,pass,exact,mc_mean,mc_stderr,trials,master_seed\n"
      << row.id << ',' << row.point << ',' << format_double(row.lhs) << ','
      << format_double(row.rhs) << ',' << format_double(row.margin) << ','
      << (row.pass ? 1 : 0) << ',' << format_double(exact) << ','
      << format_double(mc_mean) << ',' << format_double(mc_stderr) << ','
      << trials << ',' << master_seed << '\n';
  return out.str();
}

ExpectationAudit expectation_audit(int n, double p, int layer,
                                   SpecialKind kind, int trials,
                                   std::uint64_t master_seed, int threads) {
  check_ground(n);
  if (trials < 2) throw ConfigError("expectation_audit needs trials >= 2");
  if (p < 0 || p > 1) throw ConfigError("expectation_audit: p outside [0,1]");
  if (layer < 0 || layer > n || 2 * layer == n)
    throw ConfigError("expectation_audit: layer must be directional");
  bool lower = 2 * layer > n;
  int m = lower ? layer : n - layer;  // shadow size of one layer element
  int shadow_layer = lower ? layer - 1 : layer + 1;

  double exact = double(binom_u64(n, layer)) * p * std::pow(1 - p, m);
  if (kind == SpecialKind::NearlyIsolated)
    exact += double(binom_u64(n, layer)) * p * m * p * std::pow(1 - p, m - 1);

  // Only the layer and its shadow layer matter; sample just those.
  Family ground = full_layer(n, layer).unite(full_layer(n, shadow_layer));

  std::vector<std::int64_t> counts;
  counts.resize(std::size_t(trials));
  parallel_for(std::size_t(trials), threads, [&](std::size_t i) {
    RngStream stream = derive_stream(master_seed, i);
    Family x = sample_family(ground, p, stream);
    auto special = find_special(x, layer);
    counts[i] = std::int64_t(kind == SpecialKind::Isolated
                                 ? special.isolated.size()
                                 : special.nearly_isolated.size());
  });

  std::int64_t sum = 0, sum_sq = 0;
  for (std::int64_t c : counts) {
    sum += c;
    sum_sq += c * c;
  }
  double mean = double(sum) / trials;
  double variance =
      (double(sum_sq) - trials * mean * mean) / double(trials - 1);
  double stderr_ = std::sqrt(std::max(0.0, variance) / trials);

  ExpectationAudit audit;
  audit.exact = exact;
  audit.mc_mean = mean;
  audit.mc_stderr = stderr_;
  audit.trials = trials;
  audit.master_seed = master_seed;
  audit.row.id = kind == SpecialKind::Isolated ? "expectation_isolated"
                                               : "expectation_nearly_isolated";
  {
    std::ostringstream point;
    point << "n=" << n << ";p=" << format_double(p) << ";layer=" << layer;
    audit.row.point = point.str();
  }
  audit.row.lhs = std::abs(mean - exact);
  audit.row.rhs = 4 * stderr_;
  audit.row.margin = audit.row.rhs - audit.row.lhs;
  audit.row.pass = audit.row.margin >= -1e-12;
  return audit;
}

// ---- inequality audit --------------------------------------------------------

double small_a_delta(double eps) {
  if (!(eps > 0)) throw ConfigError("small_a_delta: eps must be positive");
  return std::min(eps / 2 / (1 + eps), (eps / 12) * (eps / 12));
}

namespace {

double f_iso(int k, double y) {
  double whole = log_gen_binomial(2.0 * k - 1, k);
  double shifted = log_gen_binomial(2.0 * k - 1 - y, k);
  return y / (double(k) - y) - (whole - shifted) / double(k);
}

}  // namespace

std::vector<AuditRow> inequality_audit(const InequalityAuditConfig& cfg) {
  std::vector<AuditRow> rows;
  auto push = [&](std::string id, std::string point, double lhs, double rhs) {
    AuditRow row{std::move(id), std::move(point), lhs, rhs, rhs - lhs, false};
    double tol = cfg.tolerance * std::max(1.0, std::abs(lhs));
    row.pass = row.margin >= -tol;
    rows.push_back(std::move(row));
  };

  // f(y) >= 0 over [0, k-1]; f(0) = 0 exactly.
  for (int k : cfg.f_k_values) {
    for (int i = 0; i < cfg.f_grid_points; ++i) {
      double y = double(k - 1) * i / double(cfg.f_grid_points - 1);
      std::ostringstream point;
      point << "k=" << k << ";y=" << format_double(y);
      push("iso_f_nonneg", point.str(), 0.0, f_iso(k, y));
    }
  }

  // The two displayed exponent steps of the small-family union bound, per
  // unit of ka: delta*log2(4/delta) - (1+eps)(1-delta)
  //   <= 3*sqrt(delta) - (1+eps/2)  <=  -(1+eps/4).
  for (double eps : cfg.eps_values) {
    double delta = small_a_delta(eps);
    std::ostringstream point;
    point << "eps=" << format_double(eps) << ";delta=" << format_double(delta);
    double e1 = delta * std::log2(4 / delta) - (1 + eps) * (1 - delta);
    double e2 = 3 * std::sqrt(delta) - (1 + eps / 2);
    double e3 = -(1 + eps / 4);
    push("small_a_chain_step1", point.str(), e1, e2);
    push("small_a_chain_step2", point.str(), e2, e3);
  }

  // Probability exponent (1+eps/4)ka beats the cost 2k + 3a log2 k from the
  // smallest a on; report that a.
  for (double eps : cfg.eps_values) {
    for (int k : cfg.cost_k_values) {
      double coef = (1 + eps / 4) * k - 3 * std::log2(double(k));
      std::ostringstream point;
      point << "k=" << k << ";eps=" << format_double(eps);
      if (coef <= 0) {
        point << ";a*=none";
        double a = 2;
        push("small_a_beats_cost", point.str(), (1 + eps / 4) * k * a - 1,
             2.0 * k + 3 * a * std::log2(double(k)) - 1);  // records a failure
        continue;
      }
      std::uint64_t a_star =
          std::max<std::uint64_t>(2, std::uint64_t(std::floor(2.0 * k / coef)) + 1);
      point << ";a*=" << a_star;
      double cost = 2.0 * k + 3.0 * double(a_star) * std::log2(double(k));
      double exponent = (1 + eps / 4) * double(k) * double(a_star);
      push("small_a_beats_cost", point.str(), cost, exponent);
    }
  }

  // Above the middle layer the inverted shadow bound dominates (1+1/k)|A|.
  for (int n : cfg.expansion_n_values) {
    for (int k = (n + 1) / 2 + 1; k <= n; ++k) {
      std::uint64_t layer = binom_u64(n, k);
      std::vector<std::uint64_t> sizes;
      for (std::uint64_t a = 1; a < layer; a *= 2) sizes.push_back(a);
      sizes.push_back(layer);
      for (std::uint64_t a : sizes) {
        std::ostringstream point;
        point << "n=" << n << ";k=" << k << ";a=" << a;
        push("kk_expansion", point.str(), (1.0 + 1.0 / k) * double(a),
             kk_shadow_bound(a, k, n).value);
      }
    }
  }
  return rows;
}

// ---- 2-linked growth ----------------------------------------------------------

namespace {

// J-neighbors of v in L_k over [2k-1]: swap one member for one non-member.
std::vector<Mask> j_neighbors(Mask v, int n) {
  std::vector<Mask> out;
  Mask members = v, outside_all = ground_mask(n) & ~v;
  while (members) {
    Mask bit_i = members & (~members + 1);
    Mask outside = outside_all;
    while (outside) {
      Mask bit_j = outside & (~outside + 1);
      out.push_back((v ^ bit_i) | bit_j);
      outside ^= bit_j;
    }
    members ^= bit_i;
  }
  return out;
}

void sorted_insert(std::vector<Mask>& v, Mask m) {
  auto it = std::lower_bound(v.begin(), v.end(), m);
  if (it == v.end() || *it != m) v.insert(it, m);
}

}  // namespace

Family grow_closed_two_linked(int k, std::size_t target, RngStream& rng) {
  MiddleGraph mg(k);
  int n = mg.ground();
  if (target < 1) throw ConfigError("grow_closed_two_linked: target >= 1");
  Family layer = mg.upper();
  if (target > layer.size()) target = layer.size();

  std::vector<Mask> current;
  current.push_back(layer.masks()[rng.next_below(layer.size())]);
  std::vector<Mask> frontier;
  for (Mask u : j_neighbors(current[0], n)) sorted_insert(frontier, u);

  while (current.size() < target && !frontier.empty()) {
    std::size_t pick = rng.next_below(frontier.size());
    Mask v = frontier[pick];
    frontier.erase(frontier.begin() + std::ptrdiff_t(pick));
    sorted_insert(current, v);
    for (Mask u : j_neighbors(v, n))
      if (!std::binary_search(current.begin(), current.end(), u))
        sorted_insert(frontier, u);
  }
  return closure(Family(n, std::move(current)), ShadowDir::Lower);
}

// ---- closure DFS enumeration ----------------------------------------------------

namespace {

// Bit-parallel closure arithmetic for one small layer (|L_k| <= 64).
struct SmallLayer {
  int k = 0;
  std::vector<Mask> up, low;
  std::vector<std::uint64_t> shadow_bits;  // per up vertex, over low ranks
  std::vector<std::uint64_t> j_bits;       // per up vertex, over up ranks

  explicit SmallLayer(int k_) : k(k_) {
    MiddleGraph mg(k);
    int n = mg.ground();
    up = mg.upper().masks();
    low = mg.lower().masks();
    if (up.size() > 64)
      throw ConfigError("closed 2-linked enumeration needs |L_k| <= 64 (k <= 4)");
    shadow_bits.assign(up.size(), 0);
    for (std::size_t i = 0; i < up.size(); ++i) {
      for (Mask s : shadow_of(up[i], n, ShadowDir::Lower).masks()) {
        std::size_t r = std::size_t(
            std::lower_bound(low.begin(), low.end(), s) - low.begin());
        shadow_bits[i] |= std::uint64_t(1) << r;
      }
    }
    j_bits.assign(up.size(), 0);
    for (std::size_t i = 0; i < up.size(); ++i)
      for (std::size_t j = 0; j < up.size(); ++j)
        if (i != j && (shadow_bits[i] & shadow_bits[j]))
          j_bits[i] |= std::uint64_t(1) << j;
  }

  std::uint64_t shadow_of_set(std::uint64_t s) const {
    std::uint64_t sh = 0;
    for (std::uint64_t rest = s; rest;) {
      std::uint64_t bit = rest & (~rest + 1);
      sh |= shadow_bits[std::size_t(std::countr_zero(bit))];
      rest ^= bit;
    }
    return sh;
  }

  std::uint64_t close_set(std::uint64_t s) const {
    std::uint64_t sh = shadow_of_set(s);
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < up.size(); ++i)
      if ((shadow_bits[i] & ~sh) == 0) out |= std::uint64_t(1) << i;
    return out;
  }

  bool two_linked(std::uint64_t s) const {
    if (s == 0) return false;
    std::uint64_t reach = s & (~s + 1);
    for (;;) {
      std::uint64_t grown = reach;
      for (std::uint64_t rest = reach; rest;) {
        std::uint64_t bit = rest & (~rest + 1);
        grown |= j_bits[std::size_t(std::countr_zero(bit))] & s;
        rest ^= bit;
      }
      if (grown == reach) break;
      reach = grown;
    }
    return reach == s;
  }

  std::uint64_t j_hull(std::uint64_t s) const {
    std::uint64_t out = 0;
    for (std::uint64_t rest = s; rest;) {
      std::uint64_t bit = rest & (~rest + 1);
      out |= j_bits[std::size_t(std::countr_zero(bit))];
      rest ^= bit;
    }
    return out & ~s;
  }
};

// Every closed 2-linked set is reachable from singleton closures by
// "add one adjacent vertex, close" (closure is monotone and preserves
// 2-linkedness), so DFS over that move enumerates them all.
std::vector<std::uint64_t> enumerate_closed_masks(const SmallLayer& ctx,
                                                  std::uint64_t cap) {
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::uint64_t> stack, out;
  for (std::size_t i = 0; i < ctx.up.size(); ++i) {
    std::uint64_t c = ctx.close_set(std::uint64_t(1) << i);
    if (seen.insert(c).second) stack.push_back(c);
  }
  while (!stack.empty()) {
    std::uint64_t s = stack.back();
    stack.pop_back();
    out.push_back(s);
    for (std::uint64_t rest = ctx.j_hull(s); rest;) {
      std::uint64_t bit = rest & (~rest + 1);
      rest ^= bit;
      std::uint64_t c = ctx.close_set(s | bit);
      if (seen.insert(c).second) {
        if (seen.size() > cap)
          throw GuardError("closed 2-linked enumeration exceeded cap " +
                           std::to_string(cap));
        stack.push_back(c);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<Family> enumerate_closed_two_linked(int k, std::uint64_t cap) {
  if (k > 4) throw ConfigError("enumeration mode supports k <= 4 only");
  SmallLayer ctx(k);
  std::vector<Family> out;
  for (std::uint64_t s : enumerate_closed_masks(ctx, cap)) {
    std::vector<Mask> masks;
    for (std::uint64_t rest = s; rest;) {
      std::uint64_t bit = rest & (~rest + 1);
      masks.push_back(ctx.up[std::size_t(std::countr_zero(bit))]);
      rest ^= bit;
    }
    out.emplace_back(2 * k - 1, std::move(masks));
  }
  return out;
}

// ---- theorem-4 scan ---------------------------------------------------------------

nlohmann::json ScanReport::to_json() const {
  return {{"k", k},
          {"p", p},
          {"c", c},
          {"trials", trials},
          {"mode", mode == ScanMode::Enumeration ? "enum" : "random"},
          {"theorem_regime", theorem_regime},
          {"families", families},
          {"evaluations", evaluations},
          {"violations", violations},
          {"violation_rate", violation_rate},
          {"worst_margin", worst_margin},
          {"master_seed", master_seed}};
}

ScanReport theorem4_scan(int k, double p, double c, int trials, ScanMode mode,
                         std::uint64_t master_seed, std::uint64_t enum_cap) {
  if (trials < 1) throw ConfigError("theorem4_scan needs trials >= 1");
  if (p < 0 || p > 1) throw ConfigError("theorem4_scan: p outside [0,1]");
  MiddleGraph mg(k);
  int n = mg.ground();

  ScanReport report;
  report.k = k;
  report.p = p;
  report.c = c;
  report.trials = trials;
  report.mode = mode;
  report.theorem_regime = p > 0.5;
  report.master_seed = master_seed;
  report.worst_margin = std::numeric_limits<double>::infinity();

  auto evaluate = [&](std::int64_t in_g, std::int64_t in_a, std::int64_t t) {
    double margin = double(in_g - in_a) - c * double(t);
    ++report.evaluations;
    if (margin < 0) ++report.violations;
    report.worst_margin = std::min(report.worst_margin, margin);
  };

  if (mode == ScanMode::Enumeration) {
    if (k > 4) throw ConfigError("enumeration mode supports k <= 4 only");
    SmallLayer ctx(k);
    struct Entry {
      std::uint64_t members, shadow;
      std::int64_t t;
    };
    std::vector<Entry> entries;
    for (std::uint64_t s : enumerate_closed_masks(ctx, enum_cap)) {
      int a = std::popcount(s);
      if (a <= 1) continue;
      std::uint64_t sh = ctx.shadow_of_set(s);
      std::int64_t t = std::popcount(sh) - a;
      if (2 * std::int64_t(k) * t < std::int64_t(a)) continue;  // |N(A)| >= (1+1/2k)|A|
      entries.push_back({s, sh, t});
    }
    report.families = entries.size();

    for (int trial = 0; trial < trials; ++trial) {
      RngStream stream = derive_stream(master_seed, std::uint64_t(trial));
      // sample both sides in global mask order (lower layer masks interleave
      // with upper ones; order only matters for reproducibility)
      Family x = sample_family(mg.vertices(), p, stream);
      std::uint64_t x_up = 0, x_low = 0;
      for (Mask m : x.masks()) {
        if (layer_of(m) == k)
          x_up |= std::uint64_t(1)
                  << (std::lower_bound(ctx.up.begin(), ctx.up.end(), m) -
                      ctx.up.begin());
        else
          x_low |= std::uint64_t(1)
                   << (std::lower_bound(ctx.low.begin(), ctx.low.end(), m) -
                       ctx.low.begin());
      }
      for (const auto& e : entries)
        evaluate(std::popcount(e.shadow & x_low), std::popcount(e.members & x_up),
                 e.t);
    }
  } else {
    Family vertices = mg.vertices();
    for (int trial = 0; trial < trials; ++trial) {
      RngStream x_stream = derive_stream(master_seed, 2 * std::uint64_t(trial));
      RngStream a_stream =
          derive_stream(master_seed, 2 * std::uint64_t(trial) + 1);
      Family x = sample_family(vertices, p, x_stream);

      Family a(n);
      std::int64_t t = 0;
      bool found = false;
      for (int attempt = 0; attempt < 100 && !found; ++attempt) {
        std::size_t target = 2 + a_stream.next_below(std::uint64_t(4 * k) - 1);
        a = grow_closed_two_linked(k, target, a_stream);
        std::int64_t g = std::int64_t(shadow(a, ShadowDir::Lower).size());
        t = g - std::int64_t(a.size());
        found = a.size() > 1 && 2 * std::int64_t(k) * t >= std::int64_t(a.size());
      }
      if (!found) continue;  // no usable family drawn; skip the trial
      ++report.families;

      std::int64_t in_a = 0, in_g = 0;
      for (Mask m : a.masks()) in_a += x.contains(m) ? 1 : 0;
      for (Mask m : shadow(a, ShadowDir::Lower).masks())
        in_g += x.contains(m) ? 1 : 0;
      evaluate(in_g, in_a, t);
    }
  }

  report.violation_rate =
      report.evaluations ? double(report.violations) / double(report.evaluations)
                         : 0.0;
  if (!std::isfinite(report.worst_margin)) report.worst_margin = 0.0;
  return report;
}

// ---- container batches ---------------------------------------------------------

nlohmann::json ContainerBatch::to_json() const {
  nlohmann::json runs_json = nlohmann::json::array();
  for (const auto& s : summaries) {
    runs_json.push_back({{"run", s.run},
                         {"exhausted", s.exhausted},
                         {"failed_condition", s.failed_condition},
                         {"a", s.a},
                         {"g", s.g},
                         {"t", s.t},
                         {"s_excess", s.s_excess},
                         {"f_deficit", s.f_deficit},
                         {"measured_k", s.measured_k},
                         {"strong_gap", s.strong_gap},
                         {"strong_bound", s.strong_bound},
                         {"retries_r", s.retries_r},
                         {"retries_r_prime", s.retries_r_prime},
                         {"ledger_bits", s.ledger_bits}});
  }
  return {{"k", k},
          {"runs", runs},
          {"exhausted", exhausted},
          {"master_seed", master_seed},
          {"params", params.to_json()},
          {"summaries", runs_json}};
}

ContainerBatch container_batch(int k, int runs, const PipelineParams& params,
                               std::uint64_t master_seed, int threads) {
  params.validate();
  if (runs < 1) throw ConfigError("container_batch needs runs >= 1");

  ContainerBatch batch;
  batch.k = k;
  batch.runs = runs;
  batch.master_seed = master_seed;
  batch.params = params;
  batch.summaries.resize(std::size_t(runs));

  int a_min = std::max(2, int(std::ceil(std::log2(double(k)))));
  parallel_for(std::size_t(runs), threads, [&](std::size_t i) {
    ContainerRunSummary& s = batch.summaries[i];
    s.run = int(i);
    RngStream grow_stream = derive_stream(master_seed, 2 * i);
    RngStream pipe_stream = derive_stream(master_seed, 2 * i + 1);

    Family a(2 * k - 1);
    bool found = false;
    for (int attempt = 0; attempt < 100 && !found; ++attempt) {
      std::size_t span = std::size_t(std::max(1, 4 * k - a_min + 1));
      std::size_t target = std::size_t(a_min) + grow_stream.next_below(span);
      a = grow_closed_two_linked(k, target, grow_stream);
      std::int64_t t =
          std::int64_t(shadow(a, ShadowDir::Lower).size()) - std::int64_t(a.size());
      found = double(a.size()) + 1e-9 >= std::log2(double(k)) &&
              2 * std::int64_t(k) * t >= std::int64_t(a.size());
    }
    if (!found) {
      s.exhausted = true;
      s.failed_condition = "growth: weak hypotheses unreachable";
      return;
    }

    try {
      ContainerTrace trace = run_container_pipeline(a, params, pipe_stream);
      s.a = trace.a;
      s.g = trace.g;
      s.t = trace.t;
      s.s_excess = trace.s_weak.size() - trace.a;
      s.f_deficit = trace.g - trace.f_weak.size();
      s.measured_k =
          trace.t > 0
              ? double(std::max(s.s_excess, s.f_deficit)) / double(trace.t)
              : 0.0;
      s.strong_gap = std::int64_t(trace.s_strong.size()) -
                     std::int64_t(trace.f_strong.size());
      s.strong_bound = 2.0 * double(trace.t) * params.psi / (k - params.psi);
      s.retries_r = trace.retries_r;
      s.retries_r_prime = trace.retries_r_prime;
      s.ledger_bits = trace.ledger.total_bits();
    } catch (const RetryError& e) {
      s.exhausted = true;
      s.failed_condition = e.failed_condition;
    }
  });

  for (const auto& s : batch.summaries)
    if (s.exhausted) ++batch.exhausted;
  return batch;
}

}  // namespace sperner
