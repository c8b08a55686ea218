#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "spernerlab/antichain.hpp"
#include "spernerlab/containers.hpp"

namespace sperner {

// ---- Monte Carlo threshold sweeps ----------------------------------------

// One (n, p, trial-batch) cell.  Sums are kept as integers so aggregation is
// order-independent and the emitted CSV/JSON is byte-identical for any
// thread count.  Wall time is informational only and never serialized.
struct SweepRow {
  std::string kind;  // "main" or "hit"
  int n = 0;
  double p = 0;
  int trials = 0;
  int holds = 0;
  int fails = 0;
  int errors = 0;
  std::int64_t width_sum = 0;
  std::int64_t isolated_sum = 0;
  std::int64_t nearly_sum = 0;
  // data-only counters (stdout summaries; never serialized, schema is pinned):
  // trials whose found witness spans <= 3 consecutive layers, and the
  // below-1/2 defect-pair occurrences at layer ceil(n/2)+1
  std::int64_t three_layer_sum = 0;
  std::int64_t defect_pair_sum = 0;
  std::uint64_t master_seed = 0;
  double wall_seconds = 0;

  double mean_width() const;
  double mean_isolated() const;
  double mean_nearly_isolated() const;
};

// Per (n,p) cell, the fraction of trials where the named conclusion check
// holds on X = P(n)_p.  Solver-guard errors are counted per row, never
// aborting the sweep.  Trial streams are derived from (master_seed, cell
// index, trial index), so rows are reproducible at any thread count.
std::vector<SweepRow> sweep(const std::string& kind,
                            const std::vector<int>& n_values,
                            const std::vector<double>& p_grid, int trials,
                            std::uint64_t master_seed, int threads = 1,
                            const SolverGuards& guards = {});

// Fixed CSV schema:
// kind,n_or_k,p,trials,holds,fails,errors,mean_width,mean_isolated,mean_nearly_isolated,master_seed
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);
std::string sweep_csv(const std::vector<SweepRow>& rows);
nlohmann::json sweep_json(const std::vector<SweepRow>& rows);

// ---- numeric audits -------------------------------------------------------

struct AuditRow {
  std::string id;     // inequality id
  std::string point;  // parameter point, e.g. "k=5,y=1.25"
  double lhs = 0;
  double rhs = 0;
  double margin = 0;  // rhs - lhs for "lhs <= rhs" assertions
  bool pass = false;  // margin >= -tolerance
};

void write_audit_csv(const std::vector<AuditRow>& rows, std::ostream& out);
std::string audit_csv(const std::vector<AuditRow>& rows);
nlohmann::json audit_json(const std::vector<AuditRow>& rows);

enum class SpecialKind { Isolated, NearlyIsolated };

// Compare the Monte Carlo mean count of special sets in one layer against
// the closed form binom(n,k) * p * ((1-p)^m + [nearly] m p (1-p)^(m-1)),
// m = |shadow({v})|.  Pass when |mean - exact| <= 4 standard errors.
// Only the two relevant layers are sampled.
struct ExpectationAudit {
  AuditRow row;
  double exact = 0;
  double mc_mean = 0;
  double mc_stderr = 0;
  int trials = 0;
  std::uint64_t master_seed = 0;
  nlohmann::json to_json() const;
  std::string csv() const;  // one-row CSV with header
};
ExpectationAudit expectation_audit(int n, double p, int layer,
                                   SpecialKind kind, int trials,
                                   std::uint64_t master_seed, int threads = 1);

// Grid audit of the inequality chains used by the bounds:
//   iso_f_nonneg    f(y) >= 0 for y in [0,k-1] (f(0) = 0 exactly)
//   delta_chain_*   the two display steps behind the small-family union bound
//   small_a_beats   smallest a >= 2 with (1+eps/4)ka > 2k + 3a log2 k
//   kk_expansion    kk_shadow_bound >= (1+1/k)a above the middle layer
struct InequalityAuditConfig {
  std::vector<int> f_k_values{5, 10, 50, 1000};
  int f_grid_points = 1000;
  std::vector<double> eps_values{0.01, 0.1, 0.5};
  std::vector<int> cost_k_values{100, 1000, 10000};
  std::vector<int> expansion_n_values{5, 7, 9, 11, 13};
  double tolerance = 1e-9;
};
std::vector<AuditRow> inequality_audit(const InequalityAuditConfig& cfg = {});

double small_a_delta(double eps);  // min{(eps/2)/(1+eps), (eps/12)^2}

// ---- 2-linked generation and the two-layer scan ---------------------------

// A random closed 2-linked family in L_k: grow a connected set in the
// auxiliary shared-shadow graph by uniform frontier expansion to
// `target` vertices, then close it.
Family grow_closed_two_linked(int k, std::size_t target, RngStream& rng);

// Every closed 2-linked subset of L_k, found by closure-DFS: the closure of
// a singleton is closed and 2-linked, and adding one adjacent vertex and
// re-closing reaches every closed 2-linked set.  Feasible for k <= 4 (layer
// fits in a 64-bit set mask).
std::vector<Family> enumerate_closed_two_linked(int k,
                                                std::uint64_t cap = 10000000);

enum class ScanMode { Enumeration, RandomGrowth };

// For sampled X = V(M)_p and closed 2-linked A with |A| > 1 and
// |N(A)| >= (1+1/2k)|A|, evaluate |N(A)/\X| - |A/\X| >= c(|N(A)|-|A|) and
// report the violation rate and worst margin.  No zero-violation assertion:
// the inequality is only claimed asymptotically, and only for p > 1/2
// (scans at smaller p are flagged, not refused).
struct ScanReport {
  int k = 0;
  double p = 0;
  double c = 0;
  int trials = 0;
  ScanMode mode = ScanMode::RandomGrowth;
  bool theorem_regime = false;  // p > 1/2
  std::uint64_t families = 0;
  std::uint64_t evaluations = 0;
  std::uint64_t violations = 0;
  double violation_rate = 0;
  double worst_margin = 0;  // min over evaluations of lhs - c*t
  std::uint64_t master_seed = 0;
  nlohmann::json to_json() const;
};
ScanReport theorem4_scan(int k, double p, double c, int trials, ScanMode mode,
                         std::uint64_t master_seed,
                         std::uint64_t enum_cap = 10000000);

// ---- container batches -----------------------------------------------------

struct ContainerRunSummary {
  int run = 0;
  bool exhausted = false;        // retry cap hit
  std::string failed_condition;  // when exhausted
  std::uint64_t a = 0, g = 0;
  std::int64_t t = 0;
  std::uint64_t s_excess = 0;   // |S' \ A|
  std::uint64_t f_deficit = 0;  // |N(A) \ F'|
  double measured_k = 0;
  std::int64_t strong_gap = 0;  // |S| - |F|
  double strong_bound = 0;      // 2 t psi / (k - psi)
  int retries_r = 0;
  int retries_r_prime = 0;
  double ledger_bits = 0;
};

struct ContainerBatch {
  int k = 0;
  int runs = 0;
  int exhausted = 0;
  std::uint64_t master_seed = 0;
  PipelineParams params;
  std::vector<ContainerRunSummary> summaries;
  nlohmann::json to_json() const;
};

// `runs` independent pipeline executions on freshly grown random 2-linked
// families satisfying the weak hypotheses; per-run streams are derived from
// the master seed, so results are identical at any thread count.
ContainerBatch container_batch(int k, int runs, const PipelineParams& params,
                               std::uint64_t master_seed, int threads = 1);

// ---- shared helpers --------------------------------------------------------

// Runs fn(i) for i in [0, count) on `threads` workers.  fn must only touch
// slot i of preallocated output storage.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn);

std::string format_double(double v);  // stable "%.10g" formatting for CSV

}  // namespace sperner
