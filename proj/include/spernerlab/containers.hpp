#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spernerlab/bounds.hpp"
#include "spernerlab/lattice.hpp"
#include "spernerlab/rng.hpp"

namespace sperner {

// Knobs of the container pipelines on the middle-two-layers graph of
// parameter k.  Defaults follow the natural-log expressions q = 6 log^5(k)/k^3,
// q' = 5 log(k)/k (both clamped into (0,1]) and psi = ceil(log^2 k).
// The slack multiplier turns the existence-by-averaging steps into rejection
// sampling: a random stage is accepted when its measured sizes are within
// slack times their expectation bounds (slack 3 reproduces the constants
// 18, 18, 9 of the acceptance conditions).
struct PipelineParams {
  int k = 0;
  double q = 0;
  double q_prime = 0;
  int psi = 0;
  double slack = 3.0;
  int retry_cap = 1000;
  std::uint64_t layer_guard = 200000;  // max side size of the graph

  static PipelineParams defaults(int k);
  void validate() const;
  nlohmann::json to_json() const;
};

// Full record of one container-pipeline run.  Weak stages first; strong
// stages are appended by strong_container.  Family fields are named by role:
//   r_sample           R  : random subset of A seeding the pipeline
//   triple_hood        T  : N(N(N(R)))
//   leak_edges         L  : edges from N(R) into the complement of A
//   f_weak             F' : N(N(N(R)) /\ A)
//   g_heavy            G^h: vertices with many A-to-A three-step walks
//   q_high             Q  : vertices of L_k with d(v,T) >= k/2
//   e_exposed          E  : v in Q\A with d(v, T\G) >= k/4
//   r_prime_sample     R' : random subset of T\G
//   q_surviving        Q' : Q \ N(R')
//   s_weak             S' : Q' u A
//   h_patch            H  : greedy set making every v in A satisfy
//                           d(v, G\(F' u N(H))) <= psi
//   f_patched          F'': F' u N(H)
//   s_tight            S'': {v : d(v,F'') >= k - psi}
//   u_prune            U  : greedy set making every v outside G satisfy
//                           d(v, S'' \ N(U)) <= psi
//   s_strong           S  : S'' \ N(U)
//   f_strong           F  : F'' u {v : d(v,S) > psi}
struct ContainerTrace {
  int k = 0;
  std::uint64_t a = 0;  // |A|
  std::uint64_t g = 0;  // |N(A)|
  std::int64_t t = 0;   // g - a

  Family r_sample{1}, triple_hood{1}, f_weak{1}, g_heavy{1}, q_high{1},
      e_exposed{1}, r_prime_sample{1}, q_surviving{1}, s_weak{1};
  std::vector<std::pair<Mask, Mask>> leak_edges;
  int retries_r = 0;
  int retries_r_prime = 0;

  bool has_strong = false;
  Family h_patch{1}, f_patched{1}, s_tight{1}, u_prune{1}, s_strong{1},
      f_strong{1};

  bool from_pipeline = true;  // false for synthetic traces (trivial container)
  CostLedger ledger;

  nlohmann::json to_json() const;
  static ContainerTrace from_json(const nlohmann::json& j);
};

// Weak-container pipeline.  Preconditions (each failure names its
// hypothesis): A nonempty and 2-linked inside L_k, |A| >= log2(k), and
// t = |N(A)|-|A| >= |A|/2k.  Random stages are rejection-sampled; exhausting
// retry_cap raises RetryError carrying the failing condition.
// Unconditionally on success: A subseteq S' and F' subseteq N(A).
ContainerTrace weak_container(const Family& a, const PipelineParams& params,
                              RngStream& rng);

// Strong phase: deterministic greedy repair of a weak container.  Appends
// the strong stages to `trace` and asserts the structural invariants,
// including the exact inequality |S| <= |F| + 2*t*psi/(k-psi).
void strong_container(const Family& a, const Family& s_weak,
                      const Family& f_weak, const PipelineParams& params,
                      ContainerTrace& trace);

// weak + strong in one call.
ContainerTrace run_container_pipeline(const Family& a,
                                      const PipelineParams& params,
                                      RngStream& rng);

// The trivial strong container (S,F) = (A, N(A)) as a synthetic trace.
ContainerTrace trivial_container_trace(const Family& a,
                                       const PipelineParams& params);

enum class ContainerKind { Weak, Strong };

// Report-only validation of a container pair against A.
struct VerifyReport {
  ContainerKind kind = ContainerKind::Weak;
  bool a_contained = false;       // A subseteq S
  bool f_contained = false;       // F subseteq N(A)
  std::uint64_t s_excess = 0;     // |S \ A|
  std::uint64_t f_deficit = 0;    // |N(A) \ F|
  std::int64_t t = 0;
  double measured_k = 0;          // max(s_excess, f_deficit) / t
  double k_allowed = 0;
  bool weak_pass = false;         // containments and both excesses <= K*t
  bool strong_checked = false;
  bool strong_pass = false;       // |S| <= |F| + 2*t*psi/(k-psi)
  double strong_bound = 0;
  std::int64_t strong_gap = 0;    // |S| - |F|
  bool all_pass() const;
  nlohmann::json to_json() const;
};

VerifyReport verify_container(const Family& a, const Family& s,
                              const Family& f, ContainerKind kind, double K,
                              std::optional<int> psi = std::nullopt);

// Cost ledger of a completed (strong) trace: bits for the random stages plus
// the reconstruction bits |S\A| + |N(A)\F|; the total is reported next to t.
CostLedger container_cost_report(const ContainerTrace& trace);

}  // namespace sperner
