#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "spernerlab/lattice.hpp"

namespace sperner {

struct SolverStats {
  std::size_t matching_size = 0;
  int phases = 0;  // Hopcroft-Karp augmentation phases
  double elapsed_seconds = 0;
};

struct AntichainResult {
  std::size_t width = 0;
  Family witness{1};  // one maximum antichain, pairwise incomparable
  SolverStats stats;
  nlohmann::json to_json() const;
};

struct SolverGuards {
  std::size_t max_elements = 50000;
  std::uint64_t max_pairs = 100000000;  // candidate comparability pairs
};

// Exact maximum antichain of any X in P(n) via Dilworth: width = |X| minus a
// maximum matching on the strict-containment bipartite split, witness
// extracted from a Koenig minimum vertex cover.  Deterministic: vertex order
// is mask order.
AntichainResult max_antichain(const Family& x, const SolverGuards& guards = {});

// Restricted solver for X within two adjacent layers (maximum independent
// set in the induced containment graph).  The witness always decomposes as
// A u ((X /\ lower) \ N(A)) with A the upper part of the witness; when X is
// the full vertex set of a middle-two-layers graph, A is additionally closed.
AntichainResult max_antichain_bipartite(const Family& x,
                                        const SolverGuards& guards = {});

// Width of the subfamily of x incomparable to every mask in `forced`, plus
// |forced|.  Used to certify statements about every maximum antichain.
std::size_t width_with_forced(const Family& x, const std::vector<Mask>& forced,
                              const SolverGuards& guards = {});

// Sets of layer k that appear in X with zero (isolated) or at most one
// (nearly isolated) of their shadow-direction neighbors in X.  The layer must
// be directional: even n with k = n/2 is an error.
struct SpecialSets {
  Family layer_members;    // X restricted to layer k, sorted
  std::vector<int> shadow_counts;  // aligned with layer_members
  Family isolated;
  Family nearly_isolated;  // superset of isolated
};
SpecialSets find_special(const Family& x, int k);

enum class Verdict { Holds, Fails, HoldsUniquely };
std::string to_string(Verdict v);

struct ConclusionReport {
  Verdict verdict = Verdict::Fails;
  std::size_t width = 0;        // w(X)
  std::size_t target_width = 0; // best middle-layer (or restricted-set) width
  int best_k = -1;              // layer achieving it
  // data only: the witness found lay within three consecutive layers
  bool witness_in_three_layers = true;
  nlohmann::json to_json() const;
};

// Does the width of X equal the best middle-layer intersection?  In
// exhaustive mode (n <= 8 only) additionally certify that every maximum
// antichain IS such an intersection, upgrading the verdict to HoldsUniquely.
ConclusionReport check_main_conclusion(const Family& x, bool exhaustive = false,
                                       const SolverGuards& guards = {});

// Is there a middle k with w(X) attained inside X/\C([n],k) together with the
// nearly isolated sets of layers k-1 and k+1?  Exhaustive mode (n <= 8)
// certifies every maximum antichain lies in that restricted ground set.
ConclusionReport check_hit_conclusion(const Family& x, bool exhaustive = false,
                                      const SolverGuards& guards = {});

// Pairs u,v in X /\ C([n],k+1) that share a present k-subset and have at most
// one other present k-subset between them; the defect structure expected
// below p = 1/2.  Counted as data, no pass/fail semantics.  Layer k+1 must be
// lower-directional (2(k+1) > n).
std::uint64_t defect_pair_count(const Family& x, int k);

}  // namespace sperner
