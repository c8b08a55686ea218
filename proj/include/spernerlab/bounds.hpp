#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spernerlab/errors.hpp"

namespace sperner {

// Generalized binomial coefficient z(z-1)...(z-k+1)/k! for real z.
// Strictly increasing in z on z >= k-1.
double gen_binomial(double z, int k);

// Natural log of the above, computed via lgamma; requires z > k-1 so all
// factors are positive.
double log_gen_binomial(double z, int k);

// log2 and natural-log binomials for (possibly huge) integer arguments.
double log2_binomial(std::uint64_t n, std::uint64_t m);
double log_binomial(std::uint64_t n, std::uint64_t m);

enum class BoundKind {
  KkExactInversion,   // shadow bound from inverting the generalized binomial
  IsoLog,             // t >= (a/k) log(binom(2k-1,k)/a)
  IsoSmallA,          // |N(A)| >= ka - binom(a,2), for a <= k
  ExpansionOneOverK,  // |shadow(A)| >= (1+1/k)|A| above the middle layer
};

std::string to_string(BoundKind kind);

struct BoundReport {
  std::uint64_t a = 0;  // family size
  int k = 0;            // layer (or half-size parameter)
  int n = 0;            // universe size
  BoundKind kind = BoundKind::KkExactInversion;
  double value = 0;                  // the lower bound
  std::optional<double> z;           // inversion point (kk kind only)
  std::optional<double> expansion;   // (1+1/k)*a when k > ceil(n/2)
  std::optional<double> slack;       // actual - value when an actual is given
  nlohmann::json to_json() const;
};

// Lower bound on |lower_shadow(A)| for any A of size a in C([n],k): solve
// gen_binomial(z,k) = a for z in [k,n] by bisection, return gen_binomial(z,k-1).
// Bisection: absolute tolerance 1e-12 on z, 200 iteration cap.
BoundReport kk_shadow_bound(std::uint64_t a, int k, int n,
                            std::optional<double> actual = std::nullopt);

// Both expansion bounds for families in the upper part of the middle-two-
// layers graph: the log bound on t = |N(A)|-|A| (natural log), and for
// a <= k the bound |N(A)| >= ka - binom(a,2).
struct IsoBounds {
  BoundReport log_bound;                 // bounds t
  std::optional<BoundReport> small_a;    // bounds |N(A)|; absent when a > k
};
IsoBounds iso_bounds(std::uint64_t a, int k,
                     std::optional<double> actual_t = std::nullopt);

// ---- cost bookkeeping (bits = log2 of the number of choices) ----

struct CostEntry {
  std::string label;
  double bits = 0;
  bool approximate = false;  // set when the m*log2(eN/m) bound replaced a sum
};

class CostLedger {
 public:
  void add(std::string label, double bits, bool approximate = false);
  double total_bits() const noexcept { return total_; }
  const std::vector<CostEntry>& entries() const noexcept { return entries_; }
  // Serializes to [{"label": str, "bits": float}, ...] in insertion order.
  nlohmann::json to_json() const;
  static CostLedger from_json(const nlohmann::json& j);

 private:
  std::vector<CostEntry> entries_;
  double total_ = 0;
};

// log2 binom(N, m).
double cost_binomial_bits(std::uint64_t n, std::uint64_t m);

// log2 binom(N, <= m) = log2 sum_{i<=m} binom(N,i).  Exact summation (in log
// space) when N <= 10^4, otherwise the bound m*log2(eN/m), with the
// approximate flag set through the out-parameter.
double cost_binomial_at_most_bits(std::uint64_t n, std::uint64_t m,
                                  bool* approximate = nullptr);

// Rooted-tree count bound: log2((e*d)^(a-1)) for trees with a vertices in a
// graph of maximum degree d.
double cost_tree_bits(double max_degree, std::uint64_t a);

// Display bound 2k + 3a*log2(k) for the cost of a small 2-linked family:
// log2|L_k| + (a-1)log2(e k(k-1)) is at most this for k >= 3.
double small_family_cost_bits(int k, std::uint64_t a);
double small_family_cost_display(int k, std::uint64_t a);

}  // namespace sperner
