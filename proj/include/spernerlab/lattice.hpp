#pragma once

#include <vector>

#include "spernerlab/family.hpp"

namespace sperner {

// Directional shadow on a single layer of P(n).  Auto resolves toward the
// middle: lower when layer >= ceil(n/2), upper when layer <= floor(n/2); for
// even n at the exact middle (both conditions hold) Auto means lower.
enum class ShadowDir { Lower, Upper, Auto };

ShadowDir resolve_dir(int layer, int n, ShadowDir dir);

// Shadow of a single subset, as a family.
Family shadow_of(Mask v, int n, ShadowDir dir);

// Exact shadow of a single-layer family.  Throws ConfigError on mixed-layer
// input ("non-uniform family").  The empty family maps to the empty family.
Family shadow(const Family& a, ShadowDir dir = ShadowDir::Auto);

// Closure [A]: the largest A' in the same layer with shadow(A') == shadow(A).
// Membership test: v in [A]  <=>  shadow({v}) subseteq shadow(A).
Family closure(const Family& a, ShadowDir dir = ShadowDir::Auto);
bool is_closed(const Family& a, ShadowDir dir = ShadowDir::Auto);

// Partition of a single-layer family into maximal 2-linked pieces (members
// are joined when their shadows intersect).  Components are returned sorted
// by their smallest mask.
std::vector<Family> two_linked_components(const Family& a,
                                          ShadowDir dir = ShadowDir::Auto);

// d(v, Y) = |N(v) /\ Y| between adjacent layers; Y must live one layer above
// or below v (empty Y gives 0).  Same-layer input is an error.
int degree(const Subset& v, const Family& y);
int degree(Mask v, int n, const Family& y);

// Number of containment edges between two families in adjacent layers.
std::uint64_t edges_between(const Family& upper, const Family& lower);

// The "middle two layers" graph on universe [2k-1]: parts C([2k-1],k) and
// C([2k-1],k-1), edges by containment, k-regular on both sides.
struct MiddleGraph {
  explicit MiddleGraph(int k);
  int k;
  int ground() const noexcept { return 2 * k - 1; }
  std::uint64_t side_size() const;  // binom(2k-1, k)
  Family upper() const;             // C([2k-1], k)
  Family lower() const;             // C([2k-1], k-1)
  Family vertices() const;          // both layers
};

}  // namespace sperner
