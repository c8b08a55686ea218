#include <doctest.h>

#include "oracles.hpp"
#include "spernerlab/lattice.hpp"
#include "spernerlab/rng.hpp"

using namespace sperner;

namespace {
Family fam(int n, std::initializer_list<const char*> sets) {
  std::vector<Mask> masks;
  for (const char* s : sets) masks.push_back(parse_mask(s, n));
  return Family(n, std::move(masks));
}
}  // namespace

TEST_CASE("auto direction resolves toward the middle") {
  CHECK(resolve_dir(3, 5, ShadowDir::Auto) == ShadowDir::Lower);
  CHECK(resolve_dir(2, 5, ShadowDir::Auto) == ShadowDir::Upper);
  CHECK(resolve_dir(5, 5, ShadowDir::Auto) == ShadowDir::Lower);
  CHECK(resolve_dir(0, 5, ShadowDir::Auto) == ShadowDir::Upper);
  // even-n middle: documented as lower
  CHECK(resolve_dir(3, 6, ShadowDir::Auto) == ShadowDir::Lower);
  CHECK(resolve_dir(2, 4, ShadowDir::Auto) == ShadowDir::Lower);
}

TEST_CASE("shadow basics") {
  Family a = fam(5, {"{1,2,3}"});
  CHECK(shadow(a, ShadowDir::Lower) == fam(5, {"{1,2}", "{1,3}", "{2,3}"}));
  CHECK(shadow(a, ShadowDir::Upper) == fam(5, {"{1,2,3,4}", "{1,2,3,5}"}));
  CHECK(shadow(a, ShadowDir::Auto) == shadow(a, ShadowDir::Lower));

  // full layer maps onto full layer
  CHECK(shadow(full_layer(5, 3), ShadowDir::Lower) == full_layer(5, 2));

  CHECK(shadow(Family(5), ShadowDir::Auto).empty());
  CHECK_THROWS_WITH_AS(shadow(fam(5, {"{1}", "{1,2}"})),
                       doctest::Contains("non-uniform"), ConfigError);
}

TEST_CASE("shadow is monotone") {
  RngStream rng(11, 0);
  Family layer = full_layer(9, 5);
  for (int i = 0; i < 30; ++i) {
    Family b = sample_family(layer, 0.3, rng);
    if (b.empty()) continue;
    Family a = sample_family(b, 0.5, rng);
    if (a.empty()) continue;
    CHECK(shadow(a).is_subset_of(shadow(b)));
  }
}

TEST_CASE("closure of a singleton is itself") {
  Family a = fam(5, {"{1,3,5}"});
  CHECK(closure(a) == a);
  CHECK(is_closed(a));
}

TEST_CASE("closure of a sub-simplex is closed") {
  // all 3-subsets of {1,2,3,4} inside C([5],3); brute-forced over the layer
  Family a = fam(5, {"{1,2,3}", "{1,2,4}", "{1,3,4}", "{2,3,4}"});
  Family cl = closure(a);
  CHECK(cl == a);
  auto brute = oracle::closure_masks(a.masks(), 5, 3, true);
  CHECK(cl.masks() == brute);
}

TEST_CASE("closure of one-deleted layers against brute force") {
  Family layer = full_layer(5, 3);
  for (Mask removed : layer.masks()) {
    std::vector<Mask> rest;
    for (Mask m : layer.masks())
      if (m != removed) rest.push_back(m);
    Family a(5, rest);
    Family cl = closure(a);
    CHECK(cl.masks() == oracle::closure_masks(a.masks(), 5, 3, true));
    // removing one set from a full layer never changes the shadow, so the
    // closure snaps back to the whole layer
    CHECK(cl == layer);
  }
}

TEST_CASE("closure is extensive and idempotent, preserves the shadow") {
  RngStream rng(13, 1);
  Family layer = full_layer(11, 6);
  for (int i = 0; i < 20; ++i) {
    Family a = sample_family(layer, 0.02 + 0.03 * (i % 5), rng);
    if (a.empty()) continue;
    Family cl = closure(a);
    CHECK(a.is_subset_of(cl));
    CHECK(closure(cl) == cl);
    CHECK(shadow(cl) == shadow(a));
    // [A] is inside the up-shadow of the down-shadow
    CHECK(cl.is_subset_of(shadow(shadow(a, ShadowDir::Lower), ShadowDir::Upper)));
  }
}

TEST_CASE("two-linked components: shared and disjoint shadows") {
  auto one = two_linked_components(fam(5, {"{1,2,3}", "{1,2,4}"}));
  CHECK(one.size() == 1);

  auto two = two_linked_components(fam(5, {"{1,2,3}", "{1,4,5}"}));
  CHECK(two.size() == 2);
  CHECK(two[0] == fam(5, {"{1,2,3}"}));
  CHECK(two[1] == fam(5, {"{1,4,5}"}));
}

TEST_CASE("two-linked components partition against a pairwise oracle") {
  RngStream rng(17, 2);
  Family layer = full_layer(15, 8);
  Family a = sample_family(layer, 50.0 / double(layer.size()), rng);
  REQUIRE(a.size() > 10);

  auto components = two_linked_components(a);
  auto expected = oracle::two_linked_partition(a.masks(), 15, true);
  REQUIRE(components.size() == expected.size());

  // same partition (both sides sorted by smallest member)
  std::sort(expected.begin(), expected.end());
  std::vector<std::vector<Mask>> got;
  for (const auto& c : components) got.push_back(c.masks());
  std::sort(got.begin(), got.end());
  CHECK(got == expected);

  // components' shadows are pairwise disjoint and union to shadow(A)
  Family shadow_union(15);
  std::size_t member_total = 0;
  for (const auto& c : components) {
    Family sh = shadow(c);
    CHECK(shadow_union.intersect(sh).empty());
    shadow_union = shadow_union.unite(sh);
    member_total += c.size();
  }
  CHECK(member_total == a.size());
  CHECK(shadow_union == shadow(a));
}

TEST_CASE("degree between adjacent layers") {
  MiddleGraph m3(3);
  Family lower = m3.lower();
  CHECK(degree(Subset(parse_mask("{1,2,3}", 5), 5), lower) == 3);  // k-regular
  CHECK(degree(Subset(parse_mask("{1,2,3}", 5), 5), Family(5)) == 0);
  CHECK(degree(Subset(parse_mask("{1,2,3}", 5), 5),
               fam(5, {"{1,2}", "{4,5}"})) == 1);
  CHECK_THROWS_AS(degree(Subset(parse_mask("{1,2,3}", 5), 5), m3.upper()),
                  ConfigError);
}

TEST_CASE("middle graph is k-regular with the edge-count identity") {
  MiddleGraph mg(4);
  CHECK(mg.side_size() == 35);
  CHECK(mg.upper().size() == 35);
  CHECK(mg.lower().size() == 35);
  for (Mask v : mg.upper().masks())
    CHECK(degree(Subset(v, mg.ground()), mg.lower()) == 4);
  for (Mask v : mg.lower().masks())
    CHECK(degree(Subset(v, mg.ground()), mg.upper()) == 4);

  // |E(N(A), complement of A)| = k * (|N(A)| - |A|) exactly, on random A
  RngStream rng(23, 3);
  for (int i = 0; i < 25; ++i) {
    Family a = sample_family(mg.upper(), 0.05 + 0.12 * (i % 6), rng);
    if (a.empty()) continue;
    Family g = shadow(a, ShadowDir::Lower);
    Family complement = a.complement_within(mg.upper());
    std::uint64_t crossing = 0;
    for (Mask v : g.masks())
      crossing += std::uint64_t(degree(Subset(v, mg.ground()), complement));
    CHECK(crossing == std::uint64_t(mg.k) * (g.size() - a.size()));
  }
}
