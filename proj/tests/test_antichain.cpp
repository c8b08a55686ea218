#include <doctest.h>

#include "oracles.hpp"
#include "spernerlab/antichain.hpp"
#include "spernerlab/rng.hpp"

using namespace sperner;

namespace {

bool pairwise_incomparable(const Family& f) {
  const auto& m = f.masks();
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j)
      if (oracle::comparable(m[i], m[j])) return false;
  return true;
}

// random subfamily of P(n) of a given size, without replacement
Family random_subfamily(int n, std::size_t size, RngStream& rng) {
  Family ground = full_powerset(n);
  std::vector<Mask> pool = ground.masks();
  std::vector<Mask> picked;
  for (std::size_t i = 0; i < size && !pool.empty(); ++i) {
    std::size_t idx = rng.next_below(pool.size());
    picked.push_back(pool[idx]);
    pool.erase(pool.begin() + std::ptrdiff_t(idx));
  }
  return Family(n, std::move(picked));
}

}  // namespace

TEST_CASE("width of P(3) is 3 with a middle-layer witness") {
  auto result = max_antichain(full_powerset(3));
  CHECK(result.width == 3);
  CHECK(result.witness.size() == 3);
  CHECK(pairwise_incomparable(result.witness));
  auto layer = result.witness.uniform_layer();
  REQUIRE(layer);
  CHECK((*layer == 1 || *layer == 2));
  CHECK(oracle::max_antichain_width(full_powerset(3)) == 3);
}

TEST_CASE("width of a chain is 1, of the empty family 0") {
  Family chain(3, {0b000, 0b001, 0b011});
  CHECK(max_antichain(chain).width == 1);
  CHECK(max_antichain(Family(3)).width == 0);
  CHECK(max_antichain(Family(3)).witness.empty());
}

TEST_CASE("solver equals brute force on random families") {
  RngStream rng(41, 0);
  for (int i = 0; i < 120; ++i) {
    int n = 2 + int(rng.next_below(5));  // n in [2,6]
    std::size_t size = rng.next_below(21);
    Family x = random_subfamily(n, size, rng);
    auto result = max_antichain(x);
    CHECK(result.width == oracle::max_antichain_width(x));
    CHECK(result.witness.size() == result.width);
    CHECK(pairwise_incomparable(result.witness));
    CHECK(result.witness.is_subset_of(x));
    // Dilworth consistency
    CHECK(result.width + result.stats.matching_size == x.size());
    // a middle-layer intersection is always an antichain
    std::size_t best_layer = 0;
    for (std::size_t c : x.layer_histogram()) best_layer = std::max(best_layer, c);
    CHECK(result.width >= best_layer);
  }
}

TEST_CASE("solver guards trip loudly") {
  SolverGuards tight;
  tight.max_elements = 4;
  CHECK_THROWS_AS(max_antichain(full_powerset(3), tight), GuardError);
  SolverGuards pairs;
  pairs.max_pairs = 2;
  CHECK_THROWS_AS(max_antichain(full_powerset(3), pairs), GuardError);
}

TEST_CASE("bipartite solver on the 6-cycle and single layers") {
  // k = 2: V(M) is a 6-cycle, brute force says width 3
  MiddleGraph mg(2);
  Family x = mg.vertices();
  auto result = max_antichain_bipartite(x);
  CHECK(result.width == 3);
  CHECK(result.width == oracle::max_antichain_width(x));

  Family one_layer = full_layer(7, 3);
  CHECK(max_antichain_bipartite(one_layer).width == one_layer.size());

  CHECK_THROWS_AS(max_antichain_bipartite(full_powerset(3)), ConfigError);
  Family gap(5, {0b00001, 0b00111});  // layers 1 and 3
  CHECK_THROWS_AS(max_antichain_bipartite(gap), ConfigError);
}

TEST_CASE("bipartite solver equals brute force on sparse random X in V(M4)") {
  MiddleGraph mg(4);
  Family vertices = mg.vertices();
  RngStream rng(43, 1);
  for (int i = 0; i < 20; ++i) {
    Family x = sample_family(vertices, 0.25, rng);
    if (x.size() > 26) continue;  // keep the oracle cheap
    auto result = max_antichain_bipartite(x);
    CHECK(result.width == oracle::max_antichain_width(x));
    CHECK(pairwise_incomparable(result.witness));
    // general solver agrees
    CHECK(max_antichain(x).width == result.width);
  }
}

TEST_CASE("find_special basics") {
  // full shadow layer present: nothing isolated or nearly isolated (k >= 2)
  Family x = full_layer(7, 3).unite(full_layer(7, 4));
  auto special = find_special(x, 4);
  CHECK(special.isolated.empty());
  CHECK(special.nearly_isolated.empty());

  // {1,2,3,4} with no 3-subsets present is isolated in layer 4
  Family lone(5, {parse_mask("{1,2,3,4}", 5)});
  auto iso = find_special(lone, 4);
  CHECK(iso.isolated == lone);
  CHECK(iso.nearly_isolated == lone);
  CHECK(iso.shadow_counts == std::vector<int>{0});

  // nearly isolated but not isolated: exactly one shadow element present
  Family nearly(5, {parse_mask("{1,2,3,4}", 5), parse_mask("{1,2,3}", 5)});
  auto ni = find_special(nearly, 4);
  CHECK(ni.isolated.empty());
  CHECK(ni.nearly_isolated.size() == 1);

  CHECK_THROWS_AS(find_special(Family(6), 3), ConfigError);  // even middle
}

TEST_CASE("isolated counts match the closed form on a small Monte Carlo") {
  // n = 11, layer 7, p = 3/4: expectation binom(11,7) * (3/4) * (1/4)^7
  const double exact = 990.0 / 65536.0;
  const int trials = 20000;
  Family ground = full_layer(11, 7).unite(full_layer(11, 6));
  std::int64_t total = 0;
  for (int t = 0; t < trials; ++t) {
    RngStream stream = derive_stream(2025, std::uint64_t(t));
    Family x = sample_family(ground, 0.75, stream);
    total += std::int64_t(find_special(x, 7).isolated.size());
  }
  double mean = double(total) / trials;
  CHECK(std::abs(mean - exact) < 0.01);  // ~16 sigma; smoke-level only
}

TEST_CASE("check_main: Sperner baseline and failures") {
  for (int n = 1; n <= 7; ++n) {
    auto report = check_main_conclusion(full_powerset(n));
    CHECK(report.verdict == Verdict::Holds);
    CHECK(report.width == binom_u64(n, n / 2));
  }

  // a single set outside the middle layers: width 1 > 0
  Family lone(5, {parse_mask("{1,2,3,4,5}", 5)});
  CHECK(check_main_conclusion(lone).verdict == Verdict::Fails);

  // empty X holds vacuously (0 = 0)
  CHECK(check_main_conclusion(Family(5)).verdict == Verdict::Holds);
}

TEST_CASE("check_main exhaustive certifies uniqueness") {
  // P(4): the only maximum antichain is the middle layer
  auto unique = check_main_conclusion(full_powerset(4), true);
  CHECK(unique.verdict == Verdict::HoldsUniquely);

  // P(2) = {0,{1},{2},{12}}: width 2 only by the middle layer
  CHECK(check_main_conclusion(full_powerset(2), true).verdict ==
        Verdict::HoldsUniquely);

  // two disjoint singleton chains: width 2 via {1} and {1,2} is impossible,
  // but {{1},{2}} and {{1},{2,3}}... build an X where a non-middle maximum
  // antichain exists: X = {{1},{2,3}} in P(3) has width 2, middle = {{1}}? no:
  // layers: {1}->1, {2,3}->2; middle layers of n=3 are 1 and 2, both counts 1.
  // So target = 1 but width = 2: fails.
  Family mixed(3, {parse_mask("{1}", 3), parse_mask("{2,3}", 3)});
  CHECK(check_main_conclusion(mixed, true).verdict == Verdict::Fails);

  // holds but not uniquely: X = middle layer of P(4) plus a disjoint-ish
  // chain element that can replace one middle set... use X = C([4],2) minus
  // {3,4} plus {1}: width still 5? Simpler documented case: X = {{1},{2}} in
  // P(2): width 2 = middle count 2? middle of n=2 is layer 1 = {{1},{2}};
  // unique. Use n=4 with X = C([4],2) u {{1,2,3}} where {1,2,3} covers three
  // middle sets; the middle intersection (6) stays the unique maximum.
  Family plus = full_layer(4, 2);
  plus.insert(parse_mask("{1,2,3}", 4));
  auto rep = check_main_conclusion(plus, true);
  CHECK(rep.verdict == Verdict::HoldsUniquely);

  CHECK_THROWS_AS(check_main_conclusion(full_powerset(9) /*n=9*/, true),
                  ConfigError);
}

TEST_CASE("check_main exhaustive flags non-unique maxima") {
  // X = one maximal chain 0 < {1} < {1,2} plus the set {3}: width 2 is
  // attained by {{1},{3}} and {{1,2},{3}} and the middle intersection
  // {{1},{3}} (layer 1 of n=3 has count 2).  The antichain {{1,2},{3}} is
  // maximum but is NOT a middle-layer intersection, so uniqueness fails.
  Family x(3, {0b000, 0b001, 0b011, 0b100});
  auto rep = check_main_conclusion(x, true);
  CHECK(rep.width == 2);
  CHECK(rep.verdict == Verdict::Holds);  // holds, but not uniquely
}

TEST_CASE("check_hit basics") {
  // no nearly isolated sets and middle-layer width: reduces to check_main
  Family x = full_powerset(5);
  CHECK(check_hit_conclusion(x).verdict == Verdict::Holds);

  // middle layer plus one isolated set above it
  Family middle = full_layer(5, 3);
  Mask v = parse_mask("{1,2,3,4}", 5);
  Family trimmed = middle.subtract(shadow(Family(5, {v}), ShadowDir::Lower));
  Family with_isolated = trimmed;
  with_isolated.insert(v);
  auto report = check_hit_conclusion(with_isolated);
  CHECK(report.verdict == Verdict::Holds);
  CHECK(report.width == trimmed.size() + 1);

  // the same X fails the main conclusion (width exceeds the middle count)
  CHECK(check_main_conclusion(with_isolated).verdict == Verdict::Fails);

  // exhaustive mode certifies containment
  CHECK(check_hit_conclusion(with_isolated, true).verdict ==
        Verdict::HoldsUniquely);
}

TEST_CASE("check_hit fails when the width needs non-special sets") {
  // X = {123,124,134,234,12,13} in P(4).  123 has two layer-2 subsets in X,
  // so it is not nearly isolated; the other 3-sets are.  The four 3-sets are
  // the unique maximum antichain (width 4), but the restricted ground set
  // {12,13} u NI = {12,13,124,134,234} only reaches width 3.
  Family x(4, {parse_mask("{1,2,3}", 4), parse_mask("{1,2,4}", 4),
               parse_mask("{1,3,4}", 4), parse_mask("{2,3,4}", 4),
               parse_mask("{1,2}", 4), parse_mask("{1,3}", 4)});
  auto rep = check_hit_conclusion(x);
  CHECK(rep.width == 4);
  CHECK(rep.width == oracle::max_antichain_width(x));
  CHECK(rep.target_width == 3);
  CHECK(rep.verdict == Verdict::Fails);
}

TEST_CASE("check_hit exhaustive detects the shared-subset defect") {
  // The below-1/2 defect: u = 1234 and v = 1235 share the present subset
  // 123, and 124 (a subset of u only) is the single other one present.  Then
  // {145,245,345,1234,1235} is a maximum antichain that uses u, yet u has
  // two present subsets and is not nearly isolated.  The width equality
  // still holds, so the verdict is Holds, but never HoldsUniquely.
  Family x(5, {parse_mask("{1,2,3}", 5), parse_mask("{1,2,4}", 5),
               parse_mask("{1,4,5}", 5), parse_mask("{2,4,5}", 5),
               parse_mask("{3,4,5}", 5), parse_mask("{1,2,3,4}", 5),
               parse_mask("{1,2,3,5}", 5)});
  CHECK(oracle::max_antichain_width(x) == 5);
  auto rep = check_hit_conclusion(x, true);
  CHECK(rep.width == 5);
  CHECK(rep.verdict == Verdict::Holds);
}

TEST_CASE("hit holds-fraction is monotone-ish in p at n = 9") {
  const int trials = 200;
  auto fraction = [&](double p) {
    int holds = 0;
    for (int t = 0; t < trials; ++t) {
      RngStream stream = derive_stream(606, std::uint64_t(t) + 100000 * std::uint64_t(p * 100));
      Family x = sample_powerset(9, p, stream);
      auto rep = check_hit_conclusion(x);
      holds += rep.verdict != Verdict::Fails ? 1 : 0;
    }
    return double(holds) / trials;
  };
  double lo = fraction(0.6), hi = fraction(0.9);
  double sigma = std::sqrt(lo * (1 - lo) / trials) + std::sqrt(hi * (1 - hi) / trials);
  CHECK(hi >= lo - 3 * sigma);
}

TEST_CASE("pinned verdict regression at n = 10, p = 0.95") {
  RngStream stream = derive_stream(4242, 0);
  Family x = sample_powerset(10, 0.95, stream);
  auto main_rep = check_main_conclusion(x);
  auto hit_rep = check_hit_conclusion(x);
  // frozen after the first run under this seed
  CHECK(x.size() == 979);
  CHECK(main_rep.width == 241);
  CHECK(main_rep.verdict == Verdict::Holds);
  CHECK(hit_rep.verdict == Verdict::Holds);
}
