#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spernerlab/experiments.hpp"

using namespace sperner;

TEST_CASE("sweep endpoints: p = 1 and p = 0") {
  auto rows = sweep("main", {4, 6}, {0.0, 1.0}, 25, 99);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    CHECK(row.holds + row.fails + row.errors == row.trials);
    if (row.p == 1.0) {
      CHECK(row.holds == row.trials);  // Sperner
      CHECK(row.mean_width() == doctest::Approx(double(binom_u64(row.n, row.n / 2))));
    }
    if (row.p == 0.0) {
      CHECK(row.holds == row.trials);  // width 0 = empty middle, vacuous
      CHECK(row.mean_width() == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("sweep rows reproduce byte-identically at any thread count") {
  auto one = sweep("hit", {7}, {0.4, 0.8}, 40, 31415, 1);
  auto four = sweep("hit", {7}, {0.4, 0.8}, 40, 31415, 4);
  CHECK(sweep_csv(one) == sweep_csv(four));
  CHECK(sweep_json(one) == sweep_json(four));
  CHECK(sweep_csv(one).substr(0, 5) == "kind,");
}

TEST_CASE("sweep trend at n = 10 within binomial error") {
  const int trials = 200;
  auto rows = sweep("main", {10}, {0.6, 0.75, 0.9}, trials, 4242);
  REQUIRE(rows.size() == 3);
  auto frac = [&](std::size_t i) { return double(rows[i].holds) / trials; };
  auto sigma = [&](std::size_t i) {
    double f = frac(i);
    return std::sqrt(std::max(f * (1 - f), 0.25 / trials) / trials);
  };
  for (std::size_t i = 0; i + 1 < rows.size(); ++i)
    CHECK(frac(i + 1) >= frac(i) - 3 * (sigma(i) + sigma(i + 1)));
}

TEST_CASE("expectation audit against the closed form") {
  // n = 11, layer 7, isolated: binom(11,7) * (3/4) * (1/4)^7 = 990/65536
  auto audit = expectation_audit(11, 0.75, 7, SpecialKind::Isolated, 20000, 7);
  CHECK(audit.exact == doctest::Approx(990.0 / 65536.0).epsilon(1e-12));
  CHECK(audit.row.pass);

  // p = 1: exact 0, every draw 0
  auto certain = expectation_audit(9, 1.0, 6, SpecialKind::Isolated, 100, 8);
  CHECK(certain.exact == doctest::Approx(0.0));
  CHECK(certain.mc_mean == doctest::Approx(0.0));
  CHECK(certain.row.pass);

  // nearly isolated at n = 9, p = 0.4, layer 6 (10^5 trials)
  auto nearly =
      expectation_audit(9, 0.4, 6, SpecialKind::NearlyIsolated, 100000, 9);
  double p = 0.4;
  double expected = double(binom_u64(9, 6)) * p *
                    (std::pow(1 - p, 6) + 6 * p * std::pow(1 - p, 5));
  CHECK(nearly.exact == doctest::Approx(expected).epsilon(1e-12));
  CHECK(nearly.row.pass);

  // identical at any thread count
  auto t1 = expectation_audit(9, 0.4, 6, SpecialKind::NearlyIsolated, 500, 9, 1);
  auto t3 = expectation_audit(9, 0.4, 6, SpecialKind::NearlyIsolated, 500, 9, 3);
  CHECK(t1.csv() == t3.csv());
  CHECK(t1.to_json() == t3.to_json());

  CHECK_THROWS_AS(expectation_audit(8, 0.5, 4, SpecialKind::Isolated, 10, 1),
                  ConfigError);  // undirected middle layer
}

TEST_CASE("delta formula") {
  // eps = 0.1: (eps/12)^2 is the smaller branch
  CHECK(small_a_delta(0.1) == doctest::Approx((0.1 / 12) * (0.1 / 12)));
  // large eps: the (eps/2)/(1+eps) branch would exceed (eps/12)^2 only for
  // eps > 71; check both branches are respected
  CHECK(small_a_delta(100.0) == doctest::Approx(100.0 / 2 / 101.0));
  CHECK_THROWS_AS(small_a_delta(0.0), ConfigError);
}

TEST_CASE("inequality audit passes on the default grids") {
  auto rows = inequality_audit();
  CHECK(rows.size() > 4000);
  int failures = 0;
  for (const auto& row : rows) failures += row.pass ? 0 : 1;
  CHECK(failures == 0);

  // f(0) = 0 exactly at every k
  for (const auto& row : rows) {
    if (row.id == "iso_f_nonneg" && row.point.find(";y=0") != std::string::npos &&
        row.point.find(";y=0.") == std::string::npos)
      CHECK(row.rhs == 0.0);
  }

  // the crossover a* is reported
  bool found = false;
  for (const auto& row : rows)
    if (row.id == "small_a_beats_cost" &&
        row.point.find("k=100;eps=0.01") != std::string::npos) {
      found = true;
      CHECK(row.point.find("a*=") != std::string::npos);
      CHECK(row.margin > 0);
    }
  CHECK(found);

  // CSV shape
  auto csv = audit_csv(rows);
  CHECK(csv.substr(0, 29) == "id,point,lhs,rhs,margin,pass\n");
}

TEST_CASE("closed 2-linked enumeration at k = 3 against brute force") {
  // independent route: all 2^10 subfamilies of C([5],3), filtered
  Family layer = full_layer(5, 3);
  std::vector<std::vector<Mask>> closed_two_linked;
  for (std::uint32_t fam = 1; fam < (1u << 10); ++fam) {
    std::vector<Mask> masks;
    for (int i = 0; i < 10; ++i)
      if ((fam >> i) & 1) masks.push_back(layer.masks()[std::size_t(i)]);
    Family a(5, masks);
    if (two_linked_components(a, ShadowDir::Lower).size() != 1) continue;
    if (!(closure(a, ShadowDir::Lower) == a)) continue;
    closed_two_linked.push_back(masks);
  }

  auto enumerated = enumerate_closed_two_linked(3);
  CHECK(enumerated.size() == closed_two_linked.size());
  CHECK(enumerated.size() == 171);  // frozen count
  std::size_t with_precondition = 0;
  for (const auto& f : enumerated) {
    auto g = shadow(f, ShadowDir::Lower).size();
    if (f.size() > 1 && 6 * std::int64_t(g - f.size()) >= std::int64_t(f.size()))
      ++with_precondition;
  }
  CHECK(with_precondition == 160);  // frozen count

  std::vector<std::vector<Mask>> got;
  for (const auto& f : enumerated) got.push_back(f.masks());
  std::sort(got.begin(), got.end());
  std::sort(closed_two_linked.begin(), closed_two_linked.end());
  CHECK(got == closed_two_linked);

  CHECK_THROWS_AS(enumerate_closed_two_linked(5), ConfigError);
  CHECK_THROWS_AS(enumerate_closed_two_linked(4, 3), GuardError);
}

TEST_CASE("grown families are closed, 2-linked, and reproducible") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    RngStream rng = derive_stream(seed, 0);
    Family a = grow_closed_two_linked(8, 12, rng);
    CHECK(a.size() >= 12);
    CHECK(two_linked_components(a).size() == 1);
    CHECK(is_closed(a, ShadowDir::Lower));

    RngStream rng2 = derive_stream(seed, 0);
    CHECK(grow_closed_two_linked(8, 12, rng2) == a);
  }
}

TEST_CASE("theorem-4 scan, enumeration mode at k = 3") {
  auto report = theorem4_scan(3, 0.9, 1.0 / 16, 200, ScanMode::Enumeration, 11);
  CHECK(report.theorem_regime);
  CHECK(report.families == 160);  // frozen: closed 2-linked with expansion
  CHECK(report.evaluations == report.families * 200);
  CHECK(report.violation_rate <= 1.0);
  CHECK(report.violation_rate ==
        doctest::Approx(double(report.violations) / double(report.evaluations)));

  // pinned-seed regression: identical reruns
  auto again = theorem4_scan(3, 0.9, 1.0 / 16, 200, ScanMode::Enumeration, 11);
  CHECK(again.to_json() == report.to_json());

  // flagged outside the theorem regime, still permitted
  CHECK(!theorem4_scan(3, 0.3, 0.05, 10, ScanMode::Enumeration, 1).theorem_regime);
  CHECK_THROWS_AS(theorem4_scan(5, 0.9, 0.05, 1, ScanMode::Enumeration, 1),
                  ConfigError);
}

TEST_CASE("theorem-4 margin arithmetic on a designed instance") {
  // A independent of X with N(A) fully present: lhs = |N(A)| >= t >= c*t
  Family a(5, {parse_mask("{1,2,3}", 5), parse_mask("{1,2,4}", 5)});
  Family g = shadow(a, ShadowDir::Lower);
  std::int64_t t = std::int64_t(g.size()) - std::int64_t(a.size());
  std::int64_t lhs = std::int64_t(g.size());  // |N(A) /\ X| - |A /\ X| with X = N(A)
  CHECK(lhs >= t);
  CHECK(double(lhs) >= 0.0625 * double(t));
}

TEST_CASE("theorem-4 scan, random growth at k = 8") {
  auto report = theorem4_scan(8, 0.9, 0.01, 50, ScanMode::RandomGrowth, 5);
  CHECK(report.families > 0);
  CHECK(report.evaluations == report.families);
  // no hard assertion on violations (asymptotic claim); rate is reported
  CHECK(report.violation_rate >= 0.0);
  CHECK(report.worst_margin <= 1e18);
}
