#include "spernerlab/antichain.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <queue>

namespace sperner {

namespace {

constexpr int kInf = std::numeric_limits<int>::max();

// Hopcroft-Karp with layered BFS phases.  Left/right vertex order follows
// the callers' mask order, so matchings and witnesses are deterministic.
struct HopcroftKarp {
  const std::vector<std::vector<int>>& adj;  // left -> right
  int nl, nr;
  std::vector<int> match_left, match_right, dist;
  int phases = 0;

  HopcroftKarp(const std::vector<std::vector<int>>& a, int n_right)
      : adj(a), nl(int(a.size())), nr(n_right),
        match_left(std::size_t(nl), -1), match_right(std::size_t(nr), -1),
        dist(std::size_t(nl), 0) {}

  bool bfs() {
    std::queue<int> q;
    bool reachable_free = false;
    for (int u = 0; u < nl; ++u) {
      if (match_left[std::size_t(u)] == -1) {
        dist[std::size_t(u)] = 0;
        q.push(u);
      } else {
        dist[std::size_t(u)] = kInf;
      }
    }
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[std::size_t(u)]) {
        int w = match_right[std::size_t(v)];
        if (w == -1) {
          reachable_free = true;
        } else if (dist[std::size_t(w)] == kInf) {
          dist[std::size_t(w)] = dist[std::size_t(u)] + 1;
          q.push(w);
        }
      }
    }
    return reachable_free;
  }

  bool dfs(int u) {
    for (int v : adj[std::size_t(u)]) {
      int w = match_right[std::size_t(v)];
      if (w == -1 || (dist[std::size_t(w)] == dist[std::size_t(u)] + 1 && dfs(w))) {
        match_left[std::size_t(u)] = v;
        match_right[std::size_t(v)] = u;
        return true;
      }
    }
    dist[std::size_t(u)] = kInf;
    return false;
  }

  std::size_t solve() {
    std::size_t matching = 0;
    while (bfs()) {
      ++phases;
      for (int u = 0; u < nl; ++u)
        if (match_left[std::size_t(u)] == -1 && dfs(u)) ++matching;
    }
    return matching;
  }
};

bool strictly_below(Mask u, Mask v) { return u != v && (u & v) == u; }

// Strict-containment edges between layer groups of x; already transitively
// closed because containment is transitive.  Edges are materialized per
// layer pair against the pair guard.
std::vector<std::vector<int>> comparability_adjacency(const Family& x,
                                                      const SolverGuards& guards,
                                                      bool adjacent_only) {
  const auto& masks = x.masks();
  std::vector<std::vector<std::size_t>> by_layer(std::size_t(x.ground()) + 1);
  for (std::size_t i = 0; i < masks.size(); ++i)
    by_layer[std::size_t(layer_of(masks[i]))].push_back(i);

  std::uint64_t pairs = 0;
  std::vector<std::vector<int>> adj(masks.size());
  for (std::size_t k1 = 0; k1 < by_layer.size(); ++k1) {
    if (by_layer[k1].empty()) continue;
    for (std::size_t k2 = k1 + 1; k2 < by_layer.size(); ++k2) {
      if (by_layer[k2].empty()) continue;
      if (adjacent_only && k2 != k1 + 1) continue;
      pairs += std::uint64_t(by_layer[k1].size()) * by_layer[k2].size();
      if (pairs > guards.max_pairs)
        throw GuardError(
            "comparability pair count exceeds the guard " +
            std::to_string(guards.max_pairs) +
            "; restrict X to fewer layers or use the bipartite solver");
      for (std::size_t iu : by_layer[k1])
        for (std::size_t iv : by_layer[k2])
          if (strictly_below(masks[iu], masks[iv]))
            adj[iu].push_back(int(iv));
    }
  }
  return adj;
}

// Dilworth witness via Koenig: run the matching, mark Z = vertices reachable
// by alternating paths from free left vertices; the elements with left copy
// in Z and right copy outside Z form a maximum antichain.
AntichainResult solve_dilworth(const Family& x, const SolverGuards& guards,
                               bool adjacent_only) {
  auto start = std::chrono::steady_clock::now();
  if (x.size() > guards.max_elements)
    throw GuardError("family has " + std::to_string(x.size()) +
                     " elements, above the solver guard " +
                     std::to_string(guards.max_elements) +
                     "; use the layer-restricted solver");

  auto adj = comparability_adjacency(x, guards, adjacent_only);
  HopcroftKarp hk(adj, int(x.size()));
  std::size_t matching = hk.solve();

  std::vector<char> z_left(x.size(), 0), z_right(x.size(), 0);
  std::queue<int> q;
  for (int u = 0; u < int(x.size()); ++u)
    if (hk.match_left[std::size_t(u)] == -1) {
      z_left[std::size_t(u)] = 1;
      q.push(u);
    }
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[std::size_t(u)]) {
      if (v == hk.match_left[std::size_t(u)] || z_right[std::size_t(v)]) continue;
      z_right[std::size_t(v)] = 1;
      int w = hk.match_right[std::size_t(v)];
      if (w != -1 && !z_left[std::size_t(w)]) {
        z_left[std::size_t(w)] = 1;
        q.push(w);
      }
    }
  }

  std::vector<Mask> witness;
  witness.reserve(x.size() - matching);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (z_left[i] && !z_right[i]) witness.push_back(x.masks()[i]);

  AntichainResult result;
  result.width = x.size() - matching;
  result.witness = Family(x.ground(), std::move(witness));
  result.stats.matching_size = matching;
  result.stats.phases = hk.phases;
  result.stats.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (result.witness.size() != result.width)
    throw Error("antichain witness size disagrees with width");
  return result;
}

std::size_t middle_layer_count(const Family& x, int k) {
  if (k < 0 || k > x.ground()) return 0;
  return x.layer_histogram()[std::size_t(k)];
}

}  // namespace

nlohmann::json AntichainResult::to_json() const {
  return {{"width", width},
          {"witness", witness.texts()},
          {"matching_size", stats.matching_size},
          {"phases", stats.phases},
          {"elapsed_seconds", stats.elapsed_seconds}};
}

AntichainResult max_antichain(const Family& x, const SolverGuards& guards) {
  return solve_dilworth(x, guards, /*adjacent_only=*/false);
}

AntichainResult max_antichain_bipartite(const Family& x,
                                        const SolverGuards& guards) {
  auto layers = x.layers_present();
  if (layers.size() > 2)
    throw ConfigError("bipartite solver: family spans more than two layers");
  if (layers.size() == 2 && layers[1] != layers[0] + 1)
    throw ConfigError("bipartite solver: the two layers are not adjacent");

  auto result = solve_dilworth(x, guards, /*adjacent_only=*/true);

  if (layers.size() == 2) {
    // The witness of a maximum independent set decomposes as
    // A u ((X /\ lower) \ N(A)) with A its upper-layer part.
    Family upper_part(x.ground());
    Family lower_part(x.ground());
    for (Mask m : result.witness.masks())
      (layer_of(m) == layers[1] ? upper_part : lower_part).insert(m);
    Family x_lower(x.ground());
    for (Mask m : x.masks())
      if (layer_of(m) == layers[0]) x_lower.insert(m);
    Family expected = upper_part.empty()
                          ? x_lower
                          : x_lower.subtract(shadow(upper_part, ShadowDir::Lower));
    if (!(lower_part == expected))
      throw Error("bipartite witness does not decompose as A u (lower \\ N(A))");

    // On the full middle-two-layers graph the upper part is closed.
    int n = x.ground();
    if (n % 2 == 1 && layers[1] == (n + 1) / 2 && !upper_part.empty()) {
      std::uint64_t side = binom_u64(n, layers[1]);
      if (x.layer_histogram()[std::size_t(layers[0])] == side &&
          x.layer_histogram()[std::size_t(layers[1])] == side &&
          !is_closed(upper_part, ShadowDir::Lower))
        throw Error("bipartite witness upper part is not closed on full M");
    }
  }
  return result;
}

std::size_t width_with_forced(const Family& x, const std::vector<Mask>& forced,
                              const SolverGuards& guards) {
  std::vector<Mask> rest;
  for (Mask m : x.masks()) {
    bool ok = true;
    for (Mask f : forced) {
      if (m == f || strictly_below(m, f) || strictly_below(f, m)) {
        ok = false;
        break;
      }
    }
    if (ok) rest.push_back(m);
  }
  return forced.size() +
         max_antichain(Family(x.ground(), std::move(rest)), guards).width;
}

SpecialSets find_special(const Family& x, int k) {
  int n = x.ground();
  if (k < 0 || k > n)
    throw ConfigError("find_special: layer outside [0,n]");
  if (2 * k == n)
    throw ConfigError("find_special: direction undefined at the middle layer of even n");
  ShadowDir dir = 2 * k > n ? ShadowDir::Lower : ShadowDir::Upper;

  SpecialSets out{Family(n), {}, Family(n), Family(n)};
  for (Mask m : x.masks()) {
    if (layer_of(m) != k) continue;
    out.layer_members.insert(m);
    int count = 0;
    for (Mask s : shadow_of(m, n, dir).masks())
      count += x.contains(s) ? 1 : 0;
    out.shadow_counts.push_back(count);
    if (count == 0) out.isolated.insert(m);
    if (count <= 1) out.nearly_isolated.insert(m);
  }
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::HoldsUniquely: return "holds_uniquely";
  }
  return "?";
}

nlohmann::json ConclusionReport::to_json() const {
  return {{"verdict", to_string(verdict)},
          {"width", width},
          {"target_width", target_width},
          {"best_k", best_k},
          {"witness_in_three_layers", witness_in_three_layers}};
}

namespace {

bool spans_three_layers(const Family& witness) {
  auto layers = witness.layers_present();
  return layers.empty() || layers.back() - layers.front() <= 2;
}

}  // namespace

namespace {

// Certifies that no maximum antichain uses a mask outside `allowed`:
// forcing any outside element into an antichain drops the best width.
bool no_max_antichain_uses(const Family& x, const Family& allowed,
                           std::size_t width, const SolverGuards& guards) {
  for (Mask m : x.masks()) {
    if (allowed.contains(m)) continue;
    if (width_with_forced(x, {m}, guards) >= width) return false;
  }
  return true;
}

}  // namespace

ConclusionReport check_main_conclusion(const Family& x, bool exhaustive,
                                       const SolverGuards& guards) {
  int n = x.ground();
  if (exhaustive && n > 8)
    throw ConfigError("exhaustive verification is limited to n <= 8");

  ConclusionReport report;
  {
    auto solved = max_antichain(x, guards);
    report.width = solved.width;
    report.witness_in_three_layers = spans_three_layers(solved.witness);
  }
  int k_lo = n / 2, k_hi = (n + 1) / 2;
  std::size_t m_lo = middle_layer_count(x, k_lo);
  std::size_t m_hi = middle_layer_count(x, k_hi);
  report.target_width = std::max(m_lo, m_hi);
  report.best_k = m_lo >= m_hi ? k_lo : k_hi;

  if (report.width != report.target_width) {
    report.verdict = Verdict::Fails;
    return report;
  }
  report.verdict = Verdict::Holds;

  if (exhaustive) {
    // Every maximum antichain must be X /\ C([n],k) for a middle k.  It is
    // enough that (a) no element outside the middle layers appears in any
    // maximum antichain and (b) no maximum antichain mixes the two layers;
    // a single-layer maximum antichain always equals the full intersection.
    Family allowed(n);
    for (Mask m : x.masks()) {
      int l = layer_of(m);
      if (l == k_lo || l == k_hi) allowed.insert(m);
    }
    bool unique = no_max_antichain_uses(x, allowed, report.width, guards);
    if (unique && k_lo != k_hi) {
      for (Mask u : x.masks()) {
        if (layer_of(u) != k_lo) continue;
        for (Mask v : x.masks()) {
          if (layer_of(v) != k_hi || strictly_below(u, v)) continue;
          if (width_with_forced(x, {u, v}, guards) >= report.width) {
            unique = false;
            break;
          }
        }
        if (!unique) break;
      }
    }
    if (unique) report.verdict = Verdict::HoldsUniquely;
  }
  return report;
}

ConclusionReport check_hit_conclusion(const Family& x, bool exhaustive,
                                      const SolverGuards& guards) {
  int n = x.ground();
  if (exhaustive && n > 8)
    throw ConfigError("exhaustive verification is limited to n <= 8");

  ConclusionReport report;
  {
    auto solved = max_antichain(x, guards);
    report.width = solved.width;
    report.witness_in_three_layers = spans_three_layers(solved.witness);
  }

  std::vector<int> mids{n / 2};
  if ((n + 1) / 2 != n / 2) mids.push_back((n + 1) / 2);

  report.verdict = Verdict::Fails;
  for (int k : mids) {
    Family restricted(n);
    for (Mask m : x.masks())
      if (layer_of(m) == k) restricted.insert(m);
    for (int adj_layer : {k - 1, k + 1}) {
      if (adj_layer < 0 || adj_layer > n) continue;
      restricted = restricted.unite(find_special(x, adj_layer).nearly_isolated);
    }
    std::size_t wk = max_antichain(restricted, guards).width;
    report.target_width = std::max(report.target_width, wk);
    if (wk != report.width) continue;
    if (report.verdict == Verdict::Fails) {
      report.verdict = Verdict::Holds;
      report.best_k = k;
    }
    if (exhaustive && report.verdict != Verdict::HoldsUniquely &&
        no_max_antichain_uses(x, restricted, report.width, guards)) {
      report.verdict = Verdict::HoldsUniquely;
      report.best_k = k;
    }
  }
  return report;
}

std::uint64_t defect_pair_count(const Family& x, int k) {
  int n = x.ground();
  if (k < 0 || k + 1 > n || 2 * (k + 1) <= n)
    throw ConfigError("defect_pair_count: layer k+1 must be lower-directional");

  // present subsets of one (k+1)-set, in mask order
  auto present_subsets = [&](Mask u) {
    std::vector<Mask> subs;
    for (Mask s : shadow_of(u, n, ShadowDir::Lower).masks())
      if (x.contains(s)) subs.push_back(s);
    return subs;
  };

  std::uint64_t pairs = 0;
  for (Mask u : x.masks()) {
    if (layer_of(u) != k + 1) continue;
    auto u_subs = present_subsets(u);
    for (Mask shared : u_subs) {
      // supersets v > u of the shared subset, to count each pair once
      for (Mask v : shadow_of(shared, n, ShadowDir::Upper).masks()) {
        if (v <= u || layer_of(v) != k + 1 || !x.contains(v)) continue;
        auto v_subs = present_subsets(v);
        std::size_t others = 0;
        for (Mask s : u_subs) others += s != shared ? 1 : 0;
        for (Mask s : v_subs) others += s != shared ? 1 : 0;
        if (others <= 1) ++pairs;
      }
    }
  }
  return pairs;
}

}  // namespace sperner
