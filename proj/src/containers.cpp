#include "spernerlab/containers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

namespace sperner {

namespace {

// Dense adjacency of the middle-two-layers graph for one k, shared read-only
// between concurrent pipeline runs.
struct MiddleIndex {
  int k = 0;
  std::vector<Mask> up, low;           // sorted masks of L_k and L_{k-1}
  std::vector<std::int32_t> up_nbr;    // k ranks into low, per upper vertex
  std::vector<std::int32_t> low_nbr;   // k ranks into up, per lower vertex

  std::size_t nu() const { return up.size(); }
  std::size_t nl() const { return low.size(); }

  const std::int32_t* nbrs_up(std::size_t i) const { return &up_nbr[i * std::size_t(k)]; }
  const std::int32_t* nbrs_low(std::size_t j) const { return &low_nbr[j * std::size_t(k)]; }

  std::int32_t up_rank(Mask m) const {
    return std::int32_t(std::lower_bound(up.begin(), up.end(), m) - up.begin());
  }
  std::int32_t low_rank(Mask m) const {
    return std::int32_t(std::lower_bound(low.begin(), low.end(), m) - low.begin());
  }
};

std::shared_ptr<const MiddleIndex> middle_index(int k, std::uint64_t guard) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const MiddleIndex>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
  }

  MiddleGraph mg(k);
  if (mg.side_size() > guard)
    throw GuardError("middle graph side size " + std::to_string(mg.side_size()) +
                     " above the guard " + std::to_string(guard));
  auto idx = std::make_shared<MiddleIndex>();
  idx->k = k;
  idx->up = mg.upper().masks();
  idx->low = mg.lower().masks();
  int n = mg.ground();

  idx->up_nbr.reserve(idx->nu() * std::size_t(k));
  for (Mask v : idx->up) {
    Mask rest = v;
    while (rest) {
      Mask bit = rest & (~rest + 1);
      idx->up_nbr.push_back(idx->low_rank(v ^ bit));
      rest ^= bit;
    }
  }
  idx->low_nbr.reserve(idx->nl() * std::size_t(k));
  for (Mask v : idx->low) {
    Mask rest = ground_mask(n) & ~v;
    while (rest) {
      Mask bit = rest & (~rest + 1);
      idx->low_nbr.push_back(idx->up_rank(v | bit));
      rest ^= bit;
    }
  }

  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(k, idx);
  return it->second;
}

using Flags = std::vector<char>;

std::size_t count_flags(const Flags& f) {
  return std::size_t(std::count(f.begin(), f.end(), char(1)));
}

Family flags_to_family(const Flags& f, const std::vector<Mask>& masks, int n) {
  std::vector<Mask> out;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i]) out.push_back(masks[i]);
  return Family(n, std::move(out));
}

// degree of vertex i (by its neighbor list) into a flagged set
int deg_into(const std::int32_t* nbrs, int k, const Flags& set) {
  int d = 0;
  for (int j = 0; j < k; ++j) d += set[std::size_t(nbrs[j])];
  return d;
}

double heavy_walk_threshold(int k) {
  double lk = std::log(double(k));
  return double(k) * k * k / (2.0 * lk * lk * lk * lk);
}

}  // namespace

PipelineParams PipelineParams::defaults(int k) {
  if (k < 2) throw ConfigError("pipeline needs k >= 2");
  double lk = std::log(double(k));
  PipelineParams p;
  p.k = k;
  p.q = std::min(1.0, 6.0 * std::pow(lk, 5) / (double(k) * k * k));
  p.q_prime = std::min(1.0, 5.0 * lk / k);
  p.psi = int(std::ceil(lk * lk));
  return p;
}

void PipelineParams::validate() const {
  if (k < 2) throw ConfigError("pipeline needs k >= 2");
  if (!(q > 0 && q <= 1)) throw ConfigError("q must be in (0,1] after clamping");
  if (!(q_prime > 0 && q_prime <= 1))
    throw ConfigError("q' must be in (0,1] after clamping");
  if (psi < 1 || psi >= k)
    throw ConfigError("psi must satisfy 1 <= psi < k, got psi=" +
                      std::to_string(psi) + " with k=" + std::to_string(k));
  if (slack < 1) throw ConfigError("slack must be >= 1");
  if (retry_cap < 1) throw ConfigError("retry_cap must be >= 1");
}

nlohmann::json PipelineParams::to_json() const {
  return {{"k", k},       {"q", q},          {"q_prime", q_prime},
          {"psi", psi},   {"slack", slack},  {"retry_cap", retry_cap},
          {"layer_guard", layer_guard}};
}

ContainerTrace weak_container(const Family& a, const PipelineParams& params,
                              RngStream& rng) {
  params.validate();
  int k = params.k;
  int n = 2 * k - 1;
  if (a.ground() != n)
    throw ConfigError("weak_container: family ground must be [2k-1]");
  if (a.empty()) throw ConfigError("weak_container hypothesis failed: A is empty");
  auto layer = a.uniform_layer();
  if (!layer || *layer != k)
    throw ConfigError("weak_container: A must lie in layer k of [2k-1]");

  auto idx = middle_index(k, params.layer_guard);
  const std::size_t nu = idx->nu(), nl = idx->nl();

  Flags in_a(nu, 0);
  std::vector<std::int32_t> a_ranks;
  a_ranks.reserve(a.size());
  for (Mask m : a.masks()) {
    std::int32_t r = idx->up_rank(m);
    in_a[std::size_t(r)] = 1;
    a_ranks.push_back(r);
  }

  Flags in_g(nl, 0);
  for (std::int32_t r : a_ranks) {
    const auto* nb = idx->nbrs_up(std::size_t(r));
    for (int j = 0; j < k; ++j) in_g[std::size_t(nb[j])] = 1;
  }
  std::uint64_t a_size = a.size();
  std::uint64_t g_size = count_flags(in_g);
  std::int64_t t = std::int64_t(g_size) - std::int64_t(a_size);

  // Hypotheses of the weak-container lemma, checked by name.
  if (two_linked_components(a, ShadowDir::Lower).size() != 1)
    throw ConfigError("weak_container hypothesis failed: A is not 2-linked");
  if (double(a_size) + 1e-9 < std::log2(double(k)))
    throw ConfigError("weak_container hypothesis failed: |A| < log2(k)");
  if (2 * std::int64_t(k) * t < std::int64_t(a_size))
    throw ConfigError("weak_container hypothesis failed: t < |A|/2k");

  // Heavy-walk vertices: count three-step walks v-x-y-z with x,z in A
  // (repetitions allowed) by two degree convolutions.
  std::vector<std::int64_t> deg_a(nl, 0);
  for (std::int32_t r : a_ranks) {
    const auto* nb = idx->nbrs_up(std::size_t(r));
    for (int j = 0; j < k; ++j) ++deg_a[std::size_t(nb[j])];
  }
  std::vector<std::int64_t> walk_mid(nu, 0);  // W(x) = sum over y in N(x) of d(y,A)
  for (std::int32_t r : a_ranks) {
    const auto* nb = idx->nbrs_up(std::size_t(r));
    std::int64_t s = 0;
    for (int j = 0; j < k; ++j) s += deg_a[std::size_t(nb[j])];
    walk_mid[std::size_t(r)] = s;
  }
  std::vector<std::int64_t> walks(nl, 0);
  for (std::int32_t r : a_ranks) {
    const auto* nb = idx->nbrs_up(std::size_t(r));
    for (int j = 0; j < k; ++j) walks[std::size_t(nb[j])] += walk_mid[std::size_t(r)];
  }
  const double heavy_cut = heavy_walk_threshold(k);
  Flags in_gh(nl, 0);
  for (std::size_t j = 0; j < nl; ++j)
    if (double(walks[j]) >= heavy_cut) in_gh[j] = 1;

  ContainerTrace trace;
  trace.k = k;
  trace.a = a_size;
  trace.g = g_size;
  trace.t = t;

  // Stage R: rejection-sample R = A_q until the three acceptance conditions
  // hold (slack * the expectation bounds; slack 3 gives 18,18,9).
  Flags in_nr(nl, 0), in_nnr(nu, 0), in_t(nl, 0), in_fp(nl, 0);
  std::vector<std::pair<Mask, Mask>> leaks;
  Flags in_r(nu, 0);
  bool accepted = false;
  std::string failing = "none";
  for (int attempt = 0; attempt < params.retry_cap; ++attempt) {
    ++trace.retries_r;
    std::fill(in_r.begin(), in_r.end(), 0);
    std::uint64_t r_size = 0;
    for (std::int32_t r : a_ranks)
      if (rng.bernoulli(params.q)) {
        in_r[std::size_t(r)] = 1;
        ++r_size;
      }

    std::fill(in_nr.begin(), in_nr.end(), 0);
    for (std::int32_t r : a_ranks) {
      if (!in_r[std::size_t(r)]) continue;
      const auto* nb = idx->nbrs_up(std::size_t(r));
      for (int j = 0; j < k; ++j) in_nr[std::size_t(nb[j])] = 1;
    }
    std::fill(in_nnr.begin(), in_nnr.end(), 0);
    for (std::size_t j = 0; j < nl; ++j) {
      if (!in_nr[j]) continue;
      const auto* nb = idx->nbrs_low(j);
      for (int i = 0; i < k; ++i) in_nnr[std::size_t(nb[i])] = 1;
    }
    std::fill(in_t.begin(), in_t.end(), 0);
    std::fill(in_fp.begin(), in_fp.end(), 0);
    for (std::size_t i = 0; i < nu; ++i) {
      if (!in_nnr[i]) continue;
      const auto* nb = idx->nbrs_up(i);
      for (int j = 0; j < k; ++j) {
        in_t[std::size_t(nb[j])] = 1;
        if (in_a[i]) in_fp[std::size_t(nb[j])] = 1;
      }
    }
    leaks.clear();
    for (std::size_t j = 0; j < nl; ++j) {
      if (!in_nr[j]) continue;
      const auto* nb = idx->nbrs_low(j);
      for (int i = 0; i < k; ++i)
        if (!in_a[std::size_t(nb[i])])
          leaks.emplace_back(idx->low[j], idx->up[std::size_t(nb[i])]);
    }
    std::uint64_t gh_minus_fp = 0;
    for (std::size_t j = 0; j < nl; ++j)
      if (in_gh[j] && !in_fp[j]) ++gh_minus_fp;

    if (double(r_size) > params.slack * double(a_size) * params.q) {
      failing = "|R| <= slack*aq";
      continue;
    }
    if (double(leaks.size()) >
        params.slack * double(t) * k * k * params.q) {
      failing = "|L| <= slack*t*k^2*q";
      continue;
    }
    if (double(gh_minus_fp) >
        params.slack * std::max(1.0, 3.0 * double(t) / std::pow(double(k), 0.2))) {
      failing = "|G^h \\ F'| <= slack*max(1, 3t/k^(1/5))";
      continue;
    }
    accepted = true;
    break;
  }
  if (!accepted)
    throw RetryError("weak_container: R stage exhausted " +
                         std::to_string(params.retry_cap) + " retries (last: " +
                         failing + ")",
                     failing);

  // Q, E and stage R'.
  Flags in_q(nu, 0), in_e(nu, 0);
  Flags t_minus_g(nl, 0);
  std::vector<std::int32_t> tg_ranks;
  for (std::size_t j = 0; j < nl; ++j)
    if (in_t[j] && !in_g[j]) {
      t_minus_g[j] = 1;
      tg_ranks.push_back(std::int32_t(j));
    }
  for (std::size_t i = 0; i < nu; ++i) {
    int dt = deg_into(idx->nbrs_up(i), k, in_t);
    if (2 * dt >= k) {
      in_q[i] = 1;
      if (!in_a[i] && 4 * deg_into(idx->nbrs_up(i), k, t_minus_g) >= k)
        in_e[i] = 1;
    }
  }
  std::uint64_t e_size = count_flags(in_e);

  Flags in_rp(nl, 0), in_nrp(nu, 0);
  accepted = false;
  for (int attempt = 0; attempt < params.retry_cap; ++attempt) {
    ++trace.retries_r_prime;
    std::fill(in_rp.begin(), in_rp.end(), 0);
    std::uint64_t rp_size = 0;
    for (std::int32_t j : tg_ranks)
      if (rng.bernoulli(params.q_prime)) {
        in_rp[std::size_t(j)] = 1;
        ++rp_size;
      }
    std::fill(in_nrp.begin(), in_nrp.end(), 0);
    for (std::int32_t j : tg_ranks) {
      if (!in_rp[std::size_t(j)]) continue;
      const auto* nb = idx->nbrs_low(std::size_t(j));
      for (int i = 0; i < k; ++i) in_nrp[std::size_t(nb[i])] = 1;
    }
    std::uint64_t e_left = 0;
    for (std::size_t i = 0; i < nu; ++i)
      if (in_e[i] && !in_nrp[i]) ++e_left;

    if (double(rp_size) > params.slack * params.q_prime * double(tg_ranks.size())) {
      failing = "|R'| <= slack*q'*|T\\G|";
      continue;
    }
    double expected_left =
        double(e_size) * std::pow(1.0 - params.q_prime, double(k) / 4.0);
    if (double(e_left) > params.slack * std::max(1.0, expected_left)) {
      failing = "|E \\ N(R')| <= slack*max(1, |E|(1-q')^(k/4))";
      continue;
    }
    accepted = true;
    break;
  }
  if (!accepted)
    throw RetryError("weak_container: R' stage exhausted " +
                         std::to_string(params.retry_cap) + " retries (last: " +
                         failing + ")",
                     failing);

  Flags in_qp(nu, 0), in_sp(nu, 0);
  for (std::size_t i = 0; i < nu; ++i) {
    in_qp[i] = in_q[i] && !in_nrp[i];
    in_sp[i] = in_qp[i] || in_a[i];
  }

  trace.r_sample = flags_to_family(in_r, idx->up, n);
  trace.triple_hood = flags_to_family(in_t, idx->low, n);
  trace.f_weak = flags_to_family(in_fp, idx->low, n);
  trace.g_heavy = flags_to_family(in_gh, idx->low, n);
  trace.q_high = flags_to_family(in_q, idx->up, n);
  trace.e_exposed = flags_to_family(in_e, idx->up, n);
  trace.r_prime_sample = flags_to_family(in_rp, idx->low, n);
  trace.q_surviving = flags_to_family(in_qp, idx->up, n);
  trace.s_weak = flags_to_family(in_sp, idx->up, n);
  trace.leak_edges = std::move(leaks);

  // Unconditional structure: A <= S', F' <= N(A), F' <= T.
  Family g_family = flags_to_family(in_g, idx->low, n);
  if (!a.is_subset_of(trace.s_weak))
    throw Error("weak container violated A subseteq S'");
  if (!trace.f_weak.is_subset_of(g_family))
    throw Error("weak container violated F' subseteq N(A)");
  if (!trace.f_weak.is_subset_of(trace.triple_hood))
    throw Error("weak container violated F' subseteq T");
  return trace;
}

void strong_container(const Family& a, const Family& s_weak,
                      const Family& f_weak, const PipelineParams& params,
                      ContainerTrace& trace) {
  params.validate();
  int k = params.k;
  int n = 2 * k - 1;
  int psi = params.psi;
  if (a.ground() != n || s_weak.ground() != n || f_weak.ground() != n)
    throw ConfigError("strong_container: ground sets must be [2k-1]");

  auto idx = middle_index(k, params.layer_guard);
  const std::size_t nu = idx->nu(), nl = idx->nl();

  Flags in_a(nu, 0);
  std::vector<std::int32_t> a_ranks;
  for (Mask m : a.masks()) {
    std::int32_t r = idx->up_rank(m);
    in_a[std::size_t(r)] = 1;
    a_ranks.push_back(r);
  }
  Flags in_g(nl, 0);
  for (std::int32_t r : a_ranks) {
    const auto* nb = idx->nbrs_up(std::size_t(r));
    for (int j = 0; j < k; ++j) in_g[std::size_t(nb[j])] = 1;
  }
  Family g_family = flags_to_family(in_g, idx->low, n);

  if (!a.is_subset_of(s_weak))
    throw ConfigError("strong_container: malformed weak container (A not in S')");
  if (!f_weak.is_subset_of(g_family))
    throw ConfigError("strong_container: malformed weak container (F' not in N(A))");

  // Greedy H: ascending mask order over A; add v while its degree into the
  // unpatched part of G stays above psi.
  Flags in_fpp(nl, 0);
  for (Mask m : f_weak.masks()) in_fpp[std::size_t(idx->low_rank(m))] = 1;
  std::uint64_t f_weak_size = f_weak.size();
  Flags in_h(nu, 0);
  std::uint64_t h_size = 0;
  for (std::int32_t r : a_ranks) {
    const auto* nb = idx->nbrs_up(std::size_t(r));
    int d = 0;
    for (int j = 0; j < k; ++j) {
      std::size_t y = std::size_t(nb[j]);
      d += in_g[y] && !in_fpp[y];
    }
    if (d > psi) {
      in_h[std::size_t(r)] = 1;
      ++h_size;
      for (int j = 0; j < k; ++j) in_fpp[std::size_t(nb[j])] = 1;
    }
  }
  // post-greedy cap: every v in A now has d(v, G \ F'') <= psi
  for (std::int32_t r : a_ranks) {
    const auto* nb = idx->nbrs_up(std::size_t(r));
    int d = 0;
    for (int j = 0; j < k; ++j) {
      std::size_t y = std::size_t(nb[j]);
      d += in_g[y] && !in_fpp[y];
    }
    if (d > psi) throw Error("strong container: H greedy left a high-degree vertex");
  }

  Flags in_spp(nu, 0);
  for (std::size_t i = 0; i < nu; ++i)
    if (deg_into(idx->nbrs_up(i), k, in_fpp) >= k - psi) in_spp[i] = 1;
  for (std::int32_t r : a_ranks)
    if (!in_spp[std::size_t(r)])
      throw Error("strong container violated A subseteq S''");
  std::uint64_t spp_size = count_flags(in_spp);

  // Greedy U over the complement of G, pruning S'' down to S.
  Flags in_s = in_spp;
  Flags in_u(nl, 0);
  std::uint64_t u_size = 0;
  for (std::size_t j = 0; j < nl; ++j) {
    if (in_g[j]) continue;
    const auto* nb = idx->nbrs_low(j);
    if (deg_into(nb, k, in_s) > psi) {
      in_u[j] = 1;
      ++u_size;
      for (int i = 0; i < k; ++i) in_s[std::size_t(nb[i])] = 0;
    }
  }
  for (std::size_t j = 0; j < nl; ++j)
    if (!in_g[j] && deg_into(idx->nbrs_low(j), k, in_s) > psi)
      throw Error("strong container: U greedy left a high-degree vertex");
  for (std::int32_t r : a_ranks)
    if (!in_s[std::size_t(r)])
      throw Error("strong container violated A subseteq S (N(U) met A)");
  // U only ever contains vertices adjacent to the current S <= S''.
  for (std::size_t j = 0; j < nl; ++j)
    if (in_u[j] && deg_into(idx->nbrs_low(j), k, in_spp) == 0)
      throw Error("strong container violated U subseteq N(S'')");

  Flags in_f = in_fpp;
  for (std::size_t j = 0; j < nl; ++j)
    if (!in_f[j] && deg_into(idx->nbrs_low(j), k, in_s) > psi) in_f[j] = 1;

  std::uint64_t s_size = count_flags(in_s);
  std::uint64_t f_size = count_flags(in_f);

  // Greedy size bounds: each addition removes more than psi elements.
  std::uint64_t g_excess = count_flags(in_g) - f_weak_size;  // |G \ F'|
  if (h_size > (g_excess + std::uint64_t(psi) - 1) / std::uint64_t(psi))
    throw Error("strong container violated |H| <= ceil(|G\\F'|/psi)");
  std::uint64_t spp_excess = spp_size - a.size();
  if (u_size > (spp_excess + std::uint64_t(psi) - 1) / std::uint64_t(psi))
    throw Error("strong container violated |U| <= ceil(|S''\\A|/psi)");

  Family f_final = flags_to_family(in_f, idx->low, n);
  Family f_patched = flags_to_family(in_fpp, idx->low, n);
  if (!f_patched.is_subset_of(f_final) || !f_final.is_subset_of(g_family))
    throw Error("strong container violated F'' subseteq F subseteq N(A)");
  trace.f_patched = std::move(f_patched);

  // Exact inequality |S| <= |F| + 2 t psi / (k - psi), in integers.
  std::int64_t gap = std::int64_t(s_size) - std::int64_t(f_size);
  if (gap * std::int64_t(k - psi) > 2 * trace.t * std::int64_t(psi))
    throw Error("strong container violated |S| <= |F| + 2t*psi/(k-psi)");

  trace.h_patch = flags_to_family(in_h, idx->up, n);
  trace.s_tight = flags_to_family(in_spp, idx->up, n);
  trace.u_prune = flags_to_family(in_u, idx->low, n);
  trace.s_strong = flags_to_family(in_s, idx->up, n);
  trace.f_strong = std::move(f_final);
  trace.has_strong = true;
}

ContainerTrace run_container_pipeline(const Family& a,
                                      const PipelineParams& params,
                                      RngStream& rng) {
  ContainerTrace trace = weak_container(a, params, rng);
  strong_container(a, trace.s_weak, trace.f_weak, params, trace);
  trace.ledger = container_cost_report(trace);
  return trace;
}

ContainerTrace trivial_container_trace(const Family& a,
                                       const PipelineParams& params) {
  params.validate();
  int n = 2 * params.k - 1;
  if (a.ground() != n || a.empty() || a.uniform_layer() != params.k)
    throw ConfigError("trivial_container_trace: A must lie in layer k of [2k-1]");
  Family g = shadow(a, ShadowDir::Lower);
  ContainerTrace trace;
  trace.k = params.k;
  trace.a = a.size();
  trace.g = g.size();
  trace.t = std::int64_t(g.size()) - std::int64_t(a.size());
  trace.s_weak = a;
  trace.f_weak = g;
  trace.f_patched = g;
  trace.s_strong = a;
  trace.f_strong = std::move(g);
  trace.has_strong = true;
  trace.from_pipeline = false;
  trace.ledger = container_cost_report(trace);
  return trace;
}

bool VerifyReport::all_pass() const {
  if (!a_contained || !f_contained || !weak_pass) return false;
  return kind == ContainerKind::Weak || strong_pass;
}

nlohmann::json VerifyReport::to_json() const {
  return {{"kind", kind == ContainerKind::Weak ? "weak" : "strong"},
          {"a_contained", a_contained},
          {"f_contained", f_contained},
          {"s_excess", s_excess},
          {"f_deficit", f_deficit},
          {"t", t},
          {"measured_k", measured_k},
          {"k_allowed", k_allowed},
          {"weak_pass", weak_pass},
          {"strong_checked", strong_checked},
          {"strong_pass", strong_pass},
          {"strong_bound", strong_bound},
          {"strong_gap", strong_gap},
          {"all_pass", all_pass()}};
}

VerifyReport verify_container(const Family& a, const Family& s,
                              const Family& f, ContainerKind kind, double K,
                              std::optional<int> psi) {
  auto layer = a.uniform_layer();
  if (a.empty() || !layer)
    throw ConfigError("verify_container: A must be a nonempty single layer");
  int k = *layer;
  Family g = shadow(a, ShadowDir::Lower);

  VerifyReport report;
  report.kind = kind;
  report.k_allowed = K;
  report.a_contained = a.is_subset_of(s);
  report.f_contained = f.is_subset_of(g);
  report.s_excess = s.subtract(a).size();
  report.f_deficit = g.subtract(f).size();
  report.t = std::int64_t(g.size()) - std::int64_t(a.size());

  double worst = double(std::max(report.s_excess, report.f_deficit));
  report.measured_k = report.t > 0 ? worst / double(report.t)
                                   : (worst > 0 ? std::numeric_limits<double>::infinity() : 0.0);
  report.weak_pass = report.a_contained && report.f_contained &&
                     double(report.s_excess) <= K * double(report.t) &&
                     double(report.f_deficit) <= K * double(report.t);

  if (kind == ContainerKind::Strong) {
    int p = psi.value_or(int(std::ceil(std::pow(std::log(double(k)), 2))));
    if (p < 1 || p >= k)
      throw ConfigError("verify_container: psi must satisfy 1 <= psi < k");
    report.strong_checked = true;
    report.strong_gap = std::int64_t(s.size()) - std::int64_t(f.size());
    report.strong_bound = 2.0 * double(report.t) * p / double(k - p);
    report.strong_pass =
        double(report.strong_gap) * double(k - p) <= 2.0 * double(report.t) * p;
  }
  return report;
}

CostLedger container_cost_report(const ContainerTrace& trace) {
  if (!trace.has_strong)
    throw ConfigError("container_cost_report: incomplete trace (strong stages missing)");
  int k = trace.k;
  std::uint64_t side = binom_u64(2 * k - 1, k);

  CostLedger ledger;
  bool approx = false;
  ledger.add("R", cost_binomial_at_most_bits(side, trace.r_sample.size(), &approx), approx);

  std::uint64_t nr_size =
      trace.r_sample.empty() ? 0 : shadow(trace.r_sample, ShadowDir::Lower).size();
  std::uint64_t slots = nr_size * std::uint64_t(k);
  ledger.add("L|R",
             cost_binomial_at_most_bits(
                 slots, std::min<std::uint64_t>(trace.leak_edges.size(), slots),
                 &approx),
             approx);
  ledger.add("R'|T",
             cost_binomial_at_most_bits(trace.triple_hood.size(),
                                        trace.r_prime_sample.size(), &approx),
             approx);

  // A1 reconstruction route: given (S,F) and a canonical A* for it, A costs
  // |S\A| + |N(A)\F| bits; with A <= S and F <= N(A) that is
  // (|S|-a) + (g-|F|) = t + (|S|-|F|).
  double recon = double(std::int64_t(trace.s_strong.size()) - std::int64_t(trace.a)) +
                 double(std::int64_t(trace.g) - std::int64_t(trace.f_strong.size()));
  ledger.add("A|(S,F)", recon);

  // Root bookkeeping when the forest encoding of A has no anchor in Q'.
  double root_bits = 0;
  if (trace.from_pipeline) {
    std::uint64_t a_in_qp =
        trace.q_surviving.size() + trace.a - trace.s_weak.size();
    if (a_in_qp == 0) root_bits = std::log2(double(side));
  }
  ledger.add("A_root", root_bits);
  return ledger;
}

nlohmann::json ContainerTrace::to_json() const {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [lo, up] : leak_edges)
    edges.push_back({mask_text(lo), mask_text(up)});
  nlohmann::json j{
      {"k", k},
      {"a", a},
      {"g", g},
      {"t", t},
      {"r_sample", r_sample.texts()},
      {"triple_hood", triple_hood.texts()},
      {"leak_edges", edges},
      {"f_weak", f_weak.texts()},
      {"g_heavy", g_heavy.texts()},
      {"q_high", q_high.texts()},
      {"e_exposed", e_exposed.texts()},
      {"r_prime_sample", r_prime_sample.texts()},
      {"q_surviving", q_surviving.texts()},
      {"s_weak", s_weak.texts()},
      {"retries_r", retries_r},
      {"retries_r_prime", retries_r_prime},
      {"has_strong", has_strong},
      {"from_pipeline", from_pipeline},
      {"ledger", ledger.to_json()},
  };
  if (has_strong) {
    j["h_patch"] = h_patch.texts();
    j["f_patched"] = f_patched.texts();
    j["s_tight"] = s_tight.texts();
    j["u_prune"] = u_prune.texts();
    j["s_strong"] = s_strong.texts();
    j["f_strong"] = f_strong.texts();
  }
  return j;
}

namespace {
Family family_from_texts(const nlohmann::json& arr, int n) {
  std::vector<Mask> masks;
  for (const auto& s : arr) masks.push_back(parse_mask(s.get<std::string>(), n));
  return Family(n, std::move(masks));
}
}  // namespace

ContainerTrace ContainerTrace::from_json(const nlohmann::json& j) {
  ContainerTrace trace;
  trace.k = j.at("k").get<int>();
  int n = 2 * trace.k - 1;
  trace.a = j.at("a").get<std::uint64_t>();
  trace.g = j.at("g").get<std::uint64_t>();
  trace.t = j.at("t").get<std::int64_t>();
  trace.r_sample = family_from_texts(j.at("r_sample"), n);
  trace.triple_hood = family_from_texts(j.at("triple_hood"), n);
  trace.f_weak = family_from_texts(j.at("f_weak"), n);
  trace.g_heavy = family_from_texts(j.at("g_heavy"), n);
  trace.q_high = family_from_texts(j.at("q_high"), n);
  trace.e_exposed = family_from_texts(j.at("e_exposed"), n);
  trace.r_prime_sample = family_from_texts(j.at("r_prime_sample"), n);
  trace.q_surviving = family_from_texts(j.at("q_surviving"), n);
  trace.s_weak = family_from_texts(j.at("s_weak"), n);
  for (const auto& e : j.at("leak_edges"))
    trace.leak_edges.emplace_back(parse_mask(e.at(0).get<std::string>(), n),
                                  parse_mask(e.at(1).get<std::string>(), n));
  trace.retries_r = j.at("retries_r").get<int>();
  trace.retries_r_prime = j.at("retries_r_prime").get<int>();
  trace.has_strong = j.at("has_strong").get<bool>();
  trace.from_pipeline = j.value("from_pipeline", true);
  trace.ledger = CostLedger::from_json(j.at("ledger"));
  if (trace.has_strong) {
    trace.h_patch = family_from_texts(j.at("h_patch"), n);
    trace.f_patched = family_from_texts(j.at("f_patched"), n);
    trace.s_tight = family_from_texts(j.at("s_tight"), n);
    trace.u_prune = family_from_texts(j.at("u_prune"), n);
    trace.s_strong = family_from_texts(j.at("s_strong"), n);
    trace.f_strong = family_from_texts(j.at("f_strong"), n);
  }
  return trace;
}

}  // namespace sperner
