#include "spernerlab/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace sperner {

ShadowDir resolve_dir(int layer, int n, ShadowDir dir) {
  if (dir != ShadowDir::Auto) return dir;
  // Lower when layer >= ceil(n/2); at the exact middle of even n this picks
  // lower, which we document rather than leave ambiguous.
  return 2 * layer >= n ? ShadowDir::Lower : ShadowDir::Upper;
}

namespace {

void append_shadow(std::vector<Mask>& out, Mask v, int n, ShadowDir dir) {
  if (dir == ShadowDir::Lower) {
    Mask rest = v;
    while (rest) {
      Mask bit = rest & (~rest + 1);
      out.push_back(v ^ bit);
      rest ^= bit;
    }
  } else {
    Mask rest = ground_mask(n) & ~v;
    while (rest) {
      Mask bit = rest & (~rest + 1);
      out.push_back(v | bit);
      rest ^= bit;
    }
  }
}

int require_uniform_layer(const Family& a, const char* op) {
  auto k = a.uniform_layer();
  if (!k)
    throw ConfigError(std::string(op) + ": non-uniform family (members span layers)");
  return *k;
}

}  // namespace

Family shadow_of(Mask v, int n, ShadowDir dir) {
  check_mask(v, n);
  dir = resolve_dir(layer_of(v), n, dir);
  std::vector<Mask> out;
  append_shadow(out, v, n, dir);
  return Family(n, std::move(out));
}

Family shadow(const Family& a, ShadowDir dir) {
  if (a.empty()) return Family(a.ground());
  int k = require_uniform_layer(a, "shadow");
  dir = resolve_dir(k, a.ground(), dir);
  std::vector<Mask> out;
  out.reserve(a.size() * std::size_t(dir == ShadowDir::Lower ? k : a.ground() - k));
  for (Mask v : a.masks()) append_shadow(out, v, a.ground(), dir);
  return Family(a.ground(), std::move(out));
}

Family closure(const Family& a, ShadowDir dir) {
  if (a.empty()) return a;
  int k = require_uniform_layer(a, "closure");
  dir = resolve_dir(k, a.ground(), dir);
  Family sh = shadow(a, dir);
  // Candidates live in the opposite shadow of sh; [A] is a subset of it.
  ShadowDir opposite = dir == ShadowDir::Lower ? ShadowDir::Upper : ShadowDir::Lower;
  Family candidates = shadow(sh, opposite);
  std::vector<Mask> out;
  for (Mask v : candidates.masks()) {
    bool inside = true;
    std::vector<Mask> single;
    append_shadow(single, v, a.ground(), dir);
    for (Mask s : single) {
      if (!sh.contains(s)) {
        inside = false;
        break;
      }
    }
    if (inside) out.push_back(v);
  }
  return Family(a.ground(), std::move(out));
}

bool is_closed(const Family& a, ShadowDir dir) { return closure(a, dir) == a; }

std::vector<Family> two_linked_components(const Family& a, ShadowDir dir) {
  if (a.empty()) return {};
  int k = require_uniform_layer(a, "two_linked_components");
  dir = resolve_dir(k, a.ground(), dir);

  std::vector<std::size_t> parent(a.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto unite = [&](std::size_t i, std::size_t j) { parent[find(i)] = find(j); };

  // Members sharing a shadow element get merged; first owner per element.
  std::unordered_map<Mask, std::size_t> owner;
  owner.reserve(a.size() * 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<Mask> sh;
    append_shadow(sh, a.masks()[i], a.ground(), dir);
    for (Mask s : sh) {
      auto [it, inserted] = owner.emplace(s, i);
      if (!inserted) unite(i, it->second);
    }
  }

  std::unordered_map<std::size_t, std::vector<Mask>> groups;
  for (std::size_t i = 0; i < a.size(); ++i)
    groups[find(i)].push_back(a.masks()[i]);

  std::vector<Family> components;
  components.reserve(groups.size());
  for (auto& [root, masks] : groups)
    components.emplace_back(a.ground(), std::move(masks));
  std::sort(components.begin(), components.end(),
            [](const Family& x, const Family& y) {
              return x.masks().front() < y.masks().front();
            });
  return components;
}

int degree(Mask v, int n, const Family& y) {
  check_mask(v, n);
  if (y.empty()) return 0;
  auto ky = y.uniform_layer();
  if (!ky) throw ConfigError("degree: Y is not a single layer");
  int kv = layer_of(v);
  ShadowDir dir;
  if (*ky == kv - 1)
    dir = ShadowDir::Lower;
  else if (*ky == kv + 1)
    dir = ShadowDir::Upper;
  else
    throw ConfigError("degree: v (layer " + std::to_string(kv) +
                      ") and Y (layer " + std::to_string(*ky) +
                      ") are not in adjacent layers");
  std::vector<Mask> sh;
  append_shadow(sh, v, n, dir);
  int d = 0;
  for (Mask s : sh) d += y.contains(s) ? 1 : 0;
  return d;
}

int degree(const Subset& v, const Family& y) {
  if (v.ground() != y.ground())
    throw ConfigError("degree: ground sets differ");
  return degree(v.mask(), v.ground(), y);
}

std::uint64_t edges_between(const Family& upper, const Family& lower) {
  if (upper.empty() || lower.empty()) return 0;
  auto ku = upper.uniform_layer(), kl = lower.uniform_layer();
  if (!ku || !kl || *ku != *kl + 1)
    throw ConfigError("edges_between: expects single layers k and k-1");
  std::uint64_t count = 0;
  for (Mask v : upper.masks())
    count += std::uint64_t(degree(v, upper.ground(), lower));
  return count;
}

MiddleGraph::MiddleGraph(int k_) : k(k_) {
  if (k < 1 || 2 * k - 1 > kMaxGround)
    throw ConfigError("middle graph parameter k must be in [1,32], got " +
                      std::to_string(k));
}

std::uint64_t MiddleGraph::side_size() const { return binom_u64(2 * k - 1, k); }

Family MiddleGraph::upper() const { return full_layer(ground(), k); }
Family MiddleGraph::lower() const { return full_layer(ground(), k - 1); }
Family MiddleGraph::vertices() const { return upper().unite(lower()); }

}  // namespace sperner
