#include "spernerlab/family.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sperner {

Family::Family(int n) : n_(n) {
  check_ground(n);
  histogram_.assign(std::size_t(n) + 1, 0);
}

Family::Family(int n, std::vector<Mask> members) : n_(n), masks_(std::move(members)) {
  check_ground(n);
  for (Mask m : masks_) check_mask(m, n);
  std::sort(masks_.begin(), masks_.end());
  masks_.erase(std::unique(masks_.begin(), masks_.end()), masks_.end());
  rebuild_histogram();
}

void Family::rebuild_histogram() {
  histogram_.assign(std::size_t(n_) + 1, 0);
  for (Mask m : masks_) ++histogram_[std::size_t(layer_of(m))];
}

bool Family::contains(Mask m) const {
  return std::binary_search(masks_.begin(), masks_.end(), m);
}

std::optional<int> Family::uniform_layer() const {
  if (masks_.empty()) return std::nullopt;
  int k = layer_of(masks_.front());
  if (histogram_[std::size_t(k)] != masks_.size()) return std::nullopt;
  return k;
}

std::vector<int> Family::layers_present() const {
  std::vector<int> out;
  for (int i = 0; i <= n_; ++i)
    if (histogram_[std::size_t(i)] > 0) out.push_back(i);
  return out;
}

namespace {
void require_same_ground(const Family& a, const Family& b) {
  if (a.ground() != b.ground())
    throw ConfigError("family ground sets differ: " + std::to_string(a.ground()) +
                      " vs " + std::to_string(b.ground()));
}
}  // namespace

Family Family::unite(const Family& other) const {
  require_same_ground(*this, other);
  std::vector<Mask> out;
  out.reserve(size() + other.size());
  std::set_union(masks_.begin(), masks_.end(), other.masks_.begin(),
                 other.masks_.end(), std::back_inserter(out));
  return Family(n_, std::move(out));
}

Family Family::intersect(const Family& other) const {
  require_same_ground(*this, other);
  std::vector<Mask> out;
  std::set_intersection(masks_.begin(), masks_.end(), other.masks_.begin(),
                        other.masks_.end(), std::back_inserter(out));
  return Family(n_, std::move(out));
}

Family Family::subtract(const Family& other) const {
  require_same_ground(*this, other);
  std::vector<Mask> out;
  std::set_difference(masks_.begin(), masks_.end(), other.masks_.begin(),
                      other.masks_.end(), std::back_inserter(out));
  return Family(n_, std::move(out));
}

bool Family::is_subset_of(const Family& other) const {
  require_same_ground(*this, other);
  return std::includes(other.masks_.begin(), other.masks_.end(),
                       masks_.begin(), masks_.end());
}

Family Family::complement_within(const Family& universe) const {
  return universe.subtract(*this);
}

void Family::insert(Mask m) {
  check_mask(m, n_);
  auto it = std::lower_bound(masks_.begin(), masks_.end(), m);
  if (it != masks_.end() && *it == m) return;
  masks_.insert(it, m);
  ++histogram_[std::size_t(layer_of(m))];
}

Family Family::read(std::istream& in, int n) {
  std::vector<Mask> members;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t\r");
    members.push_back(parse_mask(std::string_view(line).substr(b, e - b + 1), n));
  }
  return Family(n, std::move(members));
}

Family Family::from_file(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open family file: " + path);
  return read(in, n);
}

void Family::write(std::ostream& out, bool hex) const {
  for (Mask m : masks_) out << (hex ? mask_hex(m) : mask_text(m)) << '\n';
}

std::vector<std::string> Family::texts() const {
  std::vector<std::string> out;
  out.reserve(masks_.size());
  for (Mask m : masks_) out.push_back(mask_text(m));
  return out;
}

std::uint64_t binom_u64(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (int i = 1; i <= k; ++i) {
    // exact at every step: result*(n-k+i) is divisible by i
    result = result * unsigned(n - k + i) / unsigned(i);
    if (result > ~std::uint64_t{0})
      throw GuardError("binomial(" + std::to_string(n) + "," + std::to_string(k) +
                       ") exceeds 64 bits");
  }
  return std::uint64_t(result);
}

Family full_layer(int n, int k, std::uint64_t max_size) {
  check_ground(n);
  if (k < 0 || k > n)
    throw ConfigError("layer " + std::to_string(k) + " outside [0," + std::to_string(n) + "]");
  std::uint64_t count = binom_u64(n, k);
  if (count > max_size)
    throw GuardError("layer C(" + std::to_string(n) + "," + std::to_string(k) + ") has " +
                     std::to_string(count) + " sets, above the guard " +
                     std::to_string(max_size));
  std::vector<Mask> members;
  members.reserve(count);
  if (k == 0) {
    members.push_back(0);
  } else {
    Mask v = ground_mask(k);  // smallest k-subset; Gosper's hack walks them in order
    Mask limit = Mask{1} << n;
    while (v < limit) {
      members.push_back(v);
      Mask c = v & (~v + 1);
      Mask r = v + c;
      v = (((r ^ v) >> 2) / c) | r;
      if (c == 0) break;
    }
  }
  return Family(n, std::move(members));
}

Family full_powerset(int n, std::uint64_t max_size) {
  check_ground(n);
  std::uint64_t count = Mask{1} << n;
  if (n > 62 || count > max_size)
    throw GuardError("P(" + std::to_string(n) + ") has 2^" + std::to_string(n) +
                     " sets, above the guard " + std::to_string(max_size));
  std::vector<Mask> members(count);
  for (std::uint64_t m = 0; m < count; ++m) members[m] = m;
  return Family(n, std::move(members));
}

}  // namespace sperner
