#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spernerlab/subset.hpp"

namespace sperner {

// A finite collection of subsets of [n], deduplicated and stored sorted by
// mask.  Sorted storage gives deterministic iteration, canonical
// serialization, and reproducible tie-breaking everywhere downstream.
class Family {
 public:
  explicit Family(int n);
  Family(int n, std::vector<Mask> members);  // validates, sorts, dedups

  int ground() const noexcept { return n_; }
  std::size_t size() const noexcept { return masks_.size(); }
  bool empty() const noexcept { return masks_.empty(); }
  const std::vector<Mask>& masks() const& noexcept { return masks_; }
  std::vector<Mask> masks() && { return std::move(masks_); }  // rvalue-safe
  bool contains(Mask m) const;

  // Count of members per layer; index i = layer i, size n+1.
  const std::vector<std::size_t>& layer_histogram() const noexcept {
    return histogram_;
  }
  // The common layer of all members, or nullopt when empty or mixed.
  std::optional<int> uniform_layer() const;
  std::vector<int> layers_present() const;

  // Set algebra; both operands must share the same ground set.
  Family unite(const Family& other) const;
  Family intersect(const Family& other) const;
  Family subtract(const Family& other) const;
  bool is_subset_of(const Family& other) const;
  Family complement_within(const Family& universe) const;

  void insert(Mask m);  // keeps order

  // Text I/O: one subset per line, canonical text or hex form, '#' comments.
  static Family read(std::istream& in, int n);
  static Family from_file(const std::string& path, int n);
  void write(std::ostream& out, bool hex = false) const;
  std::vector<std::string> texts() const;

  friend bool operator==(const Family&, const Family&) = default;

 private:
  void rebuild_histogram();
  int n_;
  std::vector<Mask> masks_;
  std::vector<std::size_t> histogram_;
};

// Exact binomial coefficient; throws GuardError if the value would not fit
// in 64 bits.
std::uint64_t binom_u64(int n, int k);

// C([n],k), enumerated in increasing mask order.  Guarded by max_size.
Family full_layer(int n, int k, std::uint64_t max_size = (1ull << 28));

// All of P(n).  Guarded: n <= 28 by default.
Family full_powerset(int n, std::uint64_t max_size = (1ull << 28));

}  // namespace sperner
