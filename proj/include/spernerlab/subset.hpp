#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

#include "spernerlab/errors.hpp"

namespace sperner {

// An element of P(n) is an n-bit mask over the ground set {1,...,n};
// bit i-1 set  <=>  element i present.  n is capped at 63 so a subset always
// fits one machine word.
using Mask = std::uint64_t;

inline constexpr int kMaxGround = 63;

inline int layer_of(Mask m) noexcept { return std::popcount(m); }

inline Mask ground_mask(int n) noexcept {
  return n >= 64 ? ~Mask{0} : ((Mask{1} << n) - 1);
}

void check_ground(int n);                 // throws ConfigError unless 1 <= n <= 63
void check_mask(Mask mask, int n);        // throws ConfigError if bits above n are set

class Subset {
 public:
  Subset(Mask mask, int n);

  Mask mask() const noexcept { return mask_; }
  int ground() const noexcept { return n_; }
  int layer() const noexcept { return layer_of(mask_); }
  bool contains(int element) const;       // elements are 1-based
  bool subset_of(const Subset& other) const;

  // Canonical text form "{1,3,7}" (sorted element list, "{}" when empty).
  std::string text() const;
  // Canonical binary form: lowercase hex of the mask, no prefix.
  std::string hex() const;

  // Accepts either canonical form.
  static Subset parse(std::string_view token, int n);

  friend bool operator==(const Subset&, const Subset&) = default;

 private:
  Mask mask_;
  int n_;
};

std::string mask_text(Mask m);
std::string mask_hex(Mask m);
Mask parse_mask(std::string_view token, int n);

}  // namespace sperner
