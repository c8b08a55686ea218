#include "spernerlab/subset.hpp"

#include <cctype>
#include <charconv>

namespace sperner {

void check_ground(int n) {
  if (n < 1 || n > kMaxGround)
    throw ConfigError("ground set size must be in [1," +
                      std::to_string(kMaxGround) + "], got " +
                      std::to_string(n));
}

void check_mask(Mask mask, int n) {
  check_ground(n);
  if (mask & ~ground_mask(n))
    throw ConfigError("mask 0x" + mask_hex(mask) + " has elements above n=" +
                      std::to_string(n));
}

Subset::Subset(Mask mask, int n) : mask_(mask), n_(n) { check_mask(mask, n); }

bool Subset::contains(int element) const {
  return element >= 1 && element <= n_ && (mask_ >> (element - 1)) & 1;
}

bool Subset::subset_of(const Subset& other) const {
  return (mask_ & other.mask_) == mask_;
}

std::string Subset::text() const { return mask_text(mask_); }
std::string Subset::hex() const { return mask_hex(mask_); }

Subset Subset::parse(std::string_view token, int n) {
  return Subset(parse_mask(token, n), n);
}

std::string mask_text(Mask m) {
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < 64; ++i) {
    if ((m >> i) & 1) {
      if (!first) out += ',';
      out += std::to_string(i + 1);
      first = false;
    }
  }
  out += '}';
  return out;
}

std::string mask_hex(Mask m) {
  if (m == 0) return "0";
  char buf[17];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), m, 16);
  return std::string(buf, ptr);
}

namespace {

Mask parse_text_form(std::string_view body, int n) {
  Mask m = 0;
  std::size_t i = 0;
  while (i < body.size()) {
    while (i < body.size() && (body[i] == ',' || std::isspace((unsigned char)body[i]))) ++i;
    if (i == body.size()) break;
    int value = 0;
    auto [ptr, ec] = std::from_chars(body.data() + i, body.data() + body.size(), value);
    if (ec != std::errc() || ptr == body.data() + i)
      throw ConfigError("bad element in subset literal: '" + std::string(body) + "'");
    if (value < 1 || value > n)
      throw ConfigError("element " + std::to_string(value) + " outside ground set [1," +
                        std::to_string(n) + "]");
    m |= Mask{1} << (value - 1);
    i = std::size_t(ptr - body.data());
  }
  return m;
}

}  // namespace

Mask parse_mask(std::string_view token, int n) {
  check_ground(n);
  // trim
  while (!token.empty() && std::isspace((unsigned char)token.front())) token.remove_prefix(1);
  while (!token.empty() && std::isspace((unsigned char)token.back())) token.remove_suffix(1);
  if (token.empty()) throw ConfigError("empty subset token");

  Mask m = 0;
  if (token.front() == '{') {
    if (token.back() != '}')
      throw ConfigError("unterminated subset literal: '" + std::string(token) + "'");
    m = parse_text_form(token.substr(1, token.size() - 2), n);
  } else {
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), m, 16);
    if (ec != std::errc() || ptr != token.data() + token.size())
      throw ConfigError("bad hex mask: '" + std::string(token) + "'");
    check_mask(m, n);
  }
  return m;
}

}  // namespace sperner
