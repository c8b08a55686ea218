#include "spernerlab/rng.hpp"

namespace sperner {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kStreamSalt = 0xD2B74407B1CE6E93ull;

// SplitMix64 finalizer: a well-mixed bijection on 64 bits.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t stream_key(std::uint64_t master_seed, std::uint64_t stream_id) {
  return mix64(mix64(master_seed + kGolden) ^ mix64(stream_id ^ kStreamSalt));
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : key_(stream_key(master_seed, stream_id)),
      master_seed_(master_seed),
      stream_id_(stream_id) {}

RngStream::RngStream(std::uint64_t key, std::uint64_t master, std::uint64_t id, int)
    : key_(key), master_seed_(master), stream_id_(id) {}

std::uint64_t RngStream::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double RngStream::next_double() {
  return double(next_u64() >> 11) * 0x1.0p-53;
}

bool RngStream::bernoulli(double p) { return next_double() < p; }

std::uint64_t RngStream::next_below(std::uint64_t bound) {
  if (bound == 0) throw ConfigError("next_below: bound must be >= 1");
  // rejection sampling for an unbiased draw
  std::uint64_t threshold = (~bound + 1) % bound;  // 2^64 mod bound
  for (;;) {
    std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

RngStream RngStream::substream(std::uint64_t index) const {
  return RngStream(mix64(key_ ^ mix64(index + kStreamSalt)), master_seed_,
                   stream_id_, 0);
}

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
  return RngStream(master_seed, stream_id);
}

Family sample_family(const Family& ground, double p, RngStream& rng) {
  if (p < 0 || p > 1) throw ConfigError("sample_family: p outside [0,1]");
  if (ground.size() > kSampleGuard)
    throw GuardError("sample ground has " + std::to_string(ground.size()) +
                     " elements, above the guard " + std::to_string(kSampleGuard));
  std::vector<Mask> out;
  for (Mask m : ground.masks())
    if (rng.bernoulli(p)) out.push_back(m);
  return Family(ground.ground(), std::move(out));
}

Family sample_powerset(int n, double p, RngStream& rng, std::uint64_t guard) {
  check_ground(n);
  if (p < 0 || p > 1) throw ConfigError("sample_powerset: p outside [0,1]");
  std::uint64_t count = n >= 63 ? ~std::uint64_t{0} : (std::uint64_t{1} << n);
  if (count > guard)
    throw GuardError("P(" + std::to_string(n) + ") has 2^" + std::to_string(n) +
                     " elements, above the guard " + std::to_string(guard));
  std::vector<Mask> out;
  for (std::uint64_t m = 0; m < count; ++m)
    if (rng.bernoulli(p)) out.push_back(m);
  return Family(n, std::move(out));
}

Family sample_layer(int n, int k, double p, RngStream& rng, std::uint64_t guard) {
  Family ground = full_layer(n, k, guard);
  return sample_family(ground, p, rng);
}

}  // namespace sperner
