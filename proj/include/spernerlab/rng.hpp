#pragma once

#include <cstdint>

#include "spernerlab/family.hpp"

namespace sperner {

// Counter-based splittable random stream.  A stream is identified by
// (master_seed, stream_id); identical identifiers give identical byte
// streams on every platform (pure uint64 arithmetic, no libc randomness).
// Distinct stream ids are derived through a SplitMix64-style double hash and
// are independent for statistical purposes, so any number of streams can be
// drawn from concurrently without contention or scheduling dependence.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64();
  double next_double();               // uniform in [0,1), 53 bits
  bool bernoulli(double p);           // next_double() < p
  std::uint64_t next_below(std::uint64_t bound);  // unbiased, bound >= 1

  // A child stream keyed off this stream's identity; used for per-attempt
  // and per-stage substreams inside pipelines.
  RngStream substream(std::uint64_t index) const;

 private:
  RngStream(std::uint64_t key, std::uint64_t master, std::uint64_t id, int);
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
};

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t stream_id);

inline constexpr std::uint64_t kSampleGuard = 1ull << 28;

// Keep each element of `ground` independently with probability p, deciding
// elements in canonical (sorted mask) order: one draw per element, so the
// sample is reproducible regardless of any internal iteration order.
Family sample_family(const Family& ground, double p, RngStream& rng);

// P(n)_p without materializing the ground set.
Family sample_powerset(int n, double p, RngStream& rng,
                       std::uint64_t guard = kSampleGuard);

// C([n],k)_p.
Family sample_layer(int n, int k, double p, RngStream& rng,
                    std::uint64_t guard = kSampleGuard);

}  // namespace sperner
