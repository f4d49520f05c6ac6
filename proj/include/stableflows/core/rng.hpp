#pragma once

#include <cstdint>

namespace stableflows {

/// Seeded, splittable random stream (xoshiro256++ core, splitmix64 seeding).
///
/// A stream is identified by (seed, stream_id); identical identifiers
/// reproduce identical draw sequences. Parallel work derives one sub-stream
/// per task index and never shares a generator between workers.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Child stream for task `index`; deterministic in (seed, stream_id, index).
  RngStream substream(std::uint64_t index) const;

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1): never 0, never 1.
  double uniform01();
  /// Uniform on (lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);
  /// Standard normal (Box-Muller; second variate cached).
  double normal();
  /// Exponential with mean 1.
  double exponential();
  /// Fair sign in {-1, +1}.
  double rademacher();

private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t s_[4];
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// splitmix64 step, also used as a general-purpose 64-bit mixer.
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t mix64(std::uint64_t a, std::uint64_t b);

}  // namespace stableflows
