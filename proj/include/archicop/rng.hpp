#pragma once

// Counter-based random stream. A stream is identified by (master seed,
// replication, purpose); its n-th output is a pure function of that key and n,
// so streams need no coordination between threads.

#include <cstdint>
#include <limits>

namespace archicop {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

enum class StreamPurpose : std::uint64_t {
  data = 1,
  smle = 2,
  pilot = 3,
  cli = 4,
  test = 5,
};

class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t master_seed, std::uint64_t replication = 0,
                     StreamPurpose purpose = StreamPurpose::data);

  /// Independent child stream, e.g. one per estimator call.
  RngStream substream(std::uint64_t tag) const;

  std::uint64_t next_u64();
  /// Uniform on the open interval (0,1).
  double uniform();
  /// Unit exponential by inversion.
  double exponential();
  /// Standard normal (polar method).
  double normal();

  std::uint64_t counter() const { return counter_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

 private:
  RngStream(std::uint64_t key, int) : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace archicop
