#include "archicop/rng.hpp"

#include <cmath>

namespace archicop {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t replication, StreamPurpose purpose) {
  std::uint64_t k = mix64(master_seed + kGolden);
  k = mix64(k ^ mix64(replication + 0x632BE59BD9B4E019ULL));
  k = mix64(k ^ mix64(static_cast<std::uint64_t>(purpose) + 0x8CB92BA72F3D8DD7ULL));
  key_ = k;
}

RngStream RngStream::substream(std::uint64_t tag) const {
  return RngStream(mix64(key_ ^ mix64(tag + 0xD1B54A32D192ED03ULL)), 0);
}

std::uint64_t RngStream::next_u64() { return mix64(key_ + (++counter_) * kGolden); }

double RngStream::uniform() {
  // 53 random bits, offset by half a step so that 0 and 1 are excluded
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::exponential() { return -std::log(uniform()); }

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double x, y, s;
  do {
    x = 2.0 * uniform() - 1.0;
    y = 2.0 * uniform() - 1.0;
    s = x * x + y * y;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = y * f;
  has_spare_ = true;
  return x * f;
}

}  // namespace archicop
