#pragma once

#include <cstdint>
#include <stdexcept>

namespace shiftbound {

// ---------- seeded pseudo-random generator ----------

// SplitMix64: state steps by the golden-ratio increment, output is the
// finalized stepped state. Chosen because the whole algorithm fits in six
// lines, so determinism is reproducible across implementations.
class SplitMix64 final {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // top 53 bits mapped to [0, 1)
  double next_double() { return double(next() >> 11) * 0x1.0p-53; }

  double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // modulo reduction; bias is irrelevant here, determinism is not
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("next_below: n must be positive");
    return next() % n;
  }

  // derive an independent stream for a tagged sub-task
  SplitMix64 fork(std::uint64_t tag) { return SplitMix64(next() ^ (0xD1B54A32D192ED03ULL * (tag + 1))); }

 private:
  std::uint64_t state_;
};

// ---------- low-discrepancy sequence ----------

// radical inverse of `index` in base `base` (Halton coordinate)
inline double halton(std::uint64_t index, std::uint32_t base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= double(base);
    r += f * double(index % base);
    index /= base;
  }
  return r;
}

// first few primes, one base per coordinate axis
inline std::uint32_t halton_base(int axis) {
  static const std::uint32_t primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  if (axis < 0 || axis >= int(sizeof(primes) / sizeof(primes[0])))
    throw std::invalid_argument("halton_base: axis out of range");
  return primes[axis];
}

}  // namespace shiftbound
