#pragma once

#include <cstdint>
#include <random>

#include "rsp/errors.hpp"

namespace rsp {

// Seeded random stream with a build-independent output sequence.
//
// The engine is std::mt19937_64, whose output is fixed by the C++ standard.
// Standard distributions are implementation-defined, so bounded integers are
// drawn here by rejection sampling on the raw 64-bit output: a draw x is
// accepted when x < limit, limit being the largest multiple of the range size,
// and the value is x % range.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw InvalidParameter("Rng::below with bound 0");
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x <= limit) return x % bound;
    }
  }

  // Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw InvalidParameter("Rng::between with empty range");
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());
    return lo + static_cast<std::int64_t>(below(span));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rsp
