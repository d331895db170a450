#pragma once

#include <array>
#include <cstdint>

namespace pathlaw {

/// Counter-based generator (Philox 4x32-10). A path's stream is addressed by
/// (master seed, ordinal); the k-th 128-bit block of that stream depends on
/// nothing else, so shard layout and evaluation order cannot change a path.
struct RngSpec {
  std::uint64_t master_seed = 42;
};

std::array<std::uint32_t, 4> philox4x32(std::uint64_t key, std::uint64_t ordinal,
                                        std::uint64_t block);

/// Standard-normal stream for one (seed, ordinal) pair. Each 128-bit block
/// yields a Box-Muller pair; next() hands them out in order.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t ordinal)
      : seed_(seed), ordinal_(ordinal) {}

  double next();

 private:
  std::uint64_t seed_, ordinal_;
  std::uint64_t block_ = 0;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace pathlaw
