#include "pathlaw/rng.hpp"

#include <cmath>

namespace pathlaw {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mul_hilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(p);
  hi = static_cast<std::uint32_t>(p >> 32);
}

inline void round_once(std::array<std::uint32_t, 4>& c, std::uint32_t k0, std::uint32_t k1) {
  std::uint32_t lo0, hi0, lo1, hi1;
  mul_hilo(kPhiloxM0, c[0], lo0, hi0);
  mul_hilo(kPhiloxM1, c[2], lo1, hi1);
  c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

inline double to_unit(std::uint32_t a, std::uint32_t b) {
  const std::uint64_t x = (static_cast<std::uint64_t>(a) << 32) | b;
  // 53-bit mantissa, strictly inside (0, 1)
  return static_cast<double>(x >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::uint64_t key, std::uint64_t ordinal,
                                        std::uint64_t block) {
  std::array<std::uint32_t, 4> c = {
      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
      static_cast<std::uint32_t>(ordinal), static_cast<std::uint32_t>(ordinal >> 32)};
  std::uint32_t k0 = static_cast<std::uint32_t>(key);
  std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
  for (int r = 0; r < 10; ++r) {
    round_once(c, k0, k1);
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return c;
}

double NormalStream::next() {
  if (have_cached_) {
    have_cached_ = false;
    return cached_;
  }
  const auto words = philox4x32(seed_, ordinal_, block_++);
  const double u1 = to_unit(words[0], words[1]);
  const double u2 = to_unit(words[2], words[3]);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  cached_ = r * std::sin(angle);
  have_cached_ = true;
  return r * std::cos(angle);
}

}  // namespace pathlaw
