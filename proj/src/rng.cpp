#include "rng.hpp"

#include <cmath>

namespace chlab {

namespace {
constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(uint32_t ctr[4], uint32_t k0, uint32_t k1) {
  uint64_t p0 = static_cast<uint64_t>(kPhiloxM0) * ctr[0];
  uint64_t p1 = static_cast<uint64_t>(kPhiloxM1) * ctr[2];
  uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
  uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
  uint32_t c1 = ctr[1], c3 = ctr[3];
  ctr[0] = hi1 ^ c1 ^ k0;
  ctr[1] = lo1;
  ctr[2] = hi0 ^ c3 ^ k1;
  ctr[3] = lo0;
}
}  // namespace

void Philox4x32::block(uint64_t key, const uint32_t ctr_in[4], uint32_t out[4]) {
  uint32_t k0 = static_cast<uint32_t>(key);
  uint32_t k1 = static_cast<uint32_t>(key >> 32);
  out[0] = ctr_in[0];
  out[1] = ctr_in[1];
  out[2] = ctr_in[2];
  out[3] = ctr_in[3];
  for (int r = 0; r < 10; ++r) {
    round_once(out, k0, k1);
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
}

void CounterRng::raw(uint64_t step, uint32_t slot, uint32_t purpose,
                     uint32_t out[4]) const {
  const uint32_t ctr[4] = {
      static_cast<uint32_t>(step),
      static_cast<uint32_t>(step >> 32),
      slot ^ (purpose << 28),
      static_cast<uint32_t>(path_) ^ static_cast<uint32_t>(path_ >> 32) * 0x85EBCA6Bu,
  };
  Philox4x32::block(seed_, ctr, out);
}

double CounterRng::normal(uint64_t step, uint32_t slot, DrawPurpose purpose) const {
  uint32_t w[4];
  raw(step, slot, static_cast<uint32_t>(purpose), w);
  // Box-Muller from two 53-bit uniforms in (0,1)
  uint64_t a = (static_cast<uint64_t>(w[0]) << 21) | (w[1] >> 11);
  uint64_t b = (static_cast<uint64_t>(w[2]) << 21) | (w[3] >> 11);
  double u1 = static_cast<double>(a | 1ull) * 0x1p-53;
  double u2 = static_cast<double>(b) * 0x1p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double CounterRng::uniform(uint64_t step, uint32_t slot, DrawPurpose purpose) const {
  uint32_t w[4];
  raw(step, slot, static_cast<uint32_t>(purpose), w);
  uint64_t a = (static_cast<uint64_t>(w[0]) << 32) | w[1];
  return (static_cast<double>(a >> 11) + 0.5) * 0x1p-53;
}

}  // namespace chlab
