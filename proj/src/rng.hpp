#ifndef CHLAB_RNG_HPP
#define CHLAB_RNG_HPP

#include <cstdint>

namespace chlab {

// Philox4x32-10 counter-based generator. Every draw is a pure function of
// (seed, path, step, slot, purpose), so paths are reproducible, replayable
// and independent of scheduling; refinement studies pre-draw at the finest
// resolution and aggregate.
struct Philox4x32 {
  static void block(uint64_t key, const uint32_t ctr_in[4], uint32_t out[4]);
};

enum class DrawPurpose : uint32_t {
  Increment = 0,   // Brownian increments
  Bernoulli = 1,   // uniform draws (bridge crossing tests etc.)
  Scratch = 2,
};

// A stateless per-path stream.
class CounterRng {
 public:
  CounterRng(uint64_t master_seed, uint64_t path_index)
      : seed_(master_seed), path_(path_index) {}

  // standard normal, deterministic in (step, slot, purpose)
  double normal(uint64_t step, uint32_t slot,
                DrawPurpose purpose = DrawPurpose::Increment) const;

  // uniform in (0, 1)
  double uniform(uint64_t step, uint32_t slot,
                 DrawPurpose purpose = DrawPurpose::Bernoulli) const;

  uint64_t master_seed() const { return seed_; }
  uint64_t path_index() const { return path_; }

 private:
  void raw(uint64_t step, uint32_t slot, uint32_t purpose, uint32_t out[4]) const;
  uint64_t seed_;
  uint64_t path_;
};

}  // namespace chlab

#endif
