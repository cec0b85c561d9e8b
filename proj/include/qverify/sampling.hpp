#ifndef QVERIFY_SAMPLING_HPP
#define QVERIFY_SAMPLING_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace qverify {

// Uniform double in [0, 1) built from the top 53 bits of the generator
// output, so sequences are identical across platforms for a fixed seed.
inline double uniform_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Index sampled from a probability vector (linear cumulative scan).
int sample_index(std::mt19937_64& rng, const std::vector<double>& probs);

// Multinomial counts over `probs` for a fixed seed. probs must sum to 1
// within 1e-9; shots must be positive.
std::vector<std::int64_t> sample_shots(const std::vector<double>& probs,
                                       std::int64_t shots,
                                       std::uint64_t rng_seed);

}  // namespace qverify

#endif
