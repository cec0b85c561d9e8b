#include "qverify/sampling.hpp"

#include <cmath>
#include <numeric>

#include "qverify/errors.hpp"

namespace qverify {

int sample_index(std::mt19937_64& rng, const std::vector<double>& probs) {
  const double u = uniform_double(rng);
  double cum = 0.0;
  int last_positive = -1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) last_positive = static_cast<int>(i);
    cum += probs[i];
    if (u < cum) return static_cast<int>(i);
  }
  // u landed in the float-dust gap past the cumulative sum
  if (last_positive < 0) throw InvalidParameter("all probabilities are zero");
  return last_positive;
}

std::vector<std::int64_t> sample_shots(const std::vector<double>& probs,
                                       std::int64_t shots,
                                       std::uint64_t rng_seed) {
  if (shots <= 0) throw InvalidParameter("shots must be positive");
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidParameter("probabilities sum to " + std::to_string(total));
  }
  std::mt19937_64 rng(rng_seed);
  std::vector<std::int64_t> counts(probs.size(), 0);
  for (std::int64_t i = 0; i < shots; ++i) {
    ++counts[static_cast<std::size_t>(sample_index(rng, probs))];
  }
  return counts;
}

}  // namespace qverify
