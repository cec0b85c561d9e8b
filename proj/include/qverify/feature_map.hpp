#ifndef QVERIFY_FEATURE_MAP_HPP
#define QVERIFY_FEATURE_MAP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qverify/mdp.hpp"

namespace qverify {

// How environment feature vectors become policy inputs. Part of the policy
// file contract (the `feature_layout` field):
//   "raw"           feature values as given
//   "bits"          each feature expanded to fixed-width binary, MSB first;
//                   width from the schema maximum
//   "onehot"        each feature one-hot over [min, max], concatenated
//   "onehot_mod:N"  single feature one-hot over N slots, index = value mod N
struct FeatureMap {
  enum class Kind { Raw, Bits, OneHot, OneHotMod };

  Kind kind = Kind::Raw;
  int mod = 0;  // OneHotMod only

  static FeatureMap parse(const std::string& layout);
  std::string to_string() const;

  std::vector<std::int64_t> apply(const FeatureState& s,
                                  const std::vector<FeatureRange>& schema) const;
  // length of apply() output for the given schema
  std::size_t output_size(const std::vector<FeatureRange>& schema) const;
};

}  // namespace qverify

#endif
