#include "qverify/feature_map.hpp"

#include "qverify/errors.hpp"

namespace qverify {

namespace {

int bit_width(int max_value) {
  int w = 1;
  while ((1 << w) <= max_value) ++w;
  return w;
}

void check_schema_match(const FeatureState& s,
                        const std::vector<FeatureRange>& schema) {
  if (s.values.size() != schema.size()) {
    throw EncodingError("feature vector length " +
                        std::to_string(s.values.size()) +
                        " does not match schema size " +
                        std::to_string(schema.size()));
  }
}

}  // namespace

FeatureMap FeatureMap::parse(const std::string& layout) {
  FeatureMap map;
  if (layout == "raw") {
    map.kind = Kind::Raw;
  } else if (layout == "bits") {
    map.kind = Kind::Bits;
  } else if (layout == "onehot") {
    map.kind = Kind::OneHot;
  } else if (layout.rfind("onehot_mod:", 0) == 0) {
    map.kind = Kind::OneHotMod;
    try {
      map.mod = std::stoi(layout.substr(11));
    } catch (const std::exception&) {
      throw ConfigError("bad onehot_mod size in layout '" + layout + "'");
    }
    if (map.mod < 1) throw ConfigError("onehot_mod size must be >= 1");
  } else {
    throw ConfigError("unknown feature layout '" + layout + "'");
  }
  return map;
}

std::string FeatureMap::to_string() const {
  switch (kind) {
    case Kind::Raw: return "raw";
    case Kind::Bits: return "bits";
    case Kind::OneHot: return "onehot";
    case Kind::OneHotMod: return "onehot_mod:" + std::to_string(mod);
  }
  return "raw";
}

std::vector<std::int64_t> FeatureMap::apply(
    const FeatureState& s, const std::vector<FeatureRange>& schema) const {
  check_schema_match(s, schema);
  std::vector<std::int64_t> out;
  switch (kind) {
    case Kind::Raw:
      out.assign(s.values.begin(), s.values.end());
      break;
    case Kind::Bits:
      for (std::size_t i = 0; i < schema.size(); ++i) {
        if (schema[i].min < 0) {
          throw EncodingError("bits layout needs non-negative features");
        }
        const int w = bit_width(schema[i].max);
        for (int b = w - 1; b >= 0; --b) {
          out.push_back((s.values[i] >> b) & 1);
        }
      }
      break;
    case Kind::OneHot:
      for (std::size_t i = 0; i < schema.size(); ++i) {
        const int size = schema[i].max - schema[i].min + 1;
        const int index = s.values[i] - schema[i].min;
        if (index < 0 || index >= size) {
          throw EncodingError("feature value outside schema bounds");
        }
        for (int j = 0; j < size; ++j) out.push_back(j == index ? 1 : 0);
      }
      break;
    case Kind::OneHotMod: {
      if (schema.size() != 1) {
        throw EncodingError("onehot_mod layout needs a single feature");
      }
      const int index = ((s.values[0] % mod) + mod) % mod;
      for (int j = 0; j < mod; ++j) out.push_back(j == index ? 1 : 0);
      break;
    }
  }
  return out;
}

std::size_t FeatureMap::output_size(
    const std::vector<FeatureRange>& schema) const {
  switch (kind) {
    case Kind::Raw:
      return schema.size();
    case Kind::Bits: {
      std::size_t total = 0;
      for (const FeatureRange& f : schema) {
        total += static_cast<std::size_t>(bit_width(f.max));
      }
      return total;
    }
    case Kind::OneHot: {
      std::size_t total = 0;
      for (const FeatureRange& f : schema) {
        total += static_cast<std::size_t>(f.max - f.min + 1);
      }
      return total;
    }
    case Kind::OneHotMod:
      return static_cast<std::size_t>(mod);
  }
  return 0;
}

}  // namespace qverify
