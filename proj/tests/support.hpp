#pragma once

#include <filesystem>
#include <string>

#include "daycare/generator.hpp"
#include "daycare/io.hpp"
#include "daycare/model.hpp"

namespace daycare::testing {

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(DAYCARE_FIXTURES) / name; }

inline Instance load(const std::string& name) { return read_instance(fixture(name)); }

inline Instance parse(const std::string& json) { return validate_instance(raw_instance_from_json(Json::parse(json))); }

inline Matching matching(const Instance& inst, const std::string& json) {
  return matching_from_json(inst, Json::parse(json));
}

// Random oracle-sized market: 4..10 children, two physical daycares with two
// grades each, family preferences of length <= 6.
inline Instance tiny_instance(std::uint64_t seed) {
  GenParams p = preset("tiny");
  p.seed = seed;
  p.n_children = 4 + static_cast<int>(seed % 7);
  p.capacity_profile[0] = 0.4 + 0.1 * static_cast<double>(seed % 5);
  p.capacity_profile[1] = 0.4 + 0.1 * static_cast<double>((seed / 5) % 5);
  return generate(p);
}

}  // namespace daycare::testing
