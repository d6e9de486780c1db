#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "daycare/model.hpp"
#include "daycare/types.hpp"

namespace daycare {

inline constexpr std::size_t kNumGrades = 6;

struct GenParams {
  int n_children = 0;
  int n_daycares = 0;  // physical daycares; each offers every grade
  double sibling_family_rate = 0.0;  // share of families with two or more children
  double three_child_share = 0.0;    // share of sibling families with three children
  double twin_rate = 0.0;            // share of families holding a twin pair
  double transfer_rate = 0.0;        // share of children initially enrolled
  std::array<double, kNumGrades> grade_distribution{};
  // New-applicant seats per applicant, by grade.
  std::array<double, kNumGrades> capacity_profile{};
  double pref_len_single = 1.0;
  int pref_max_single = 1;
  double pref_len_family = 1.0;
  int pref_max_family = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

// Multi-grade raw market (daycares carry per-grade quotas).
RawInstance generate_raw(const GenParams& params);
Instance generate(const GenParams& params);

// tama21, tama22, shibuya21, shibuya22, moriguchi21, tiny.
GenParams preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace daycare
