#pragma once

#include <optional>
#include <string>
#include <vector>

#include "daycare/model.hpp"
#include "daycare/types.hpp"

namespace daycare {

enum class BlockingKind { kOnlyChild, kTwins, kDistinct, kMixed, kGeneral };
std::string_view to_string(BlockingKind kind);

// Shape of a tuple's demand table, mapped onto the four restricted blocking
// kinds: I only child, II one twin entry, III singleton entries only,
// IV twin entry plus a singleton entry.
BlockingKind classify_tuple(const Instance& inst, FamilyIndex f, const Tuple& tuple);

struct WitnessEntry {
  DaycareIndex daycare = kUnmatched;
  int lambda = 0;
  int capacity = 0;
  int demanders = 0;
  friend bool operator==(const WitnessEntry&, const WitnessEntry&) = default;
};

struct BlockingWitness {
  FamilyIndex family = -1;
  std::size_t tuple_position = 0;
  BlockingKind kind = BlockingKind::kGeneral;
  std::vector<WitnessEntry> entries;
  friend bool operator==(const BlockingWitness&, const BlockingWitness&) = default;
};

struct FeasibilityResult {
  bool feasible = true;
  std::vector<std::string> violations;
};

struct RationalityResult {
  bool rational = true;
  std::vector<FamilyIndex> violators;
};

struct ImprovingMove {
  FamilyIndex family = -1;
  std::size_t tuple_position = 0;
  friend bool operator==(const ImprovingMove&, const ImprovingMove&) = default;
};

struct NonWastefulnessResult {
  bool non_wasteful = true;
  std::vector<ImprovingMove> moves;
};

struct StabilityResult {
  bool stable = true;
  std::vector<BlockingWitness> witnesses;
};

struct BlockingSearch {
  // Only families with at most this many children are examined.
  std::optional<std::size_t> max_family_size;
  // Stop after the first witness of each family.
  bool first_per_family = false;
};

FeasibilityResult check_feasible(const Instance& inst, const Matching& mu);
RationalityResult check_family_rational(const Instance& inst, const Matching& mu);
// Only the deviating family moves, so testing residual capacity for every
// strictly preferred tuple is exact.
NonWastefulnessResult check_family_nonwasteful(const Instance& inst, const Matching& mu,
                                                bool first_per_family = false);
std::vector<BlockingWitness> find_blocking_coalitions(const Instance& inst, const Matching& mu,
                                                     const BlockingSearch& search = {});
StabilityResult check_stable(const Instance& inst, const Matching& mu, bool all_witnesses = true);

// Re-derives a witness from scratch; true iff the family prefers the tuple
// and every demand entry satisfies the lambda bound.
bool replay_witness(const Instance& inst, const Matching& mu, const BlockingWitness& w);

// The four restricted blocking definitions, each written out on its own.
// They answer whether (f, tuple at `position`) blocks mu; a tuple whose
// shape does not fit the definition never blocks under it.
bool blocks_only_child(const Instance& inst, const Matching& mu, FamilyIndex f, std::size_t position);
bool blocks_twins(const Instance& inst, const Matching& mu, FamilyIndex f, std::size_t position);
bool blocks_distinct(const Instance& inst, const Matching& mu, FamilyIndex f, std::size_t position);
bool blocks_mixed(const Instance& inst, const Matching& mu, FamilyIndex f, std::size_t position);

struct PropertyReport {
  FeasibilityResult feasibility;
  RationalityResult rationality;
  NonWastefulnessResult non_wastefulness;
  StabilityResult stability;
  int matched_count = 0;
  // (family, tuple-position) witnesses, all enumerated.
  int blocking_count = 0;

  bool all_hold() const {
    return feasibility.feasible && rationality.rational && non_wastefulness.non_wasteful && stability.stable;
  }
};

PropertyReport build_report(const Instance& inst, const Matching& mu);

struct OutcomeComparison {
  PropertyReport a;
  PropertyReport b;
};
OutcomeComparison compare_outcomes(const Instance& inst, const Matching& a, const Matching& b);

}  // namespace daycare
