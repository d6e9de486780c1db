#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "daycare/types.hpp"

namespace daycare {

// Unvalidated market as read from an instance file. Daycares either carry a
// single grade with a quota, or per-grade quotas that split_grades() expands.
struct RawChild {
  std::string id;
  std::string family;
  Grade grade = 0;
  std::string initial_daycare{kUnmatchedId};
};

struct RawFamily {
  std::string id;
  std::vector<std::string> children;
  std::vector<std::vector<std::string>> preference;
};

struct RawDaycare {
  std::string id;
  std::optional<Grade> grade;
  int new_applicant_quota = 0;
  std::map<Grade, int> grade_quotas;  // non-empty => multi-grade
  std::map<std::string, double> priority_scores;
};

struct RawInstance {
  std::vector<RawChild> children;
  std::vector<RawFamily> families;
  std::vector<RawDaycare> daycares;
};

// Name of the pseudo-daycare standing for grade `g` at daycare `id`.
std::string pseudo_daycare_id(const std::string& id, Grade g);

// One pseudo-daycare per (daycare, grade); references are rewritten by the
// referencing child's grade. Single-grade daycares pass through unchanged.
RawInstance split_grades(const RawInstance& raw);

// Splits grades, checks every structural invariant and builds priority ranks
// and effective quotas. Families holding an initial enrollment get omega(f)
// appended as their last tuple when they did not list it.
Instance validate_instance(const RawInstance& raw);

// Column i holds child i's entry of every tuple, in preference order.
using ProjectedPreference = std::vector<std::vector<DaycareIndex>>;
ProjectedPreference project_preferences(const Family& family);

struct DemandEntry {
  DaycareIndex daycare = kUnmatched;
  std::vector<ChildIndex> demanders;
  friend bool operator==(const DemandEntry&, const DemandEntry&) = default;
};
using DemandTable = std::vector<DemandEntry>;

// Groups the family's children by demanded daycare, in order of first
// appearance; sentinel entries are dropped. Throws kTupleNotInPreference.
DemandTable demand_table(const Instance& inst, FamilyIndex f, const Tuple& tuple);
// Same grouping without the membership check.
DemandTable group_by_daycare(const Family& family, const Tuple& tuple);

// Number of children matched to d, outside `excluded`, that outrank at least
// one child of `reference` at d. Throws kEmptyReferenceSet.
int lambda_count(const Instance& inst, const Matching& mu, DaycareIndex d,
                 std::span<const ChildIndex> excluded, std::span<const ChildIndex> reference);
// Variant over a precomputed mu(d).
int lambda_count(const Instance& inst, std::span<const ChildIndex> matched_at_d, DaycareIndex d,
                 std::span<const ChildIndex> excluded, std::span<const ChildIndex> reference);

enum class PreferenceTemplate {
  kSameDaycareOnly,
  // Same-daycare tuples first, then tuples where one child is placed and the
  // rest get the sentinel, children taken in precedence order.
  kSameThenPrecedence,
};

// Builds a family ranking from individual lists of daycare ids. `precedence`
// lists child positions, highest precedence first; empty means family order.
std::vector<std::vector<std::string>> expand_template(
    const std::vector<std::vector<std::string>>& individual, PreferenceTemplate tmpl,
    std::vector<std::size_t> precedence = {});

// Families with at most three children and at most one twin pair.
bool in_restricted_setting(const Instance& inst, FamilyIndex f);

// Children of f sharing a grade, if any (the twin pair).
std::optional<std::pair<ChildIndex, ChildIndex>> twin_pair(const Instance& inst, FamilyIndex f);

}  // namespace daycare
