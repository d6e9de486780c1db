#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace daycare {

// Dense indices into the validated instance's tables. External identifiers
// stay strings; everything inside the engine works on these.
using ChildIndex = std::int32_t;
using FamilyIndex = std::int32_t;
using DaycareIndex = std::int32_t;
using Grade = std::int32_t;

// The dummy daycare d0 (being unmatched). Unlimited capacity.
inline constexpr DaycareIndex kUnmatched = -1;
inline constexpr std::string_view kUnmatchedId = "UNMATCHED";
inline constexpr Grade kMaxGrade = 5;

// One family tuple: entry i is the daycare demanded for the family's i-th child.
using Tuple = std::vector<DaycareIndex>;

enum class ErrorCode {
  kParse,
  kPartitionViolation,
  kGradeMismatch,
  kUnacceptableEntry,
  kPriorityViolation,
  kMissingGradeQuota,
  kDuplicateId,
  kUnknownChild,
  kUnknownDaycare,
  kUnknownFamily,
  kDuplicateTuple,
  kTupleLength,
  kTupleNotInPreference,
  kEmptyReferenceSet,
  kTemplateRequiresIdenticalIndividualPrefs,
  kUnsupportedFamilyShape,
  kMultiplePositionsSet,
  kCapsExceeded,
  kInfeasibleParams,
  kUnknownPreset,
  kInvalidConfig,
};

std::string_view to_string(ErrorCode code);

class MatchError : public std::runtime_error {
 public:
  MatchError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct Child {
  std::string id;
  FamilyIndex family = -1;
  Grade grade = 0;
  DaycareIndex initial = kUnmatched;  // omega(c)
};

struct Family {
  std::string id;
  std::vector<ChildIndex> children;
  // Strict ranking, best first. For families holding an initial enrollment
  // the last tuple is always omega(f).
  std::vector<Tuple> preference;
};

struct Daycare {
  std::string id;
  Grade grade = 0;
  int new_applicant_quota = 0;
  int effective_quota = 0;
  // rank[c] == 0 is the top priority. Total order over all children.
  std::vector<std::int32_t> rank;
};

// Validated, grade-split market. Immutable after construction.
class Instance {
 public:
  Instance() = default;
  Instance(std::vector<Child> children, std::vector<Family> families,
           std::vector<Daycare> daycares);

  const std::vector<Child>& children() const { return children_; }
  const std::vector<Family>& families() const { return families_; }
  const std::vector<Daycare>& daycares() const { return daycares_; }
  const Child& child(ChildIndex c) const { return children_.at(c); }
  const Family& family(FamilyIndex f) const { return families_.at(f); }
  const Daycare& daycare(DaycareIndex d) const { return daycares_.at(d); }

  std::size_t num_children() const { return children_.size(); }
  std::size_t num_families() const { return families_.size(); }
  std::size_t num_daycares() const { return daycares_.size(); }

  std::optional<ChildIndex> find_child(std::string_view id) const;
  std::optional<FamilyIndex> find_family(std::string_view id) const;
  std::optional<DaycareIndex> find_daycare(std::string_view id) const;

  // c1 has strictly higher priority than c2 at d.
  bool outranks(DaycareIndex d, ChildIndex c1, ChildIndex c2) const {
    const auto& r = daycares_[d].rank;
    return r[c1] < r[c2];
  }
  int quota(DaycareIndex d) const { return daycares_[d].effective_quota; }

  // omega(f) in family child order.
  Tuple initial_tuple(FamilyIndex f) const;
  bool has_enrollment(FamilyIndex f) const;

  // Rank of a tuple in the family's extended ordering: listed tuples first,
  // then omega(f) when it is not listed. Returns npos for anything else.
  std::size_t tuple_rank(FamilyIndex f, const Tuple& t) const;
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  const std::string& daycare_name(DaycareIndex d) const;

 private:
  std::vector<Child> children_;
  std::vector<Family> families_;
  std::vector<Daycare> daycares_;
  std::map<std::string, ChildIndex, std::less<>> child_by_id_;
  std::map<std::string, FamilyIndex, std::less<>> family_by_id_;
  std::map<std::string, DaycareIndex, std::less<>> daycare_by_id_;
};

// Total map child -> daycare (or kUnmatched).
class Matching {
 public:
  Matching() = default;
  explicit Matching(std::size_t num_children) : assignment_(num_children, kUnmatched) {}
  explicit Matching(std::vector<DaycareIndex> assignment) : assignment_(std::move(assignment)) {}

  DaycareIndex operator[](ChildIndex c) const { return assignment_[c]; }
  void assign(ChildIndex c, DaycareIndex d) { assignment_[c] = d; }
  std::size_t size() const { return assignment_.size(); }
  const std::vector<DaycareIndex>& assignment() const { return assignment_; }

  Tuple family_tuple(const Instance& inst, FamilyIndex f) const;
  // mu(d) for every daycare, children in ascending index order.
  std::vector<std::vector<ChildIndex>> members(const Instance& inst) const;
  std::vector<int> loads(const Instance& inst) const;
  int matched_count() const;

  friend bool operator==(const Matching&, const Matching&) = default;

 private:
  std::vector<DaycareIndex> assignment_;
};

}  // namespace daycare
