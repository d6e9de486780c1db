#include "daycare/types.hpp"

#include <algorithm>

namespace daycare {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kPartitionViolation: return "PartitionViolation";
    case ErrorCode::kGradeMismatch: return "GradeMismatch";
    case ErrorCode::kUnacceptableEntry: return "UnacceptableEntry";
    case ErrorCode::kPriorityViolation: return "PriorityViolation";
    case ErrorCode::kMissingGradeQuota: return "MissingGradeQuota";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kUnknownChild: return "UnknownChild";
    case ErrorCode::kUnknownDaycare: return "UnknownDaycare";
    case ErrorCode::kUnknownFamily: return "UnknownFamily";
    case ErrorCode::kDuplicateTuple: return "DuplicateTuple";
    case ErrorCode::kTupleLength: return "TupleLength";
    case ErrorCode::kTupleNotInPreference: return "TupleNotInPreference";
    case ErrorCode::kEmptyReferenceSet: return "EmptyReferenceSet";
    case ErrorCode::kTemplateRequiresIdenticalIndividualPrefs:
      return "TemplateRequiresIdenticalIndividualPrefs";
    case ErrorCode::kUnsupportedFamilyShape: return "UnsupportedFamilyShape";
    case ErrorCode::kMultiplePositionsSet: return "MultiplePositionsSet";
    case ErrorCode::kCapsExceeded: return "CapsExceeded";
    case ErrorCode::kInfeasibleParams: return "InfeasibleParams";
    case ErrorCode::kUnknownPreset: return "UnknownPreset";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Instance::Instance(std::vector<Child> children, std::vector<Family> families,
                   std::vector<Daycare> daycares)
    : children_(std::move(children)), families_(std::move(families)), daycares_(std::move(daycares)) {
  for (ChildIndex c = 0; c < static_cast<ChildIndex>(children_.size()); ++c)
    child_by_id_.emplace(children_[c].id, c);
  for (FamilyIndex f = 0; f < static_cast<FamilyIndex>(families_.size()); ++f)
    family_by_id_.emplace(families_[f].id, f);
  for (DaycareIndex d = 0; d < static_cast<DaycareIndex>(daycares_.size()); ++d)
    daycare_by_id_.emplace(daycares_[d].id, d);
}

std::optional<ChildIndex> Instance::find_child(std::string_view id) const {
  auto it = child_by_id_.find(id);
  if (it == child_by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<FamilyIndex> Instance::find_family(std::string_view id) const {
  auto it = family_by_id_.find(id);
  if (it == family_by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<DaycareIndex> Instance::find_daycare(std::string_view id) const {
  if (id == kUnmatchedId) return kUnmatched;
  auto it = daycare_by_id_.find(id);
  if (it == daycare_by_id_.end()) return std::nullopt;
  return it->second;
}

Tuple Instance::initial_tuple(FamilyIndex f) const {
  Tuple t;
  for (ChildIndex c : families_[f].children) t.push_back(children_[c].initial);
  return t;
}

bool Instance::has_enrollment(FamilyIndex f) const {
  return std::any_of(families_[f].children.begin(), families_[f].children.end(),
                     [&](ChildIndex c) { return children_[c].initial != kUnmatched; });
}

std::size_t Instance::tuple_rank(FamilyIndex f, const Tuple& t) const {
  const auto& pref = families_[f].preference;
  auto it = std::find(pref.begin(), pref.end(), t);
  if (it != pref.end()) return static_cast<std::size_t>(it - pref.begin());
  if (t == initial_tuple(f)) return pref.size();
  return npos;
}

const std::string& Instance::daycare_name(DaycareIndex d) const {
  static const std::string unmatched{kUnmatchedId};
  return d == kUnmatched ? unmatched : daycares_.at(d).id;
}

Tuple Matching::family_tuple(const Instance& inst, FamilyIndex f) const {
  Tuple t;
  for (ChildIndex c : inst.family(f).children) t.push_back(assignment_[c]);
  return t;
}

std::vector<std::vector<ChildIndex>> Matching::members(const Instance& inst) const {
  std::vector<std::vector<ChildIndex>> out(inst.num_daycares());
  for (ChildIndex c = 0; c < static_cast<ChildIndex>(assignment_.size()); ++c)
    if (assignment_[c] != kUnmatched) out[assignment_[c]].push_back(c);
  return out;
}

std::vector<int> Matching::loads(const Instance& inst) const {
  std::vector<int> out(inst.num_daycares(), 0);
  for (DaycareIndex d : assignment_)
    if (d != kUnmatched) ++out[d];
  return out;
}

int Matching::matched_count() const {
  return static_cast<int>(
      std::count_if(assignment_.begin(), assignment_.end(), [](DaycareIndex d) { return d != kUnmatched; }));
}

}  // namespace daycare
