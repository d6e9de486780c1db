#include "daycare/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace daycare {

std::string pseudo_daycare_id(const std::string& id, Grade g) {
  return id + "#g" + std::to_string(g);
}

RawInstance split_grades(const RawInstance& raw) {
  // id -> per-grade quotas, only for daycares that still need splitting
  std::map<std::string, const RawDaycare*, std::less<>> multi;
  for (const auto& d : raw.daycares)
    if (!d.grade_quotas.empty()) multi.emplace(d.id, &d);
  if (multi.empty()) return raw;

  std::map<std::string, Grade, std::less<>> grade_of;
  for (const auto& c : raw.children) grade_of.emplace(c.id, c.grade);

  auto rewrite = [&](const std::string& daycare, Grade g) -> std::string {
    auto it = multi.find(daycare);
    if (it == multi.end()) return daycare;
    if (!it->second->grade_quotas.contains(g))
      throw MatchError(ErrorCode::kMissingGradeQuota,
                       "daycare '" + daycare + "' has no quota for grade " + std::to_string(g));
    return pseudo_daycare_id(daycare, g);
  };

  RawInstance out;
  out.children = raw.children;
  for (auto& c : out.children)
    if (c.initial_daycare != kUnmatchedId) c.initial_daycare = rewrite(c.initial_daycare, c.grade);

  out.families = raw.families;
  for (auto& f : out.families) {
    for (auto& tuple : f.preference) {
      for (std::size_t i = 0; i < tuple.size() && i < f.children.size(); ++i) {
        if (tuple[i] == kUnmatchedId) continue;
        auto g = grade_of.find(f.children[i]);
        if (g == grade_of.end())
          throw MatchError(ErrorCode::kUnknownChild, "family '" + f.id + "' lists unknown child '" +
                                                         f.children[i] + "'");
        tuple[i] = rewrite(tuple[i], g->second);
      }
    }
  }

  for (const auto& d : raw.daycares) {
    if (d.grade_quotas.empty()) {
      out.daycares.push_back(d);
      continue;
    }
    for (const auto& [g, q] : d.grade_quotas) {
      RawDaycare p;
      p.id = pseudo_daycare_id(d.id, g);
      p.grade = g;
      p.new_applicant_quota = q;
      for (const auto& [child, score] : d.priority_scores) {
        auto it = grade_of.find(child);
        if (it != grade_of.end() && it->second == g) p.priority_scores.emplace(child, score);
      }
      out.daycares.push_back(std::move(p));
    }
  }
  return out;
}

namespace {

template <class Map>
void insert_unique(Map& m, const std::string& id, int index, const char* what) {
  if (!m.emplace(id, index).second)
    throw MatchError(ErrorCode::kDuplicateId, std::string("duplicate ") + what + " id '" + id + "'");
}

}  // namespace

Instance validate_instance(const RawInstance& input) {
  const RawInstance raw = split_grades(input);

  std::map<std::string, DaycareIndex, std::less<>> daycare_ix;
  std::vector<Daycare> daycares(raw.daycares.size());
  for (std::size_t d = 0; d < raw.daycares.size(); ++d) {
    const auto& rd = raw.daycares[d];
    if (rd.id == kUnmatchedId)
      throw MatchError(ErrorCode::kDuplicateId, "'UNMATCHED' is reserved for the sentinel");
    insert_unique(daycare_ix, rd.id, static_cast<int>(d), "daycare");
    if (!rd.grade)
      throw MatchError(ErrorCode::kMissingGradeQuota, "daycare '" + rd.id + "' has no grade");
    if (*rd.grade < 0 || *rd.grade > kMaxGrade)
      throw MatchError(ErrorCode::kGradeMismatch, "daycare '" + rd.id + "' grade out of range");
    if (rd.new_applicant_quota < 0)
      throw MatchError(ErrorCode::kParse, "daycare '" + rd.id + "' has a negative quota");
    daycares[d].id = rd.id;
    daycares[d].grade = *rd.grade;
    daycares[d].new_applicant_quota = rd.new_applicant_quota;
  }
  auto lookup_daycare = [&](const std::string& id) -> DaycareIndex {
    if (id == kUnmatchedId) return kUnmatched;
    auto it = daycare_ix.find(id);
    if (it == daycare_ix.end()) throw MatchError(ErrorCode::kUnknownDaycare, "unknown daycare '" + id + "'");
    return it->second;
  };

  std::map<std::string, ChildIndex, std::less<>> child_ix;
  std::vector<Child> children(raw.children.size());
  for (std::size_t c = 0; c < raw.children.size(); ++c) {
    const auto& rc = raw.children[c];
    insert_unique(child_ix, rc.id, static_cast<int>(c), "child");
    if (rc.grade < 0 || rc.grade > kMaxGrade)
      throw MatchError(ErrorCode::kGradeMismatch, "child '" + rc.id + "' grade out of range");
    children[c].id = rc.id;
    children[c].grade = rc.grade;
    children[c].initial = lookup_daycare(rc.initial_daycare);
    if (children[c].initial != kUnmatched && daycares[children[c].initial].grade != rc.grade)
      throw MatchError(ErrorCode::kGradeMismatch,
                       "child '" + rc.id + "' is enrolled at a daycare of another grade");
  }

  std::map<std::string, FamilyIndex, std::less<>> family_ix;
  std::vector<Family> families(raw.families.size());
  for (std::size_t f = 0; f < raw.families.size(); ++f) {
    const auto& rf = raw.families[f];
    insert_unique(family_ix, rf.id, static_cast<int>(f), "family");
    Family& fam = families[f];
    fam.id = rf.id;
    if (rf.children.empty())
      throw MatchError(ErrorCode::kPartitionViolation, "family '" + rf.id + "' has no children");
    for (const auto& cid : rf.children) {
      auto it = child_ix.find(cid);
      if (it == child_ix.end())
        throw MatchError(ErrorCode::kUnknownChild, "family '" + rf.id + "' lists unknown child '" + cid + "'");
      Child& ch = children[it->second];
      if (ch.family != -1)
        throw MatchError(ErrorCode::kPartitionViolation, "child '" + cid + "' belongs to families '" +
                                                             families[ch.family].id + "' and '" + rf.id + "'");
      const auto& declared = raw.children[it->second].family;
      if (!declared.empty() && declared != rf.id)
        throw MatchError(ErrorCode::kPartitionViolation,
                         "child '" + cid + "' declares family '" + declared + "' but is listed by '" + rf.id + "'");
      ch.family = static_cast<FamilyIndex>(f);
      fam.children.push_back(it->second);
    }
  }
  for (const auto& c : children)
    if (c.family == -1)
      throw MatchError(ErrorCode::kPartitionViolation, "child '" + c.id + "' belongs to no family");

  for (std::size_t f = 0; f < raw.families.size(); ++f) {
    const auto& rf = raw.families[f];
    Family& fam = families[f];
    const std::size_t k = fam.children.size();
    Tuple omega;
    for (ChildIndex c : fam.children) omega.push_back(children[c].initial);
    const bool enrolled = std::any_of(omega.begin(), omega.end(), [](DaycareIndex d) { return d != kUnmatched; });

    std::set<Tuple> seen;
    for (const auto& rt : rf.preference) {
      if (rt.size() != k)
        throw MatchError(ErrorCode::kTupleLength, "family '" + rf.id + "' has a tuple of length " +
                                                      std::to_string(rt.size()) + ", expected " + std::to_string(k));
      Tuple t;
      bool all_sentinel = true;
      for (std::size_t i = 0; i < k; ++i) {
        const DaycareIndex d = lookup_daycare(rt[i]);
        const Child& ch = children[fam.children[i]];
        if (d == kUnmatched) {
          if (ch.initial != kUnmatched)
            throw MatchError(ErrorCode::kUnacceptableEntry,
                             "family '" + rf.id + "' leaves enrolled child '" + ch.id + "' unmatched");
        } else {
          all_sentinel = false;
          if (daycares[d].grade != ch.grade)
            throw MatchError(ErrorCode::kGradeMismatch, "family '" + rf.id + "' lists '" + daycares[d].id +
                                                            "' for child '" + ch.id + "' of another grade");
        }
        t.push_back(d);
      }
      if (all_sentinel)
        throw MatchError(ErrorCode::kUnacceptableEntry,
                         "family '" + rf.id + "' lists the all-unmatched tuple explicitly");
      if (!seen.insert(t).second)
        throw MatchError(ErrorCode::kDuplicateTuple, "family '" + rf.id + "' lists a tuple twice");
      if (!fam.preference.empty() && fam.preference.back() == omega)
        throw MatchError(ErrorCode::kUnacceptableEntry,
                         "family '" + rf.id + "' ranks a tuple below its initial enrollment");
      fam.preference.push_back(std::move(t));
    }
    if (enrolled && (fam.preference.empty() || fam.preference.back() != omega))
      fam.preference.push_back(omega);
  }

  // Priority ranks: scored children by descending score, then the rest;
  // ties broken by ascending child id.
  for (std::size_t d = 0; d < raw.daycares.size(); ++d) {
    const auto& scores = raw.daycares[d].priority_scores;
    std::vector<double> score(children.size(), -INFINITY);
    for (const auto& [cid, s] : scores) {
      auto it = child_ix.find(cid);
      if (it == child_ix.end())
        throw MatchError(ErrorCode::kUnknownChild,
                         "daycare '" + daycares[d].id + "' scores unknown child '" + cid + "'");
      if (!std::isfinite(s))
        throw MatchError(ErrorCode::kParse, "daycare '" + daycares[d].id + "' has a non-finite score");
      score[it->second] = s;
    }
    std::vector<ChildIndex> order(children.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](ChildIndex a, ChildIndex b) {
      if (score[a] != score[b]) return score[a] > score[b];
      return children[a].id < children[b].id;
    });
    auto& rank = daycares[d].rank;
    rank.assign(children.size(), 0);
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<std::int32_t>(r);
  }

  for (const auto& c : children) {
    if (c.initial == kUnmatched) continue;
    ++daycares[c.initial].effective_quota;
  }
  for (auto& d : daycares) d.effective_quota += d.new_applicant_quota;

  // Initially enrolled children outrank everybody not enrolled there.
  for (DaycareIndex d = 0; d < static_cast<DaycareIndex>(daycares.size()); ++d) {
    int worst_enrolled = -1;
    const Child* worst = nullptr;
    for (const auto& c : children) {
      const auto r = daycares[d].rank[child_ix.at(c.id)];
      if (c.initial == d && r > worst_enrolled) {
        worst_enrolled = r;
        worst = &c;
      }
    }
    if (!worst) continue;
    for (const auto& c : children) {
      if (c.initial == d) continue;
      if (daycares[d].rank[child_ix.at(c.id)] < worst_enrolled)
        throw MatchError(ErrorCode::kPriorityViolation, "child '" + c.id + "' outranks enrolled child '" +
                                                            worst->id + "' at '" + daycares[d].id + "'");
    }
  }

  return Instance(std::move(children), std::move(families), std::move(daycares));
}

ProjectedPreference project_preferences(const Family& family) {
  ProjectedPreference out(family.children.size());
  for (auto& column : out) column.reserve(family.preference.size());
  for (const auto& tuple : family.preference)
    for (std::size_t i = 0; i < out.size(); ++i) out[i].push_back(tuple[i]);
  return out;
}

DemandTable group_by_daycare(const Family& family, const Tuple& tuple) {
  DemandTable table;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (tuple[i] == kUnmatched) continue;
    auto it = std::find_if(table.begin(), table.end(),
                           [&](const DemandEntry& e) { return e.daycare == tuple[i]; });
    if (it == table.end()) {
      table.push_back({tuple[i], {family.children[i]}});
    } else {
      it->demanders.push_back(family.children[i]);
    }
  }
  return table;
}

DemandTable demand_table(const Instance& inst, FamilyIndex f, const Tuple& tuple) {
  const auto& fam = inst.family(f);
  if (std::find(fam.preference.begin(), fam.preference.end(), tuple) == fam.preference.end())
    throw MatchError(ErrorCode::kTupleNotInPreference, "tuple is not ranked by family '" + fam.id + "'");
  return group_by_daycare(fam, tuple);
}

int lambda_count(const Instance& inst, std::span<const ChildIndex> matched_at_d, DaycareIndex d,
                 std::span<const ChildIndex> excluded, std::span<const ChildIndex> reference) {
  if (reference.empty())
    throw MatchError(ErrorCode::kEmptyReferenceSet, "lambda needs a non-empty reference set");
  // Outranking one member of the reference set means outranking its lowest.
  const auto& rank = inst.daycare(d).rank;
  std::int32_t threshold = rank[reference.front()];
  for (ChildIndex c : reference) threshold = std::max(threshold, rank[c]);
  int count = 0;
  for (ChildIndex c : matched_at_d) {
    if (std::find(excluded.begin(), excluded.end(), c) != excluded.end()) continue;
    if (rank[c] < threshold) ++count;
  }
  return count;
}

int lambda_count(const Instance& inst, const Matching& mu, DaycareIndex d,
                 std::span<const ChildIndex> excluded, std::span<const ChildIndex> reference) {
  if (d == kUnmatched || d >= static_cast<DaycareIndex>(inst.num_daycares()))
    throw MatchError(ErrorCode::kUnknownDaycare, "lambda over a non-existent daycare");
  std::vector<ChildIndex> at_d;
  for (ChildIndex c = 0; c < static_cast<ChildIndex>(mu.size()); ++c)
    if (mu[c] == d) at_d.push_back(c);
  return lambda_count(inst, at_d, d, excluded, reference);
}

std::vector<std::vector<std::string>> expand_template(const std::vector<std::vector<std::string>>& individual,
                                                      PreferenceTemplate tmpl, std::vector<std::size_t> precedence) {
  const std::size_t k = individual.size();
  std::vector<std::vector<std::string>> out;
  if (k == 0) return out;
  if (precedence.empty()) {
    precedence.resize(k);
    std::iota(precedence.begin(), precedence.end(), 0);
  }
  if (precedence.size() != k)
    throw MatchError(ErrorCode::kInvalidConfig, "precedence must name every child once");

  const std::string sentinel{kUnmatchedId};
  if (k == 1) {
    for (const auto& d : individual[0]) out.push_back({d});
    return out;
  }

  if (tmpl == PreferenceTemplate::kSameDaycareOnly) {
    for (std::size_t i = 1; i < k; ++i)
      if (individual[i] != individual[0])
        throw MatchError(ErrorCode::kTemplateRequiresIdenticalIndividualPrefs,
                         "same-daycare template needs identical individual lists");
  }

  // Same-daycare tuples follow the top-precedence child's order over the
  // daycares every child lists.
  const auto& lead = individual[precedence.front()];
  for (const auto& d : lead) {
    bool everyone = std::all_of(individual.begin(), individual.end(), [&](const auto& list) {
      return std::find(list.begin(), list.end(), d) != list.end();
    });
    if (everyone) out.emplace_back(k, d);
  }
  if (tmpl == PreferenceTemplate::kSameDaycareOnly) return out;

  for (std::size_t who : precedence) {
    for (const auto& d : individual[who]) {
      std::vector<std::string> t(k, sentinel);
      t[who] = d;
      out.push_back(std::move(t));
    }
  }
  return out;
}

std::optional<std::pair<ChildIndex, ChildIndex>> twin_pair(const Instance& inst, FamilyIndex f) {
  const auto& kids = inst.family(f).children;
  for (std::size_t i = 0; i < kids.size(); ++i)
    for (std::size_t j = i + 1; j < kids.size(); ++j)
      if (inst.child(kids[i]).grade == inst.child(kids[j]).grade) return std::pair{kids[i], kids[j]};
  return std::nullopt;
}

bool in_restricted_setting(const Instance& inst, FamilyIndex f) {
  const auto& kids = inst.family(f).children;
  if (kids.size() > 3) return false;
  std::map<Grade, int> per_grade;
  for (ChildIndex c : kids) ++per_grade[inst.child(c).grade];
  int pairs = 0;
  for (const auto& [g, n] : per_grade) {
    if (n > 2) return false;
    if (n == 2) ++pairs;
  }
  return pairs <= 1;
}

}  // namespace daycare
