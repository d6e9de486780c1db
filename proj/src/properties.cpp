#include "daycare/properties.hpp"

#include <algorithm>
#include <stdexcept>

namespace daycare {

std::string_view to_string(BlockingKind kind) {
  switch (kind) {
    case BlockingKind::kOnlyChild: return "I";
    case BlockingKind::kTwins: return "II";
    case BlockingKind::kDistinct: return "III";
    case BlockingKind::kMixed: return "IV";
    case BlockingKind::kGeneral: return "GENERAL";
  }
  return "GENERAL";
}

BlockingKind classify_tuple(const Instance& inst, FamilyIndex f, const Tuple& tuple) {
  const auto& fam = inst.family(f);
  if (fam.children.size() == 1) return BlockingKind::kOnlyChild;
  int singles = 0;
  int pairs = 0;
  for (const auto& e : group_by_daycare(fam, tuple)) {
    if (e.demanders.size() == 1) {
      ++singles;
    } else if (e.demanders.size() == 2) {
      ++pairs;
    } else {
      return BlockingKind::kGeneral;
    }
  }
  if (pairs == 0) return BlockingKind::kDistinct;
  if (pairs == 1 && singles == 0) return BlockingKind::kTwins;
  if (pairs == 1 && singles == 1) return BlockingKind::kMixed;
  return BlockingKind::kGeneral;
}

FeasibilityResult check_feasible(const Instance& inst, const Matching& mu) {
  FeasibilityResult out;
  if (mu.size() != inst.num_children()) {
    out.feasible = false;
    out.violations.push_back("matching covers " + std::to_string(mu.size()) + " children, instance has " +
                             std::to_string(inst.num_children()));
    return out;
  }
  const auto loads = mu.loads(inst);
  for (DaycareIndex d = 0; d < static_cast<DaycareIndex>(inst.num_daycares()); ++d) {
    if (loads[d] > inst.quota(d)) {
      out.feasible = false;
      out.violations.push_back("daycare '" + inst.daycare(d).id + "' holds " + std::to_string(loads[d]) +
                               " children over quota " + std::to_string(inst.quota(d)));
    }
  }
  for (FamilyIndex f = 0; f < static_cast<FamilyIndex>(inst.num_families()); ++f) {
    if (inst.tuple_rank(f, mu.family_tuple(inst, f)) == Instance::npos) {
      out.feasible = false;
      out.violations.push_back("family '" + inst.family(f).id + "' is assigned a tuple it does not rank");
    }
  }
  return out;
}

RationalityResult check_family_rational(const Instance& inst, const Matching& mu) {
  RationalityResult out;
  for (FamilyIndex f = 0; f < static_cast<FamilyIndex>(inst.num_families()); ++f) {
    const auto rank = inst.tuple_rank(f, mu.family_tuple(inst, f));
    const auto initial = inst.tuple_rank(f, inst.initial_tuple(f));
    if (rank == Instance::npos || rank > initial) {
      out.rational = false;
      out.violators.push_back(f);
    }
  }
  return out;
}

NonWastefulnessResult check_family_nonwasteful(const Instance& inst, const Matching& mu, bool first_per_family) {
  NonWastefulnessResult out;
  const auto loads = mu.loads(inst);
  for (FamilyIndex f = 0; f < static_cast<FamilyIndex>(inst.num_families()); ++f) {
    const auto& fam = inst.family(f);
    const auto rank = std::min(inst.tuple_rank(f, mu.family_tuple(inst, f)), fam.preference.size());
    for (std::size_t p = 0; p < rank; ++p) {
      bool fits = true;
      for (const auto& e : group_by_daycare(fam, fam.preference[p])) {
        int own = 0;
        for (ChildIndex c : fam.children)
          if (mu[c] == e.daycare) ++own;
        const int others = loads[e.daycare] - own;
        if (others + static_cast<int>(e.demanders.size()) > inst.quota(e.daycare)) {
          fits = false;
          break;
        }
      }
      if (fits) {
        out.non_wasteful = false;
        out.moves.push_back({f, p});
        if (first_per_family) break;
      }
    }
  }
  return out;
}

namespace {

// Tests condition ii) of the general definition for one tuple; fills the
// per-entry figures either way.
bool lambda_condition(const Instance& inst, const std::vector<std::vector<ChildIndex>>& members, const Family& fam,
                      const Tuple& tuple, std::vector<WitnessEntry>* entries) {
  bool blocks = true;
  for (const auto& e : group_by_daycare(fam, tuple)) {
    const int lam = lambda_count(inst, members[e.daycare], e.daycare, fam.children, e.demanders);
    const int need = static_cast<int>(e.demanders.size());
    if (entries) entries->push_back({e.daycare, lam, inst.quota(e.daycare), need});
    if (lam > inst.quota(e.daycare) - need) {
      blocks = false;
      if (!entries) break;
    }
  }
  return blocks;
}

std::size_t preferred_prefix(const Instance& inst, const Matching& mu, FamilyIndex f) {
  return std::min(inst.tuple_rank(f, mu.family_tuple(inst, f)), inst.family(f).preference.size());
}

}  // namespace

std::vector<BlockingWitness> find_blocking_coalitions(const Instance& inst, const Matching& mu,
                                                     const BlockingSearch& search) {
  std::vector<BlockingWitness> out;
  const auto members = mu.members(inst);
  for (FamilyIndex f = 0; f < static_cast<FamilyIndex>(inst.num_families()); ++f) {
    const auto& fam = inst.family(f);
    if (search.max_family_size && fam.children.size() > *search.max_family_size) continue;
    const auto prefix = preferred_prefix(inst, mu, f);
    for (std::size_t p = 0; p < prefix; ++p) {
      if (!lambda_condition(inst, members, fam, fam.preference[p], nullptr)) continue;
      BlockingWitness w;
      w.family = f;
      w.tuple_position = p;
      w.kind = classify_tuple(inst, f, fam.preference[p]);
      lambda_condition(inst, members, fam, fam.preference[p], &w.entries);
      out.push_back(std::move(w));
      if (search.first_per_family) break;
    }
  }
  return out;
}

StabilityResult check_stable(const Instance& inst, const Matching& mu, bool all_witnesses) {
  StabilityResult out;
  BlockingSearch search;
  search.first_per_family = !all_witnesses;
  out.witnesses = find_blocking_coalitions(inst, mu, search);
  if (!all_witnesses && out.witnesses.size() > 1) out.witnesses.resize(1);
  out.stable = out.witnesses.empty();
  return out;
}

bool replay_witness(const Instance& inst, const Matching& mu, const BlockingWitness& w) {
  if (w.family < 0 || w.family >= static_cast<FamilyIndex>(inst.num_families())) return false;
  const auto& fam = inst.family(w.family);
  if (w.tuple_position >= preferred_prefix(inst, mu, w.family)) return false;
  const auto members = mu.members(inst);
  std::vector<WitnessEntry> entries;
  return lambda_condition(inst, members, fam, fam.preference[w.tuple_position], &entries) && entries == w.entries;
}

namespace {

int lambda_of(const Instance& inst, const Matching& mu, DaycareIndex d, const std::vector<ChildIndex>& excluded,
              std::vector<ChildIndex> reference) {
  return lambda_count(inst, mu, d, excluded, reference);
}

bool prefers(const Instance& inst, const Matching& mu, FamilyIndex f, std::size_t position) {
  return position < preferred_prefix(inst, mu, f);
}

}  // namespace

bool blocks_only_child(const Instance& inst, const Matching& mu, FamilyIndex f, std::size_t position) {
  const auto& fam = inst.family(f);
  if (fam.children.size() != 1 || !prefers(inst, mu, f, position)) return false;
  const ChildIndex c = fam.children[0];
  const DaycareIndex d = fam.preference[position][0];
  if (d == kUnmatched) return false;
  return lambda_of(inst, mu, d, {c}, {c}) <= inst.quota(d) - 1;
}

bool blocks_twins(const Instance& inst, const Matching& mu, FamilyIndex f, std::size_t position) {
  const auto& fam = inst.family(f);
  if (fam.children.size() < 2 || !prefers(inst, mu, f, position)) return false;
  const Tuple& t = fam.preference[position];
  std::vector<std::size_t> placed;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] != kUnmatched) placed.push_back(i);
  if (placed.size() != 2 || t[placed[0]] != t[placed[1]]) return false;
  const DaycareIndex d = t[placed[0]];
  const std::vector<ChildIndex> twins{fam.children[placed[0]], fam.children[placed[1]]};
  return lambda_of(inst, mu, d, fam.children, twins) <= inst.quota(d) - 2;
}

bool blocks_distinct(const Instance& inst, const Matching& mu, FamilyIndex f, std::size_t position) {
  const auto& fam = inst.family(f);
  if (fam.children.size() < 2 || !prefers(inst, mu, f, position)) return false;
  const Tuple& t = fam.preference[position];
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      if (t[i] != kUnmatched && t[i] == t[j]) return false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == kUnmatched) continue;
    if (lambda_of(inst, mu, t[i], fam.children, {fam.children[i]}) > inst.quota(t[i]) - 1) return false;
  }
  return true;
}

bool blocks_mixed(const Instance& inst, const Matching& mu, FamilyIndex f, std::size_t position) {
  const auto& fam = inst.family(f);
  if (fam.children.size() != 3 || !prefers(inst, mu, f, position)) return false;
  const Tuple& t = fam.preference[position];
  // Locate the twin pair sharing a daycare and the remaining child.
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      if (t[i] == kUnmatched || t[i] != t[j]) continue;
      const std::size_t other = 3 - i - j;
      if (t[other] == kUnmatched || t[other] == t[i]) return false;
      const DaycareIndex d1 = t[i];
      const DaycareIndex d2 = t[other];
      const std::vector<ChildIndex> twins{fam.children[i], fam.children[j]};
      return lambda_of(inst, mu, d1, fam.children, twins) <= inst.quota(d1) - 2 &&
             lambda_of(inst, mu, d2, fam.children, {fam.children[other]}) <= inst.quota(d2) - 1;
    }
  }
  return false;
}

PropertyReport build_report(const Instance& inst, const Matching& mu) {
  PropertyReport r;
  r.feasibility = check_feasible(inst, mu);
  if (mu.size() != inst.num_children()) {
    r.rationality.rational = false;
    r.non_wastefulness.non_wasteful = false;
    r.stability.stable = false;
    return r;
  }
  r.rationality = check_family_rational(inst, mu);
  r.non_wastefulness = check_family_nonwasteful(inst, mu);
  r.stability = check_stable(inst, mu, true);
  r.matched_count = mu.matched_count();
  r.blocking_count = static_cast<int>(r.stability.witnesses.size());
  if (r.feasibility.feasible && r.stability.stable && !r.non_wastefulness.non_wasteful)
    throw std::logic_error("stable outcome reported as wasteful");
  return r;
}

OutcomeComparison compare_outcomes(const Instance& inst, const Matching& a, const Matching& b) {
  return {build_report(inst, a), build_report(inst, b)};
}

}  // namespace daycare
