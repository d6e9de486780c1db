#include "daycare/oracle.hpp"

#include <algorithm>
#include <limits>

namespace daycare {

namespace {

std::vector<Tuple> family_options(const Instance& inst, FamilyIndex f) {
  std::vector<Tuple> options = inst.family(f).preference;
  const Tuple omega = inst.initial_tuple(f);
  if (std::find(options.begin(), options.end(), omega) == options.end()) options.push_back(omega);
  return options;
}

}  // namespace

std::uint64_t search_space_size(const Instance& inst) {
  std::uint64_t total = 1;
  for (FamilyIndex f = 0; f < static_cast<FamilyIndex>(inst.num_families()); ++f) {
    const std::uint64_t n = family_options(inst, f).size();
    if (total > std::numeric_limits<std::uint64_t>::max() / n) return std::numeric_limits<std::uint64_t>::max();
    total *= n;
  }
  return total;
}

void enumerate_outcomes(const Instance& inst, const OracleCaps& caps,
                        const std::function<void(const Matching&)>& visit) {
  const auto space = search_space_size(inst);
  if (space > caps.max_search_space)
    throw MatchError(ErrorCode::kCapsExceeded, "search space of " + std::to_string(space) + " outcomes exceeds cap " +
                                                   std::to_string(caps.max_search_space));
  const auto nf = inst.num_families();
  std::vector<std::vector<Tuple>> options(nf);
  for (FamilyIndex f = 0; f < static_cast<FamilyIndex>(nf); ++f) options[f] = family_options(inst, f);

  Matching mu(inst.num_children());
  std::vector<int> load(inst.num_daycares(), 0);

  // Depth-first over families; a choice is taken only if it fits.
  std::function<void(std::size_t)> recurse = [&](std::size_t f) {
    if (f == nf) {
      visit(mu);
      return;
    }
    const auto& kids = inst.family(static_cast<FamilyIndex>(f)).children;
    for (const Tuple& t : options[f]) {
      bool fits = true;
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (t[i] == kUnmatched) continue;
        if (++load[t[i]] > inst.quota(t[i])) fits = false;
      }
      if (fits) {
        for (std::size_t i = 0; i < kids.size(); ++i) mu.assign(kids[i], t[i]);
        recurse(f + 1);
        for (ChildIndex c : kids) mu.assign(c, kUnmatched);
      }
      for (std::size_t i = 0; i < kids.size(); ++i)
        if (t[i] != kUnmatched) --load[t[i]];
    }
  };
  recurse(0);
}

EnumerationReport stable_set(const Instance& inst, const OracleCaps& caps) {
  EnumerationReport report;
  for (int level = 0; level <= 3; ++level) report.level_optimum[level] = std::nullopt;

  struct Seen {
    Matching outcome;
    std::optional<BlockingWitness> first_witness;
  };
  std::vector<Seen> blocked;

  enumerate_outcomes(inst, caps, [&](const Matching& mu) {
    ++report.total_outcomes;
    const bool non_wasteful = check_family_nonwasteful(inst, mu, true).non_wasteful;
    const auto witnesses = find_blocking_coalitions(inst, mu, {std::nullopt, true});
    const int matched = mu.matched_count();
    if (witnesses.empty()) {
      report.stable.push_back(mu);
      if (!non_wasteful) ++report.stable_but_wasteful;
    } else {
      blocked.push_back({mu, witnesses.front()});
    }
    if (!non_wasteful) return;
    std::size_t smallest_blocking = std::numeric_limits<std::size_t>::max();
    for (const auto& w : witnesses)
      smallest_blocking = std::min(smallest_blocking, inst.family(w.family).children.size());
    for (int level = 0; level <= 3; ++level) {
      if (smallest_blocking <= static_cast<std::size_t>(level)) continue;
      auto& best = report.level_optimum[level];
      if (!best || matched > *best) best = matched;
    }
  });

  if (report.stable.empty()) {
    auto pairs_subset = [](const Matching& a, const Matching& b) {
      // matched pairs of a are a strict subset of those of b
      bool strict = false;
      for (std::size_t c = 0; c < a.size(); ++c) {
        const auto ca = static_cast<ChildIndex>(c);
        if (a[ca] != kUnmatched && a[ca] != b[ca]) return false;
        if (a[ca] == kUnmatched && b[ca] != kUnmatched) strict = true;
      }
      return strict;
    };
    for (const auto& s : blocked) {
      const bool maximal = std::none_of(blocked.begin(), blocked.end(),
                                        [&](const Seen& other) { return pairs_subset(s.outcome, other.outcome); });
      if (maximal) report.nonexistence_certificate.push_back({s.outcome, *s.first_witness});
    }
  }
  return report;
}

}  // namespace daycare
