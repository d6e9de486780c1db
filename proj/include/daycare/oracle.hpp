#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "daycare/properties.hpp"
#include "daycare/types.hpp"

namespace daycare {

struct OracleCaps {
  // Upper bound on the product of per-family option counts.
  std::uint64_t max_search_space = 5'000'000;
};

// Product of per-family option counts (ranked tuples plus omega(f) when it is
// not ranked), saturating at UINT64_MAX.
std::uint64_t search_space_size(const Instance& inst);

// Visits every capacity-respecting combination of per-family choices exactly
// once; choices are restricted to tuples weakly better than omega(f), so every
// visited outcome is family rational. Throws kCapsExceeded.
void enumerate_outcomes(const Instance& inst, const OracleCaps& caps,
                        const std::function<void(const Matching&)>& visit);

struct CertificateEntry {
  Matching outcome;
  BlockingWitness witness;
};

struct EnumerationReport {
  std::uint64_t total_outcomes = 0;
  std::vector<Matching> stable;
  // Maximum matched count among outcomes satisfying level L's properties
  // (non-wasteful, no blocking coalition for families of size <= L);
  // absent when no outcome qualifies.
  std::map<int, std::optional<int>> level_optimum;
  // Present iff `stable` is empty: one witness per maximal outcome (no other
  // outcome seats a strict superset of its matched pairs).
  std::vector<CertificateEntry> nonexistence_certificate;
  // Outcomes that are stable but wasteful; always empty if the theory holds.
  std::uint64_t stable_but_wasteful = 0;
};

EnumerationReport stable_set(const Instance& inst, const OracleCaps& caps = {});

}  // namespace daycare
