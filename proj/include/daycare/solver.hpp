#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "daycare/ipmodel.hpp"
#include "daycare/properties.hpp"
#include "daycare/types.hpp"

namespace daycare {

enum class SolveStatus { kOptimal, kFeasible, kInfeasible, kUnknown };
std::string_view to_string(SolveStatus status);

struct SolverConfig {
  double time_limit_seconds = 120.0;
  std::int64_t node_limit = 50'000'000;
  // Empty: builtin branch-and-bound. Otherwise a command invoked as
  // `<adapter> <model.lp> <solution.txt>`.
  std::string external_adapter;
  std::uint64_t seed = 0;  // reserved; the builtin search is deterministic

  void validate() const;
};

struct SolveStats {
  std::int64_t nodes = 0;
  std::int64_t incumbents = 0;
  double runtime_seconds = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kUnknown;
  std::optional<Matching> matching;
  int objective = 0;
  std::vector<std::uint8_t> assignment;  // per column, when a matching exists
  SolveStats stats;
};

SolveResult solve(const IpModel& model, const SolverConfig& config);

// Child c goes to d(c, p) for the position p with y = 1, else unmatched.
// Throws kMultiplePositionsSet when a child has two positions set.
Matching decode(const IpModel& model, std::span<const std::uint8_t> assignment);

// Whether a 0-1 assignment satisfies every row of the model.
bool satisfies(const IpModel& model, std::span<const std::uint8_t> assignment);

// Assignment realizing a matching in which every family holds a ranked tuple
// or omega(f); each indicator is 1 wherever its link row allows. Empty when
// some family holds an unranked tuple.
std::optional<std::vector<std::uint8_t>> encode(const Instance& inst, const IpModel& model, const Matching& mu);

struct SweepRow {
  int level = 0;
  SolveResult result;
  std::optional<PropertyReport> report;
};

// Levels 0..3 on one instance. Throws std::logic_error if two levels that
// were both solved exactly break the non-increasing matched-count order.
std::vector<SweepRow> relaxation_sweep(const Instance& inst, const SolverConfig& config);

}  // namespace daycare
