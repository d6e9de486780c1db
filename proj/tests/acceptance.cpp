// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "daycare/oracle.hpp"
#include "daycare/solver.hpp"
#include "goldens.hpp"

using namespace daycare;
using daycare::testing::golden;
using daycare::testing::load;
using daycare::testing::tiny_instance;

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kTinySeeds = 200;
constexpr double kCertificateSeconds = 1.0;
constexpr double kEquivalenceSeconds = 300.0;
constexpr int kMidSeeds = 20;
constexpr double kScaleSeconds = 120.0;
// Deterministic budget for the mid-size sweep; the slowest level-1 solve
// needs about 2.2M nodes.
constexpr std::int64_t kMidNodeLimit = 50'000'000;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int number, const std::string& name, const Outcome& o) {
  std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", number, name.c_str(), o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

// Properties a level-L optimum must have: feasible, family rational,
// non-wasteful, and unblocked by families of at most L children.
bool level_holds(const Instance& inst, const Matching& mu, int level) {
  if (!check_feasible(inst, mu).feasible || !check_family_rational(inst, mu).rational) return false;
  if (!check_family_nonwasteful(inst, mu, true).non_wasteful) return false;
  BlockingSearch search;
  search.max_family_size = static_cast<std::size_t>(level);
  search.first_per_family = true;
  return find_blocking_coalitions(inst, mu, search).empty();
}

SolverConfig exact_config() {
  SolverConfig cfg;
  cfg.time_limit_seconds = 1e9;
  cfg.node_limit = kMidNodeLimit;
  return cfg;
}

// Serialized matching and report of one solve, without wall-clock time.
std::string fingerprint(const Instance& inst, int level, const SolveResult& r) {
  std::string s = dump(solve_report_to_json(inst, level, r, false));
  if (r.matching) s += dump(matching_to_json(inst, *r.matching));
  return s;
}

// ---------------------------------------------------------------------------

Outcome certificate() {
  const auto start = Clock::now();
  const Instance inst = load("no_stable.json");
  const EnumerationReport oracle = stable_set(inst);
  const SolveResult r3 = solve(build_model(inst, {3}), {});
  const double t = seconds_since(start);

  Outcome o;
  const bool text = render_enumeration(inst, oracle) == golden("no_stable_certificate.txt");
  o.pass = oracle.stable.empty() && oracle.nonexistence_certificate.size() == 5 && text &&
           r3.status == SolveStatus::kInfeasible && t < kCertificateSeconds;
  for (const auto& entry : oracle.nonexistence_certificate)
    o.pass = o.pass && replay_witness(inst, entry.outcome, entry.witness);
  o.detail = std::to_string(oracle.total_outcomes) + " outcomes, stable set " +
             (oracle.stable.empty() ? "empty" : "non-empty") + ", " +
             std::to_string(oracle.nonexistence_certificate.size()) + " witnesses" +
             (text ? " match" : " differ from") + " the golden, level 3 " + std::string(to_string(r3.status)) +
             ", " + std::to_string(t) + " s (limit 1 s)";
  return o;
}

Outcome goldens() {
  const std::pair<const char*, std::function<std::string()>> cases[] = {
      {"lambda.txt", daycare::testing::render_lambda_example},
      {"demand_table.txt", daycare::testing::render_demand_table_example},
      {"projection.txt", daycare::testing::render_projection_example},
      {"issue_nw.txt", daycare::testing::render_issue_nw_example},
      {"no_stable_certificate.txt",
       [] {
         const Instance inst = load("no_stable.json");
         return render_enumeration(inst, stable_set(inst));
       }},
  };
  Outcome o;
  int matched = 0;
  std::string differing;
  for (const auto& [file, render] : cases) {
    if (render() == golden(file))
      ++matched;
    else
      differing += std::string(" ") + file;
  }
  o.pass = differing.empty();
  o.detail = std::to_string(matched) + "/5 byte-exact" + (differing.empty() ? "" : ", differ:" + differing);
  return o;
}

struct TinyRun {
  int mismatches = 0;
  int shape_violations = 0;
  int checker_violations = 0;
  int empty_stable_sets = 0;
  std::uint64_t outcomes = 0;
  std::uint64_t stable_outcomes = 0;
  std::uint64_t stable_but_wasteful = 0;
  double seconds = 0.0;
  std::string first_problem;
  std::string fingerprint;
};

TinyRun run_tiny() {
  TinyRun run;
  const auto start = Clock::now();
  auto note = [&](const std::string& what) {
    if (run.first_problem.empty()) run.first_problem = what;
  };
  for (int seed = 0; seed < kTinySeeds; ++seed) {
    const Instance inst = tiny_instance(static_cast<std::uint64_t>(seed));
    std::size_t longest = 0;
    for (const auto& fam : inst.families()) longest = std::max(longest, fam.preference.size());
    if (inst.num_children() > 10 || inst.num_daycares() > 5 || longest > 6) {
      ++run.shape_violations;
      note("seed " + std::to_string(seed) + " exceeds the tiny shape");
    }

    const EnumerationReport oracle = stable_set(inst);
    run.outcomes += oracle.total_outcomes;
    run.stable_outcomes += oracle.stable.size();
    run.stable_but_wasteful += oracle.stable_but_wasteful;
    for (const auto& mu : oracle.stable)
      if (!check_family_nonwasteful(inst, mu).non_wasteful) ++run.stable_but_wasteful;
    if (oracle.stable.empty()) ++run.empty_stable_sets;

    for (int level = 0; level <= 3; ++level) {
      const SolveResult r = solve(build_model(inst, {level}), {});
      run.fingerprint += fingerprint(inst, level, r);
      const auto& expected = oracle.level_optimum.at(level);
      const std::string where = "seed " + std::to_string(seed) + " level " + std::to_string(level);
      const bool agrees = expected ? (r.status == SolveStatus::kOptimal && r.objective == *expected)
                                   : r.status == SolveStatus::kInfeasible;
      if (!agrees) {
        ++run.mismatches;
        note(where + ": solver " + std::string(to_string(r.status)) + " " + std::to_string(r.objective));
      }
      if (level == 3 && (r.status == SolveStatus::kInfeasible) != oracle.stable.empty()) {
        ++run.mismatches;
        note(where + ": infeasibility disagrees with the stable set");
      }
      if (!r.matching) continue;
      const Matching& mu = *r.matching;
      bool sound = check_feasible(inst, mu).feasible && check_family_rational(inst, mu).rational &&
                   check_family_nonwasteful(inst, mu).non_wasteful;
      if (level == 3) sound = sound && check_stable(inst, mu).stable;
      if (!sound) {
        ++run.checker_violations;
        note(where + ": solver matching fails the checkers");
      }
    }
  }
  run.seconds = seconds_since(start);
  return run;
}

struct MidRun {
  int violations = 0;
  int inexact = 0;
  std::string table;
  std::string fingerprint;
};

GenParams mid_params(int seed) {
  GenParams p = preset("tama21");
  p.n_children = 100;
  p.n_daycares = 6;
  p.pref_max_family = 64;
  p.seed = static_cast<std::uint64_t>(seed);
  return p;
}

MidRun run_mid() {
  MidRun run;
  for (int seed = 0; seed < kMidSeeds; ++seed) {
    const Instance inst = generate(mid_params(seed));
    std::string row = "seed " + std::to_string(seed) + ":";
    int previous = -1;
    for (int level = 0; level <= 3; ++level) {
      const SolveResult r = solve(build_model(inst, {level}), exact_config());
      run.fingerprint += fingerprint(inst, level, r);
      // Infeasible counts as -1 matched children.
      int value = -1;
      if (r.status == SolveStatus::kOptimal) {
        value = r.objective;
      } else if (r.status != SolveStatus::kInfeasible) {
        ++run.inexact;
      }
      if (level > 0 && value > previous) ++run.violations;
      previous = value;
      row += " " + (value >= 0 ? std::to_string(value) : std::string(to_string(r.status)));
    }
    run.table += row + "\n";
  }
  return run;
}

struct ScaleRun {
  SolveResult result;
  double seconds = 0.0;
  std::string fingerprint;
};

ScaleRun run_scale() {
  ScaleRun run;
  const Instance inst = generate(preset("tama21"));
  const IpModel model = build_model(inst, {3});
  SolverConfig cfg;
  cfg.time_limit_seconds = kScaleSeconds;
  const auto start = Clock::now();
  run.result = solve(model, cfg);
  run.seconds = seconds_since(start);
  run.fingerprint = fingerprint(inst, 3, run.result);
  return run;
}

}  // namespace

int main() {
  report(1, "no-stable-outcome certificate", certificate());
  report(2, "worked-example goldens", goldens());

  const TinyRun tiny = run_tiny();
  report(3, "oracle and IP agree on tiny markets",
         {tiny.mismatches == 0 && tiny.shape_violations == 0 && tiny.seconds < kEquivalenceSeconds,
          std::to_string(kTinySeeds) + " instances x 4 levels, " + std::to_string(tiny.mismatches) +
              " mismatches, " + std::to_string(tiny.shape_violations) + " oversized, " +
              std::to_string(tiny.empty_stable_sets) + " with no stable outcome, " + std::to_string(tiny.seconds) +
              " s (limit 300 s)" + (tiny.first_problem.empty() ? "" : "; first: " + tiny.first_problem)});
  report(4, "checker soundness",
         {tiny.checker_violations == 0, std::to_string(tiny.checker_violations) + " solver matchings fail the checkers"});

  const MidRun mid = run_mid();
  std::printf("%s", mid.table.c_str());
  report(5, "relaxation monotonicity",
         {mid.violations == 0 && mid.inexact == 0,
          std::to_string(kMidSeeds) + " markets of 100 children, " + std::to_string(mid.violations) +
              " increases from one level to the next, " + std::to_string(mid.inexact) + " solves not proven"});

  report(6, "stable outcomes are non-wasteful",
         {tiny.stable_but_wasteful == 0, std::to_string(tiny.outcomes) + " outcomes enumerated, " +
                                             std::to_string(tiny.stable_outcomes) + " stable, " +
                                             std::to_string(tiny.stable_but_wasteful) + " stable but wasteful"});

  const ScaleRun scale = run_scale();
  const bool proven = scale.result.status == SolveStatus::kOptimal || scale.result.status == SolveStatus::kInfeasible;
  report(7, "scale smoke test",
         {proven && scale.seconds < kScaleSeconds,
          "tama21 level 3 " + std::string(to_string(scale.result.status)) + " matched " +
              std::to_string(scale.result.objective) + " in " + std::to_string(scale.seconds) + " s, " +
              std::to_string(scale.result.stats.nodes) + " nodes (limit 120 s)"});

  const TinyRun tiny_again = run_tiny();
  const MidRun mid_again = run_mid();
  const ScaleRun scale_again = run_scale();
  const bool same_tiny = tiny.fingerprint == tiny_again.fingerprint;
  const bool same_mid = mid.fingerprint == mid_again.fingerprint;
  const bool same_scale = scale.fingerprint == scale_again.fingerprint;
  report(8, "determinism",
         {same_tiny && same_mid && same_scale,
          std::string("repeat runs of criteria 3/5/7: ") + (same_tiny ? "identical" : "DIFFERENT") + "/" +
              (same_mid ? "identical" : "DIFFERENT") + "/" + (same_scale ? "identical" : "DIFFERENT") + " (" +
              std::to_string(tiny.fingerprint.size() + mid.fingerprint.size() + scale.fingerprint.size()) +
              " bytes of matchings and reports)"});

  return failures == 0 ? 0 : 1;
}
