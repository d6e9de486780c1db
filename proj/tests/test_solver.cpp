#include <doctest.h>

#include "daycare/oracle.hpp"
#include "daycare/solver.hpp"
#include "support.hpp"

using namespace daycare;
using daycare::testing::load;

namespace {

bool level_holds(const Instance& inst, const Matching& mu, int level) {
  if (!check_feasible(inst, mu).feasible || !check_family_rational(inst, mu).rational) return false;
  if (!check_family_nonwasteful(inst, mu, true).non_wasteful) return false;
  BlockingSearch search;
  search.max_family_size = static_cast<std::size_t>(level);
  search.first_per_family = true;
  return find_blocking_coalitions(inst, mu, search).empty();
}

}  // namespace

TEST_CASE("counter-example: level 3 is infeasible, level 0 seats three") {
  const Instance inst = load("no_stable.json");
  const auto r3 = solve(build_model(inst, {3}), {});
  CHECK(r3.status == SolveStatus::kInfeasible);
  CHECK_FALSE(r3.matching);

  const auto r0 = solve(build_model(inst, {0}), {});
  REQUIRE(r0.status == SolveStatus::kOptimal);
  REQUIRE(r0.matching);
  CHECK(r0.objective == 3);
  CHECK(r0.matching->matched_count() == 3);
  const auto report = build_report(inst, *r0.matching);
  CHECK(report.feasibility.feasible);
  CHECK(report.rationality.rational);
  CHECK(report.non_wastefulness.non_wasteful);
  CHECK_FALSE(report.stability.stable);
}

TEST_CASE("non-wastefulness example solves to the better outcome") {
  const Instance inst = load("issue_nw.json");
  const auto r = solve(build_model(inst, {3}), {});
  REQUIRE(r.status == SolveStatus::kOptimal);
  CHECK(render_matching(inst, *r.matching) == "c1=d1 c2=d2");
}

TEST_CASE("empty market") {
  const Instance inst = validate_instance(RawInstance{});
  const auto r = solve(build_model(inst, {3}), {});
  CHECK(r.status == SolveStatus::kOptimal);
  REQUIRE(r.matching);
  CHECK(r.matching->size() == 0);
}

TEST_CASE("model rows hold exactly on outcomes with the level's properties") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance inst = daycare::testing::tiny_instance(seed);
    for (int level = 0; level <= 3; ++level) {
      const IpModel m = build_model(inst, {level});
      enumerate_outcomes(inst, {}, [&](const Matching& mu) {
        const auto x = encode(inst, m, mu);
        REQUIRE(x);
        CHECK(decode(m, *x) == mu);
        CHECK(satisfies(m, *x) == level_holds(inst, mu, level));
      });
    }
  }
}

TEST_CASE("solver agrees with enumeration on small markets") {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    const Instance inst = daycare::testing::tiny_instance(seed);
    const auto oracle = stable_set(inst);
    for (int level = 0; level <= 3; ++level) {
      CAPTURE(seed);
      CAPTURE(level);
      const auto r = solve(build_model(inst, {level}), {});
      const auto& expected = oracle.level_optimum.at(level);
      if (expected) {
        REQUIRE(r.status == SolveStatus::kOptimal);
        CHECK(r.objective == *expected);
        CHECK(level_holds(inst, *r.matching, level));
      } else {
        CHECK(r.status == SolveStatus::kInfeasible);
      }
    }
  }
}

TEST_CASE("decode refuses two positions for one child") {
  const Instance inst = load("no_stable.json");
  const IpModel m = build_model(inst, {0});
  std::vector<std::uint8_t> x(m.columns.size(), 0);
  const auto& c3 = m.y_columns[*inst.find_child("c3")];
  x[c3[0]] = x[c3[1]] = 1;
  try {
    decode(m, x);
    FAIL("decoded an ambiguous assignment");
  } catch (const MatchError& e) {
    CHECK(e.code() == ErrorCode::kMultiplePositionsSet);
  }
  CHECK_FALSE(satisfies(m, x));
}

TEST_CASE("solver configuration") {
  SolverConfig bad;
  bad.time_limit_seconds = -1;
  CHECK_THROWS_AS(bad.validate(), MatchError);
  SolverConfig nodes;
  nodes.node_limit = 0;
  CHECK_THROWS_AS(nodes.validate(), MatchError);
}

TEST_CASE("a truncated search reports a matching only with an incumbent") {
  const Instance inst = generate(preset("tama22"));
  SolverConfig cfg;
  cfg.node_limit = 1;
  const auto r = solve(build_model(inst, {3}), cfg);
  CHECK(r.status != SolveStatus::kOptimal);
  CHECK(r.status != SolveStatus::kInfeasible);
  CHECK(r.matching.has_value() == (r.status == SolveStatus::kFeasible));
}

TEST_CASE("external adapter") {
  const Instance inst = load("no_stable.json");
  const IpModel m = build_model(inst, {3});
  SolverConfig failing;
  failing.external_adapter = "false";
  CHECK(solve(m, failing).status == SolveStatus::kUnknown);

  SolverConfig infeasible;
  infeasible.external_adapter = R"(sh -c 'echo status INFEASIBLE > "$2"' adapter)";
  CHECK(solve(m, infeasible).status == SolveStatus::kInfeasible);

  // A claimed solution that violates the model is not trusted.
  SolverConfig lying;
  lying.external_adapter = R"(sh -c 'printf "status OPTIMAL\ny_0_0 1\n" > "$2"' adapter)";
  CHECK(solve(m, lying).status == SolveStatus::kUnknown);
}

TEST_CASE("repeated solves are identical") {
  const Instance inst = daycare::testing::tiny_instance(7);
  const IpModel m = build_model(inst, {3});
  const auto a = solve(m, {});
  const auto b = solve(m, {});
  CHECK(a.status == b.status);
  CHECK(a.assignment == b.assignment);
  CHECK(a.stats.nodes == b.stats.nodes);
}

TEST_CASE("relaxation sweep is non-increasing") {
  const Instance inst = load("no_stable.json");
  const auto rows = relaxation_sweep(inst, {});
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].result.objective == 3);
  CHECK(rows[3].result.status == SolveStatus::kInfeasible);
}
