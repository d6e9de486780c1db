#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "daycare/generator.hpp"
#include "daycare/io.hpp"
#include "daycare/ipmodel.hpp"
#include "daycare/oracle.hpp"
#include "daycare/properties.hpp"
#include "daycare/solver.hpp"

using namespace daycare;
namespace fs = std::filesystem;

namespace {

// Exit codes are a function of the outcome alone.
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitUnknown = 3;
constexpr int kExitPropertyFails = 4;

int exit_code(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
    case SolveStatus::kFeasible: return kExitOk;
    case SolveStatus::kInfeasible: return kExitInfeasible;
    case SolveStatus::kUnknown: return kExitUnknown;
  }
  return kExitUnknown;
}

// Empty path or "-" means standard output.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    write_text(path, text);
    spdlog::info("wrote {}", path);
  }
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("daycare-match");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("DAYCARE_MATCH_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only accept a real match.
    if (level != spdlog::level::off || std::string(env) == "off")
      spdlog::set_level(level);
    else
      spdlog::warn("ignoring DAYCARE_MATCH_LOG='{}'", env);
  }
}

struct SolverFlags {
  double time_limit = 120.0;
  std::int64_t node_limit = 50'000'000;
  std::string backend = "builtin";
  std::string adapter;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--time-limit", time_limit, "Seconds before the search stops")->capture_default_str();
    cmd->add_option("--node-limit", node_limit, "Branch-and-bound nodes before the search stops")->capture_default_str();
    cmd->add_option("--backend", backend, "builtin or external")
        ->check(CLI::IsMember({"builtin", "external"}))
        ->capture_default_str();
    cmd->add_option("--adapter", adapter, "External solver command, run as <adapter> <model.lp> <solution.txt>");
  }

  SolverConfig config() const {
    SolverConfig cfg;
    cfg.time_limit_seconds = time_limit;
    cfg.node_limit = node_limit;
    if (backend == "external") {
      if (adapter.empty()) throw MatchError(ErrorCode::kInvalidConfig, "--backend external needs --adapter");
      cfg.external_adapter = adapter;
    } else if (!adapter.empty()) {
      throw MatchError(ErrorCode::kInvalidConfig, "--adapter requires --backend external");
    }
    cfg.validate();
    return cfg;
  }
};

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string comparison_table(const std::string& name_a, const std::string& name_b, const OutcomeComparison& cmp) {
  const auto& a = cmp.a;
  const auto& b = cmp.b;
  const std::pair<std::string, std::pair<std::string, std::string>> rows[] = {
      {"matched", {std::to_string(a.matched_count), std::to_string(b.matched_count)}},
      {"blocking", {std::to_string(a.blocking_count), std::to_string(b.blocking_count)}},
      {"feasible", {yes_no(a.feasibility.feasible), yes_no(b.feasibility.feasible)}},
      {"family_rational", {yes_no(a.rationality.rational), yes_no(b.rationality.rational)}},
      {"non_wasteful", {yes_no(a.non_wastefulness.non_wasteful), yes_no(b.non_wastefulness.non_wasteful)}},
      {"stable", {yes_no(a.stability.stable), yes_no(b.stability.stable)}},
  };
  std::size_t wa = name_a.size(), wb = name_b.size();
  for (const auto& [label, v] : rows) {
    wa = std::max(wa, v.first.size());
    wb = std::max(wb, v.second.size());
  }
  auto line = [&](const std::string& l, const std::string& x, const std::string& y) {
    std::string s = l + std::string(17 - l.size(), ' ');
    s += std::string(wa - x.size(), ' ') + x + "  " + std::string(wb - y.size(), ' ') + y + "\n";
    return s;
  };
  std::string out = line("", name_a, name_b);
  for (const auto& [label, v] : rows) out += line(label, v.first, v.second);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Daycare matching with siblings: solve, check and certify allocations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "daycare-match 0.1.0");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve the 0-1 program at a strictness level");
  std::string solve_instance, solve_out, solve_report;
  int solve_level = 3;
  SolverFlags solve_flags;
  solve_cmd->add_option("instance", solve_instance, "Instance JSON")->required();
  solve_cmd->add_option("--level", solve_level, "0: NW only; L: no blocking by families of size <= L")
      ->check(CLI::Range(0, 3))
      ->capture_default_str();
  solve_cmd->add_option("--out", solve_out, "Matching JSON (default: stdout)");
  solve_cmd->add_option("--report", solve_report, "Report JSON");
  solve_flags.add_to(solve_cmd);

  // check
  auto* check_cmd = app.add_subcommand("check", "Check feasibility, rationality, non-wastefulness and stability");
  std::string check_instance, check_matching, check_report;
  check_cmd->add_option("instance", check_instance, "Instance JSON")->required();
  check_cmd->add_option("matching", check_matching, "Matching JSON")->required();
  check_cmd->add_option("--report", check_report, "Report JSON (default: stdout)");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "Enumerate every outcome of a tiny market");
  std::string oracle_instance, oracle_json;
  std::uint64_t oracle_caps = OracleCaps{}.max_search_space;
  oracle_cmd->add_option("instance", oracle_instance, "Instance JSON")->required();
  oracle_cmd->add_option("--caps", oracle_caps, "Largest search space to enumerate")->capture_default_str();
  oracle_cmd->add_option("--json", oracle_json, "Enumeration report JSON");

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "Generate a synthetic market");
  std::string gen_preset = "tiny", gen_out;
  std::optional<int> gen_children, gen_daycares;
  std::optional<double> gen_sib, gen_three, gen_twin, gen_transfer;
  std::uint64_t gen_seed = 0;
  gen_cmd->add_option("--preset", gen_preset, "Base parameters")->capture_default_str();
  gen_cmd->add_option("--children", gen_children, "Number of children");
  gen_cmd->add_option("--daycares", gen_daycares, "Number of physical daycares");
  gen_cmd->add_option("--sibling-rate", gen_sib, "Share of families with two or more children");
  gen_cmd->add_option("--three-share", gen_three, "Share of sibling families with three children");
  gen_cmd->add_option("--twin-rate", gen_twin, "Share of families holding a twin pair");
  gen_cmd->add_option("--transfer-rate", gen_transfer, "Share of children initially enrolled");
  gen_cmd->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "Instance JSON (default: stdout)");
  bool gen_list = false;
  gen_cmd->add_flag("--list-presets", gen_list, "Print preset names and exit");

  // compare
  auto* cmp_cmd = app.add_subcommand("compare", "Compare two outcomes side by side");
  std::string cmp_instance, cmp_a, cmp_b, cmp_json;
  cmp_cmd->add_option("instance", cmp_instance, "Instance JSON")->required();
  cmp_cmd->add_option("a", cmp_a, "First matching JSON")->required();
  cmp_cmd->add_option("b", cmp_b, "Second matching JSON")->required();
  cmp_cmd->add_option("--json", cmp_json, "Both reports as JSON");

  // export
  auto* export_cmd = app.add_subcommand("export", "Write the 0-1 program in LP format");
  std::string export_instance, export_out;
  int export_level = 3;
  bool export_stats = false;
  export_cmd->add_option("instance", export_instance, "Instance JSON")->required();
  export_cmd->add_option("--level", export_level, "Strictness level")->check(CLI::Range(0, 3))->capture_default_str();
  export_cmd->add_option("--out", export_out, "LP file (default: stdout)");
  export_cmd->add_flag("--stats", export_stats, "Print variable and row counts as JSON instead");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Solve levels 0 to 3 and tabulate matched counts");
  std::string sweep_instance, sweep_json;
  SolverFlags sweep_flags;
  sweep_cmd->add_option("instance", sweep_instance, "Instance JSON")->required();
  sweep_cmd->add_option("--json", sweep_json, "Per-level reports as JSON");
  sweep_flags.add_to(sweep_cmd);

  // import-csv
  auto* csv_cmd = app.add_subcommand("import-csv", "Build an instance from flat single-child CSV files");
  std::string csv_children, csv_daycares, csv_out;
  csv_cmd->add_option("children", csv_children, "child,grade,initial_daycare,preferences")->required();
  csv_cmd->add_option("daycares", csv_daycares, "daycare,grade,quota,priority")->required();
  csv_cmd->add_option("--out", csv_out, "Instance JSON (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*solve_cmd) {
      const Instance inst = read_instance(solve_instance);
      const SolverConfig cfg = solve_flags.config();
      const IpModel model = build_model(inst, {solve_level});
      spdlog::info("model: {} columns, {} rows", model.columns.size(), model.rows.size());
      const SolveResult r = solve(model, cfg);
      spdlog::info("{} objective={} nodes={} time={:.3f}s", to_string(r.status), r.objective, r.stats.nodes,
                   r.stats.runtime_seconds);
      if (r.matching) emit(solve_out, dump(matching_to_json(inst, *r.matching)));
      if (!solve_report.empty()) write_text(solve_report, dump(solve_report_to_json(inst, solve_level, r)));
      std::cerr << to_string(r.status) << " matched=" << r.objective << "\n";
      return exit_code(r.status);
    }

    if (*check_cmd) {
      const Instance inst = read_instance(check_instance);
      const Matching mu = read_matching(inst, check_matching);
      const PropertyReport report = build_report(inst, mu);
      emit(check_report, dump(report_to_json(inst, report)));
      return report.all_hold() ? kExitOk : kExitPropertyFails;
    }

    if (*oracle_cmd) {
      const Instance inst = read_instance(oracle_instance);
      OracleCaps caps;
      caps.max_search_space = oracle_caps;
      const EnumerationReport report = stable_set(inst, caps);
      std::cout << render_enumeration(inst, report);
      if (!oracle_json.empty()) write_text(oracle_json, dump(enumeration_to_json(inst, report)));
      return kExitOk;
    }

    if (*gen_cmd) {
      if (gen_list) {
        for (const auto& name : preset_names()) std::cout << name << "\n";
        return kExitOk;
      }
      GenParams p = preset(gen_preset);
      if (gen_children) p.n_children = *gen_children;
      if (gen_daycares) p.n_daycares = *gen_daycares;
      if (gen_sib) p.sibling_family_rate = *gen_sib;
      if (gen_three) p.three_child_share = *gen_three;
      if (gen_twin) p.twin_rate = *gen_twin;
      if (gen_transfer) p.transfer_rate = *gen_transfer;
      p.seed = gen_seed;
      emit(gen_out, dump(raw_instance_to_json(generate_raw(p))));
      return kExitOk;
    }

    if (*cmp_cmd) {
      const Instance inst = read_instance(cmp_instance);
      const auto cmp = compare_outcomes(inst, read_matching(inst, cmp_a), read_matching(inst, cmp_b));
      std::cout << comparison_table(fs::path(cmp_a).filename().string(), fs::path(cmp_b).filename().string(), cmp);
      if (!cmp_json.empty())
        write_text(cmp_json, dump({{"a", report_to_json(inst, cmp.a)}, {"b", report_to_json(inst, cmp.b)}}));
      return kExitOk;
    }

    if (*export_cmd) {
      const Instance inst = read_instance(export_instance);
      const IpModel model = build_model(inst, {export_level});
      emit(export_out, export_stats ? dump(stats_to_json(model_stats(model))) : export_lp(model));
      return kExitOk;
    }

    if (*sweep_cmd) {
      const Instance inst = read_instance(sweep_instance);
      const auto rows = relaxation_sweep(inst, sweep_flags.config());
      std::printf("%-6s %-11s %8s %7s %10s %9s\n", "level", "status", "matched", "stable", "nodes", "seconds");
      Json doc = Json::array();
      for (const auto& row : rows) {
        const std::string stable = row.report ? yes_no(row.report->stability.stable) : "-";
        std::printf("IP-%-3d %-11s %8d %7s %10lld %9.3f\n", row.level, std::string(to_string(row.result.status)).c_str(),
                    row.result.objective, stable.c_str(), static_cast<long long>(row.result.stats.nodes),
                    row.result.stats.runtime_seconds);
        doc.push_back(solve_report_to_json(inst, row.level, row.result));
      }
      if (!sweep_json.empty()) write_text(sweep_json, dump(doc));
      return kExitOk;
    }

    if (*csv_cmd) {
      const RawInstance raw = import_csv(csv_children, csv_daycares);
      validate_instance(raw);
      emit(csv_out, dump(raw_instance_to_json(raw)));
      return kExitOk;
    }
  } catch (const MatchError& e) {
    spdlog::error("{}", e.what());
    return kExitError;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitError;
  }
  return kExitError;
}
