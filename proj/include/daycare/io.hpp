#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "daycare/model.hpp"
#include "daycare/oracle.hpp"
#include "daycare/properties.hpp"
#include "daycare/solver.hpp"
#include "daycare/types.hpp"

namespace daycare {

using Json = nlohmann::ordered_json;

// Instance files. Parse errors surface as kParse.
RawInstance raw_instance_from_json(const Json& doc);
Json raw_instance_to_json(const RawInstance& raw);
// Grade-split form of a validated instance; scores are derived from ranks.
RawInstance to_raw(const Instance& inst);

RawInstance read_raw_instance(const std::filesystem::path& path);
Instance read_instance(const std::filesystem::path& path);

// Matching files: {"assignments": {child: daycare-or-"UNMATCHED"}}, keys in
// child order. Children absent from the file are unmatched.
Matching matching_from_json(const Instance& inst, const Json& doc);
Json matching_to_json(const Instance& inst, const Matching& mu);
Matching read_matching(const Instance& inst, const std::filesystem::path& path);

Json tuple_to_json(const Instance& inst, const Tuple& t);
Json witness_to_json(const Instance& inst, const BlockingWitness& w);
Json report_to_json(const Instance& inst, const PropertyReport& report);
Json stats_to_json(const ModelStats& stats);
// Solve outcome: level, status, objective, the property report of the
// matching (when one exists) and search counters. Wall-clock time sits in a
// separate "timing" object so the rest is reproducible byte for byte.
Json solve_report_to_json(const Instance& inst, int level, const SolveResult& result, bool with_timing = true);
Json enumeration_to_json(const Instance& inst, const EnumerationReport& report);

// Flat single-child market from two CSV files:
//   children: child,grade,initial_daycare,preferences   (preferences ';'-separated)
//   daycares: daycare,grade,quota,priority               (priority ';'-separated, best first)
RawInstance import_csv(const std::filesystem::path& children_csv, const std::filesystem::path& daycares_csv);

// Plain-text renderings shared by the CLI and the goldens.
std::string render_tuple(const Instance& inst, const Tuple& t);         // (d1, d2)
std::string render_matching(const Instance& inst, const Matching& mu);  // c1=d1 c2=UNMATCHED
std::string render_witness(const Instance& inst, const BlockingWitness& w);
// "stable set: EMPTY" plus one "<outcome> | <witness>" line per certificate
// entry, or "stable set: <n>" plus the stable outcomes.
std::string render_enumeration(const Instance& inst, const EnumerationReport& report);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
// Two-space indent, trailing newline.
std::string dump(const Json& doc);

}  // namespace daycare
