#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "pltgen/state_machine.hpp"

namespace pltgen {

struct TestCase {
  std::string id;
  std::vector<std::string> events;
  Trace expected_trace;                // replay of events under prolog
  std::map<std::string, bool> prolog;  // static assignment, possibly empty
};

struct CoverageReport {
  std::vector<std::string> targets;       // sorted coverage identities
  std::vector<std::string> covered;       // sorted subset of targets
  std::map<std::string, int> hit_counts;  // per target, zero included
  double ratio = 0.0;
};

struct TestSuite {
  std::string source_model;
  std::vector<TestCase> cases;
  CoverageReport coverage;
};

enum class GenStrategy { Greedy, FewestCases };

/// Marker requesting generator-chosen static assignments per test case.
struct FreeAssignment {};

using AssignmentSpec = std::variant<std::map<std::string, bool>, FreeAssignment>;

/// Generates a suite covering every triggered transition of a flat machine.
///
/// Greedy repeatedly extends a walk from the initial state to the nearest
/// uncovered transition (shortest path, ties by transition id) and opens a
/// new case when nothing uncovered is reachable anymore. FewestCases
/// additionally attempts a single covering walk with a directed-postman
/// heuristic (duplicating deficient arcs along shortest paths) and keeps
/// whichever result has fewer cases, then fewer events.
///
/// Under FreeAssignment the generator walks all admissible assignments
/// symbolically; a walk stays admissible while at least one assignment
/// satisfies every guard passed so far. Throws UncoverableError when some
/// triggered transition is unreachable under every admissible assignment.
TestSuite generate_all_transitions(const StateMachine& sm,
                                   const AssignmentSpec& assignment,
                                   GenStrategy strategy);

/// Replays a suite's cases and reports per-target hit counts.
/// Replay failures carry the offending case id and step.
CoverageReport check_coverage(const StateMachine& sm, const TestSuite& suite);

struct RawCase {
  std::string id;
  std::vector<std::string> events;
  std::map<std::string, bool> assignment;
};

CoverageReport check_coverage(const StateMachine& sm,
                              const std::vector<RawCase>& cases);

}  // namespace pltgen
