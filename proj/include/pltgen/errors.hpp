#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pltgen {

/// Base class of every error thrown by the toolkit.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A document could not be parsed or violates referential integrity.
struct ParseError : Error {
  std::string location;

  explicit ParseError(const std::string& msg, std::string loc = {})
      : Error(loc.empty() ? msg : msg + " (at " + loc + ")"),
        location(std::move(loc)) {}
};

/// Well-formed inputs used in an inconsistent way.
struct ValidationError : Error {
  using Error::Error;
};

struct UnknownFeatureError : Error {
  std::string feature;

  explicit UnknownFeatureError(const std::string& f)
      : Error("unknown feature id '" + f + "'"), feature(f) {}
};

/// enumerate_configurations would return more configurations than allowed.
struct CapExceededError : Error {
  std::size_t cap;

  explicit CapExceededError(std::size_t c)
      : Error("result exceeds configuration cap of " + std::to_string(c)),
        cap(c) {}
};

/// Model is too large for the documented brute-force bound.
struct BoundExceededError : Error {
  std::size_t max_variables;

  BoundExceededError(std::size_t actual, std::size_t bound)
      : Error("model has " + std::to_string(actual) +
              " variables, exceeding the brute-force bound of " +
              std::to_string(bound)),
        max_variables(bound) {}
};

struct UnsatisfiableError : Error {
  UnsatisfiableError() : Error("feature model has no valid configuration") {}
};

/// Replay failed at a specific step of an event sequence.
struct ReplayError : Error {
  enum class Kind { NoEnabledTransition, NondeterministicChoice, UnboundVariable };

  Kind kind;
  std::size_t step;
  std::vector<std::string> candidates;
  std::string case_id;

  ReplayError(Kind k, std::size_t s, std::vector<std::string> cand = {},
              const std::string& detail = {})
      : Error(message(k, s, cand, detail)), kind(k), step(s),
        candidates(std::move(cand)) {}

  static std::string message(Kind k, std::size_t s,
                             const std::vector<std::string>& cand,
                             const std::string& detail) {
    std::string m;
    switch (k) {
      case Kind::NoEnabledTransition:
        m = "NoEnabledTransition(" + std::to_string(s) + ")";
        break;
      case Kind::NondeterministicChoice:
        m = "NondeterministicChoice(" + std::to_string(s) + ", {";
        for (std::size_t i = 0; i < cand.size(); ++i) {
          if (i) m += ", ";
          m += cand[i];
        }
        m += "})";
        break;
      case Kind::UnboundVariable:
        m = "unbound guard variable at step " + std::to_string(s);
        break;
    }
    if (!detail.empty()) m += ": " + detail;
    return m;
  }
};

/// Pruning produced a machine that cannot serve as a test model.
struct PruneError : Error {
  using Error::Error;
};

/// Some coverage targets cannot be reached under any admissible assignment.
struct UncoverableError : Error {
  std::vector<std::string> transitions;

  explicit UncoverableError(std::vector<std::string> ts)
      : Error(message(ts)), transitions(std::move(ts)) {}

  static std::string message(const std::vector<std::string>& ts) {
    std::string m = "UncoverableTransitions([";
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (i) m += ", ";
      m += ts[i];
    }
    return m + "])";
  }
};

}  // namespace pltgen
