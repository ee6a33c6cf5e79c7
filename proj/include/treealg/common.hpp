#pragma once

#include <stdexcept>
#include <string>

namespace treealg {

// Error in a text format (alphabet, term, wilke, graph, automaton, config).
// line is 1-based; -1 when the position is unknown.
struct ParseError : std::runtime_error {
  int line;
  explicit ParseError(const std::string& msg, int line = -1)
      : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line(line) {}
};

// Raised when an enumeration would exceed its configured budget. Callers that
// can degrade gracefully catch this; the CLI maps it to a dedicated exit code.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace treealg
