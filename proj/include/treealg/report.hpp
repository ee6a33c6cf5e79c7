#pragma once

// Shared pass/fail report for the law checkers. A checker counts the cases it
// compared, the samples it had to skip, and keeps the smallest witnesses of
// any failures it found.

#include <cstddef>
#include <string>
#include <vector>

namespace treealg {

struct LawReport {
  std::string title;
  std::size_t cases = 0;
  std::size_t skipped = 0;  // samples outside the comparison domain
  std::size_t failure_count = 0;
  struct Failure {
    std::size_t weight;  // vertex count of the witness, for minimality
    std::string law;
    std::string witness;
    std::string lhs;
    std::string rhs;
  };
  // Sorted by weight then witness text; at most kMaxStored entries are kept,
  // failure_count counts them all. The minimal witness is failures.front().
  std::vector<Failure> failures;
  static constexpr std::size_t kMaxStored = 40;

  bool passed() const { return failure_count == 0; }
  void add(Failure f);
  std::string to_text() const;
};

}  // namespace treealg
