#include "treealg/report.hpp"

#include <algorithm>
#include <sstream>

namespace treealg {

void LawReport::add(Failure f) {
  ++failure_count;
  auto less = [](const Failure& a, const Failure& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    if (a.witness != b.witness) return a.witness < b.witness;
    return a.law < b.law;
  };
  auto it = std::lower_bound(failures.begin(), failures.end(), f, less);
  failures.insert(it, std::move(f));
  if (failures.size() > kMaxStored) failures.pop_back();
}

std::string LawReport::to_text() const {
  std::ostringstream os;
  os << title << "\n";
  os << "cases checked: " << cases << "\n";
  if (skipped) os << "skipped (outside the comparison domain): " << skipped << "\n";
  if (passed()) {
    os << "result: PASS\n";
  } else {
    os << "result: FAIL (" << failure_count << " failures, showing " << failures.size() << ")\n";
    for (const auto& f : failures) {
      os << "  [" << f.law << "] witness: " << f.witness << "\n";
      os << "      lhs: " << f.lhs << "\n";
      os << "      rhs: " << f.rhs << "\n";
    }
  }
  return os.str();
}

}  // namespace treealg
