#include "treealg/order.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace treealg {

PosetSlice::PosetSlice(std::vector<std::string> names,
                       const std::vector<std::pair<int, int>>& le_pairs)
    : names_(std::move(names)) {
  int n = static_cast<int>(names_.size());
  leq_.assign(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) leq_[i][i] = true;
  for (auto [a, b] : le_pairs) {
    if (a < 0 || a >= n || b < 0 || b >= n) throw std::invalid_argument("order pair out of range");
    leq_[a][b] = true;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (leq_[i][k])
        for (int j = 0; j < n; ++j)
          if (leq_[k][j]) leq_[i][j] = true;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (leq_[i][j] && leq_[j][i])
        throw std::invalid_argument("order is not antisymmetric: " + names_[i] + " and " +
                                    names_[j]);
}

std::optional<int> PosetSlice::index_of(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::optional<int> PosetSlice::inf(const std::vector<int>& items) const {
  if (items.empty()) return std::nullopt;
  std::vector<int> lower;
  for (int x = 0; x < size(); ++x) {
    bool below_all = true;
    for (int i : items) below_all = below_all && leq(x, i);
    if (below_all) lower.push_back(x);
  }
  for (int g : lower) {
    bool greatest = true;
    for (int l : lower) greatest = greatest && leq(l, g);
    if (greatest) return g;
  }
  return std::nullopt;
}

std::optional<int> PosetSlice::sup(const std::vector<int>& items) const {
  if (items.empty()) return std::nullopt;
  std::vector<int> upper;
  for (int x = 0; x < size(); ++x) {
    bool above_all = true;
    for (int i : items) above_all = above_all && leq(i, x);
    if (above_all) upper.push_back(x);
  }
  for (int l : upper) {
    bool least = true;
    for (int u : upper) least = least && leq(l, u);
    if (least) return l;
  }
  return std::nullopt;
}

bool PosetSlice::operator==(const PosetSlice& other) const {
  return names_ == other.names_ && leq_ == other.leq_;
}

bool same_slice(const SlicePtr& a, const SlicePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

namespace {

void require_same(const SlicePtr& a, const SlicePtr& b) {
  if (!same_slice(a, b)) throw std::invalid_argument("operands live in different slices");
}

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

DownSet down_of(SlicePtr slice, std::vector<int> items) {
  items = sorted_unique(std::move(items));
  std::vector<int> maximal;
  for (int x : items) {
    bool dominated = false;
    for (int y : items)
      if (x != y && slice->leq(x, y)) dominated = true;
    if (!dominated) maximal.push_back(x);
  }
  return DownSet{std::move(slice), std::move(maximal)};
}

UpSet up_of(SlicePtr slice, std::vector<int> items) {
  items = sorted_unique(std::move(items));
  std::vector<int> minimal;
  for (int x : items) {
    bool dominated = false;
    for (int y : items)
      if (x != y && slice->leq(y, x)) dominated = true;
    if (!dominated) minimal.push_back(x);
  }
  return UpSet{std::move(slice), std::move(minimal)};
}

std::vector<int> denote(const DownSet& d) {
  std::vector<int> out;
  for (int x = 0; x < d.slice->size(); ++x)
    for (int m : d.antichain)
      if (d.slice->leq(x, m)) {
        out.push_back(x);
        break;
      }
  return out;
}

std::vector<int> denote(const UpSet& u) {
  std::vector<int> out;
  for (int x = 0; x < u.slice->size(); ++x)
    for (int m : u.antichain)
      if (u.slice->leq(m, x)) {
        out.push_back(x);
        break;
      }
  return out;
}

bool member(const DownSet& d, int x) {
  for (int m : d.antichain)
    if (d.slice->leq(x, m)) return true;
  return false;
}

bool member(const UpSet& u, int x) {
  for (int m : u.antichain)
    if (u.slice->leq(m, x)) return true;
  return false;
}

bool dleq(const DownSet& lhs, const DownSet& rhs) {
  require_same(lhs.slice, rhs.slice);
  for (int a : lhs.antichain) {
    bool covered = false;
    for (int b : rhs.antichain) covered = covered || lhs.slice->leq(a, b);
    if (!covered) return false;
  }
  return true;
}

bool uleq(const UpSet& lhs, const UpSet& rhs) {
  require_same(lhs.slice, rhs.slice);
  // lhs <= rhs iff rhs is a subset of lhs: every generator of rhs sits above
  // some generator of lhs.
  for (int b : rhs.antichain) {
    bool covered = false;
    for (int a : lhs.antichain) covered = covered || lhs.slice->leq(a, b);
    if (!covered) return false;
  }
  return true;
}

bool operator==(const DownSet& a, const DownSet& b) {
  return same_slice(a.slice, b.slice) && a.antichain == b.antichain;
}

bool operator==(const UpSet& a, const UpSet& b) {
  return same_slice(a.slice, b.slice) && a.antichain == b.antichain;
}

DownSet dunion(const DownSet& a, const DownSet& b) {
  require_same(a.slice, b.slice);
  std::vector<int> items = a.antichain;
  items.insert(items.end(), b.antichain.begin(), b.antichain.end());
  return down_of(a.slice, std::move(items));
}

DownSet dintersect(const DownSet& a, const DownSet& b) {
  require_same(a.slice, b.slice);
  std::vector<int> items;
  for (int x : denote(a))
    if (member(b, x)) items.push_back(x);
  return down_of(a.slice, std::move(items));
}

UpSet uunion(const UpSet& a, const UpSet& b) {
  require_same(a.slice, b.slice);
  std::vector<int> items = a.antichain;
  items.insert(items.end(), b.antichain.begin(), b.antichain.end());
  return up_of(a.slice, std::move(items));
}

UpSet uintersect(const UpSet& a, const UpSet& b) {
  require_same(a.slice, b.slice);
  std::vector<int> items;
  for (int x : denote(a))
    if (member(b, x)) items.push_back(x);
  return up_of(a.slice, std::move(items));
}

DownSet map_down(const std::function<std::optional<int>(int)>& f, const DownSet& d,
                 SlicePtr target) {
  std::vector<int> images;
  for (int x : denote(d))
    if (auto y = f(x)) images.push_back(*y);
  return down_of(std::move(target), std::move(images));
}

std::optional<UpSet> map_up(const std::function<std::optional<int>(int)>& f, const UpSet& u,
                            SlicePtr target) {
  std::vector<int> images;
  for (int x : denote(u)) {
    auto y = f(x);
    if (!y) return std::nullopt;
    images.push_back(*y);
  }
  return up_of(std::move(target), std::move(images));
}

ClMeets cl_meets(const SlicePtr& slice, const std::vector<int>& gens, std::size_t guard) {
  std::vector<int> g = sorted_unique(gens);
  if (g.size() >= 8 * sizeof(std::size_t) || (std::size_t{1} << g.size()) > guard)
    throw BudgetExceeded("cl_meets: too many generators for exhaustive subset enumeration");
  ClMeets out;
  std::set<int> elements;
  for (std::size_t mask = 1; mask < (std::size_t{1} << g.size()); ++mask) {
    std::vector<int> subset;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (mask & (std::size_t{1} << i)) subset.push_back(g[i]);
    if (auto m = slice->inf(subset))
      elements.insert(*m);
    else
      out.skipped.push_back(subset);
  }
  out.elements.assign(elements.begin(), elements.end());
  return out;
}

std::vector<UpSet> cl_meets_upsets(const SlicePtr& slice, const std::vector<int>& gens,
                                   std::size_t guard) {
  std::vector<int> g = sorted_unique(gens);
  if (g.size() >= 8 * sizeof(std::size_t) || (std::size_t{1} << g.size()) > guard)
    throw BudgetExceeded("cl_meets_upsets: too many generators");
  std::vector<UpSet> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << g.size()); ++mask) {
    std::vector<int> subset;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (mask & (std::size_t{1} << i)) subset.push_back(g[i]);
    UpSet u = up_of(slice, subset);
    bool seen = false;
    for (const auto& v : out) seen = seen || v == u;
    if (!seen) out.push_back(std::move(u));
  }
  return out;
}

namespace {

std::string antichain_string(const PosetSlice& slice, const std::vector<int>& items) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) os << ", ";
    os << slice.name(items[i]);
  }
  os << '}';
  return os.str();
}

}  // namespace

std::string to_string(const DownSet& d) { return antichain_string(*d.slice, d.antichain); }
std::string to_string(const UpSet& u) { return antichain_string(*u.slice, u.antichain); }

}  // namespace treealg
