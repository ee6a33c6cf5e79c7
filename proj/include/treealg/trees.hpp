#pragma once

// Ranked trees over an arbitrary label type, with first-order variables x_i
// ("holes") and the substitution structure on them: singleton, map, flatten,
// shape comparison, lifted relations, section enumeration, branch listing.
//
// Conventions. A tree domain is prefix closed and left-sibling closed. Every
// non-hole vertex has exactly arity(label) children. A hole x_i is a leaf,
// labels at most one vertex, never the root, and i ranges below the declared
// arity of the tree. Addresses iterate in shortlex (breadth-first) order,
// which makes shape tests and lifted relations literal set comparisons.
// arity_of is the ADL customisation point that gives each label its rank.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "treealg/common.hpp"

namespace treealg {

using Address = std::vector<int>;

// Shortlex order on addresses: by length, then lexicographically.
struct ShortLex {
  bool operator()(const Address& a, const Address& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

inline Address operator+(Address a, int k) {
  a.push_back(k);
  return a;
}

inline Address operator+(Address a, const Address& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline std::string to_string(const Address& a) {
  std::ostringstream os;
  os << '<';
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) os << '.';
    os << a[i];
  }
  os << '>';
  return os.str();
}

struct Hole {
  int index = 0;
  friend bool operator==(const Hole&, const Hole&) = default;
  friend auto operator<=>(const Hole&, const Hole&) = default;
};

template <class L>
using NodeLabel = std::variant<L, Hole>;

// Ranked symbol of a concrete alphabet.
struct Sym {
  std::string name;
  int arity = 0;
  friend bool operator==(const Sym&, const Sym&) = default;
  friend auto operator<=>(const Sym&, const Sym&) = default;
};
inline int arity_of(const Sym& s) { return s.arity; }

// Finite-set label used by section enumeration. Carries its arity explicitly
// so that empty sets stay well typed.
template <class L>
struct SetLabel {
  int arity = 0;
  std::vector<L> items;
  friend bool operator==(const SetLabel&, const SetLabel&) = default;
};
template <class L>
int arity_of(const SetLabel<L>& s) {
  return s.arity;
}

template <class L>
class Tree {
 public:
  using Label = L;
  using Nodes = std::map<Address, NodeLabel<L>, ShortLex>;

  Tree(int declared_arity, Nodes nodes)
      : declared_(declared_arity), nodes_(std::move(nodes)) {
    validate();
  }

  // sing(a): a at the root with one hole child per argument position.
  static Tree singleton(const L& a) {
    Nodes n;
    n.emplace(Address{}, NodeLabel<L>(a));
    for (int i = 0; i < arity_of(a); ++i) n.emplace(Address{i}, NodeLabel<L>(Hole{i}));
    return Tree(arity_of(a), std::move(n));
  }

  // Single nullary vertex, viewed at the given declared arity.
  static Tree leaf(int declared_arity, const L& a) {
    if (arity_of(a) != 0) throw std::invalid_argument("leaf label must be nullary");
    Nodes n;
    n.emplace(Address{}, NodeLabel<L>(a));
    return Tree(declared_arity, std::move(n));
  }

  int declared_arity() const { return declared_; }
  const Nodes& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

  const NodeLabel<L>& label(const Address& v) const {
    auto it = nodes_.find(v);
    if (it == nodes_.end())
      throw std::invalid_argument("address " + treealg::to_string(v) + " not in tree domain");
    return it->second;
  }

  bool contains(const Address& v) const { return nodes_.count(v) > 0; }
  bool is_hole(const Address& v) const { return std::holds_alternative<Hole>(label(v)); }
  int hole_index(const Address& v) const { return std::get<Hole>(label(v)).index; }
  const L& at(const Address& v) const { return std::get<L>(label(v)); }

  int child_count(const Address& v) const {
    const auto& l = label(v);
    return std::holds_alternative<Hole>(l) ? 0 : arity_of(std::get<L>(l));
  }

  // Address of the vertex labelled x_i, if the tree uses that hole.
  std::optional<Address> hole_address(int i) const {
    for (const auto& [v, l] : nodes_)
      if (std::holds_alternative<Hole>(l) && std::get<Hole>(l).index == i) return v;
    return std::nullopt;
  }

  std::vector<int> holes_used() const {
    std::vector<int> out;
    for (const auto& [v, l] : nodes_)
      if (std::holds_alternative<Hole>(l)) out.push_back(std::get<Hole>(l).index);
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const Tree& a, const Tree& b) {
    return a.declared_ == b.declared_ && a.nodes_ == b.nodes_;
  }
  friend bool operator<(const Tree& a, const Tree& b) {
    if (a.declared_ != b.declared_) return a.declared_ < b.declared_;
    return std::lexicographical_compare(a.nodes_.begin(), a.nodes_.end(), b.nodes_.begin(),
                                        b.nodes_.end());
  }

 private:
  void validate() const {
    if (nodes_.empty()) throw std::invalid_argument("tree has no vertices");
    if (declared_ < 0) throw std::invalid_argument("negative declared arity");
    if (!nodes_.count(Address{})) throw std::invalid_argument("tree has no root");
    std::map<Address, int, ShortLex> child_count_seen;
    std::map<Address, int, ShortLex> child_max;
    std::vector<bool> hole_seen(static_cast<std::size_t>(declared_), false);
    for (const auto& [v, l] : nodes_) {
      if (!v.empty()) {
        Address parent(v.begin(), v.end() - 1);
        auto pit = nodes_.find(parent);
        if (pit == nodes_.end())
          throw std::invalid_argument("domain not prefix closed at " + treealg::to_string(v));
        if (v.back() < 0) throw std::invalid_argument("negative direction in address");
        child_count_seen[parent] += 1;
        child_max[parent] = std::max(child_max[parent], v.back());
      }
      if (std::holds_alternative<Hole>(l)) {
        int i = std::get<Hole>(l).index;
        if (v.empty()) throw std::invalid_argument("hole at the root");
        if (i < 0 || i >= declared_)
          throw std::invalid_argument("hole index x" + std::to_string(i) +
                                      " outside declared arity " + std::to_string(declared_));
        if (hole_seen[static_cast<std::size_t>(i)])
          throw std::invalid_argument("duplicate hole x" + std::to_string(i));
        hole_seen[static_cast<std::size_t>(i)] = true;
      }
    }
    for (const auto& [v, l] : nodes_) {
      int want = std::holds_alternative<Hole>(l) ? 0 : arity_of(std::get<L>(l));
      int have = child_count_seen.count(v) ? child_count_seen.at(v) : 0;
      if (have != want)
        throw std::invalid_argument("vertex " + treealg::to_string(v) + " has " +
                                    std::to_string(have) + " children, label arity is " +
                                    std::to_string(want));
      if (have > 0 && child_max.at(v) != have - 1)
        throw std::invalid_argument("domain not left-sibling closed at " + treealg::to_string(v));
    }
  }

  int declared_;
  Nodes nodes_;
};

// A tree used as a label, as in T(T A), ranks by its declared arity.
template <class L>
int arity_of(const Tree<L>& t) {
  return t.declared_arity();
}

// T f. Undefined iff f is undefined on some non-hole label. f must preserve
// arities, otherwise the result would not be a tree.
template <class L, class F>
auto tree_map(F&& f, const Tree<L>& t)
    -> std::optional<Tree<typename std::invoke_result_t<F, const L&>::value_type>> {
  using M = typename std::invoke_result_t<F, const L&>::value_type;
  typename Tree<M>::Nodes out;
  for (const auto& [v, l] : t.nodes()) {
    if (std::holds_alternative<Hole>(l)) {
      out.emplace(v, NodeLabel<M>(std::get<Hole>(l)));
    } else {
      std::optional<M> m = f(std::get<L>(l));
      if (!m) return std::nullopt;
      out.emplace(v, NodeLabel<M>(std::move(*m)));
    }
  }
  return Tree<M>(t.declared_arity(), std::move(out));
}

// Monad multiplication. Each outer vertex contributes the non-hole part of its
// component tree; the k-th outer child continues at the address of hole x_k in
// the component, and vanishes when the component does not use that hole.
// Outer holes become holes of the result.
template <class L>
Tree<L> flatten(const Tree<Tree<L>>& t) {
  typename Tree<L>::Nodes out;
  std::function<void(const Address&, const Address&)> place = [&](const Address& z,
                                                                  const Address& prefix) {
    const auto& l = t.label(z);
    if (std::holds_alternative<Hole>(l)) {
      out.emplace(prefix, NodeLabel<L>(std::get<Hole>(l)));
      return;
    }
    const Tree<L>& comp = std::get<Tree<L>>(l);
    if (comp.declared_arity() != t.child_count(z))
      throw std::invalid_argument("component at " + treealg::to_string(z) +
                                  " declares arity " + std::to_string(comp.declared_arity()) +
                                  ", vertex has " + std::to_string(t.child_count(z)) +
                                  " children");
    for (const auto& [w, wl] : comp.nodes())
      if (!std::holds_alternative<Hole>(wl)) out.emplace(prefix + w, wl);
    for (int k = 0; k < t.child_count(z); ++k)
      if (auto h = comp.hole_address(k)) place(z + k, prefix + *h);
  };
  place(Address{}, Address{});
  return Tree<L>(t.declared_arity(), std::move(out));
}

// Equal domains and identically numbered holes; labels are not compared.
template <class L, class M>
bool same_shape(const Tree<L>& s, const Tree<M>& t) {
  if (s.size() != t.size()) return false;
  auto it = s.nodes().begin();
  auto jt = t.nodes().begin();
  for (; it != s.nodes().end(); ++it, ++jt) {
    if (it->first != jt->first) return false;
    bool sh = std::holds_alternative<Hole>(it->second);
    bool th = std::holds_alternative<Hole>(jt->second);
    if (sh != th) return false;
    if (sh && std::get<Hole>(it->second).index != std::get<Hole>(jt->second).index) return false;
  }
  return true;
}

// theta^T: same shape and rel on every pair of corresponding non-hole labels.
template <class L, class M, class R>
bool lift_relation(R&& rel, const Tree<L>& s, const Tree<M>& t) {
  if (!same_shape(s, t)) return false;
  auto it = s.nodes().begin();
  auto jt = t.nodes().begin();
  for (; it != s.nodes().end(); ++it, ++jt) {
    if (std::holds_alternative<Hole>(it->second)) continue;
    if (!rel(std::get<L>(it->second), std::get<M>(jt->second))) return false;
  }
  return true;
}

template <class L>
struct SectionList {
  std::vector<Tree<L>> sections;
  bool had_empty_label = false;
};

// All trees obtained by picking one item per non-hole vertex, in odometer
// order: vertices in shortlex order, the last vertex varying fastest, items in
// their given order. An empty item set yields no sections and sets the flag,
// distinguishing that case from a single-section result.
template <class L>
SectionList<L> enumerate_sections(const Tree<SetLabel<L>>& t, std::size_t max_sections = 0) {
  std::vector<Address> places;
  std::vector<const std::vector<L>*> choices;
  SectionList<L> out;
  for (const auto& [v, l] : t.nodes()) {
    if (std::holds_alternative<Hole>(l)) continue;
    const auto& sl = std::get<SetLabel<L>>(l);
    for (const auto& item : sl.items)
      if (arity_of(item) != sl.arity)
        throw std::invalid_argument("set label item arity differs from the slot arity");
    if (sl.items.empty()) {
      out.had_empty_label = true;
      return out;
    }
    places.push_back(v);
    choices.push_back(&sl.items);
  }
  std::vector<std::size_t> odo(places.size(), 0);
  while (true) {
    typename Tree<L>::Nodes nodes;
    for (const auto& [v, l] : t.nodes())
      if (std::holds_alternative<Hole>(l)) nodes.emplace(v, NodeLabel<L>(std::get<Hole>(l)));
    for (std::size_t i = 0; i < places.size(); ++i)
      nodes.emplace(places[i], NodeLabel<L>((*choices[i])[odo[i]]));
    out.sections.emplace_back(t.declared_arity(), std::move(nodes));
    if (max_sections && out.sections.size() > max_sections)
      throw BudgetExceeded("section enumeration exceeded its budget");
    std::size_t i = places.size();
    while (i > 0) {
      --i;
      if (++odo[i] < choices[i]->size()) break;
      odo[i] = 0;
      if (i == 0) return out;
    }
    if (places.empty()) return out;
  }
}

// Subtree rooted at v, re-addressed to its root. Hole numbering is kept, so
// the subtree lives at the declared arity the caller assigns.
template <class L>
Tree<L> subtree(const Tree<L>& t, const Address& v, int declared_arity) {
  typename Tree<L>::Nodes out;
  for (const auto& [w, l] : t.nodes()) {
    if (w.size() < v.size() || !std::equal(v.begin(), v.end(), w.begin())) continue;
    out.emplace(Address(w.begin() + static_cast<std::ptrdiff_t>(v.size()), w.end()), l);
  }
  return Tree<L>(declared_arity, std::move(out));
}

// Replaces the subtree at v by s. The spliced tree keeps t's declared arity;
// s's holes must not collide with holes remaining elsewhere in t.
template <class L>
Tree<L> splice(const Tree<L>& t, const Address& v, const Tree<L>& s) {
  typename Tree<L>::Nodes out;
  for (const auto& [w, l] : t.nodes()) {
    if (w.size() >= v.size() && std::equal(v.begin(), v.end(), w.begin())) continue;
    out.emplace(w, l);
  }
  for (const auto& [w, l] : s.nodes()) out.emplace(v + w, l);
  return Tree<L>(t.declared_arity(), std::move(out));
}

// Maximal paths from the root, as direction words; for a finite tree these are
// exactly the leaf addresses, in shortlex order.
template <class L>
std::vector<Address> branches(const Tree<L>& t) {
  std::vector<Address> out;
  for (const auto& [v, l] : t.nodes())
    if (t.child_count(v) == 0) out.push_back(v);
  return out;
}

// Random tree over the given letters with at most size_bound vertices, in the
// arity slot declared_arity. Holes are used at most once each and never at the
// root. Deterministic in the generator state. Throws when no tree fits, for
// example when there is no nullary letter and no hole left to close a slot.
template <class L>
Tree<L> random_tree_over(const std::vector<L>& letters, int declared_arity, int size_bound,
                         std::mt19937_64& rng, int hole_percent = 35) {
  if (size_bound < 1) throw std::invalid_argument("size bound must be positive");
  typename Tree<L>::Nodes nodes;
  std::vector<Address> pending{Address{}};
  std::vector<bool> hole_used(static_cast<std::size_t>(declared_arity), false);
  int placed = 0;
  while (!pending.empty()) {
    Address v = pending.front();
    pending.erase(pending.begin());
    int capacity = size_bound - placed - static_cast<int>(pending.size());
    std::vector<int> unused_holes;
    for (int i = 0; i < declared_arity; ++i)
      if (!hole_used[static_cast<std::size_t>(i)]) unused_holes.push_back(i);
    bool hole_ok = !v.empty() && !unused_holes.empty();
    bool prefer_hole =
        hole_ok && static_cast<int>(rng() % 100) < hole_percent;
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < letters.size(); ++i)
      if (arity_of(letters[i]) <= capacity - 1) eligible.push_back(i);
    if (prefer_hole || (eligible.empty() && hole_ok)) {
      int h = unused_holes[rng() % unused_holes.size()];
      hole_used[static_cast<std::size_t>(h)] = true;
      nodes.emplace(v, NodeLabel<L>(Hole{h}));
      ++placed;
      continue;
    }
    if (eligible.empty())
      throw std::invalid_argument("letters cannot close a tree within the size bound");
    const L& pick = letters[eligible[rng() % eligible.size()]];
    nodes.emplace(v, NodeLabel<L>(pick));
    ++placed;
    for (int k = 0; k < arity_of(pick); ++k) pending.push_back(v + k);
  }
  return Tree<L>(declared_arity, std::move(nodes));
}

// Canonical term string: name(child,...,child) with holes printed as x<i>.
template <class L, class NameFn>
std::string to_term_string(const Tree<L>& t, NameFn&& name, const Address& at = Address{}) {
  const auto& l = t.label(at);
  if (std::holds_alternative<Hole>(l)) return "x" + std::to_string(std::get<Hole>(l).index);
  std::ostringstream os;
  os << name(std::get<L>(l));
  int c = t.child_count(at);
  if (c > 0) {
    os << '(';
    for (int k = 0; k < c; ++k) {
      if (k) os << ',';
      os << to_term_string(t, name, at + k);
    }
    os << ')';
  }
  return os.str();
}

}  // namespace treealg
