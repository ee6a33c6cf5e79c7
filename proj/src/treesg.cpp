#include "treealg/treesg.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>

#include "treealg/common.hpp"

namespace treealg {

namespace {

int n0_of(const WilkeAlgebra& s) { return s.s0->size(); }
int n1_of(const WilkeAlgebra& s) { return s.s1->size(); }

void check_element(const WilkeAlgebra& s, const TAElement& e) {
  if (e.arity < 0) throw std::invalid_argument("negative arity");
  if (e.nullary()) {
    if (e.value < 0 || e.value >= n0_of(s))
      throw std::invalid_argument("nullary value out of range");
  } else {
    if (e.value < 0 || e.value >= n1_of(s))
      throw std::invalid_argument("unary value out of range");
    if (e.port >= e.arity) throw std::invalid_argument("port exceeds arity");
  }
}

void check_ta_tree(const WilkeAlgebra& s, const Tree<TAElement>& t) {
  for (const auto& [at, label] : t.nodes()) {
    if (std::holds_alternative<Hole>(label)) continue;
    check_element(s, std::get<TAElement>(label));
  }
}

void check_ta_graph(const WilkeAlgebra& s, const Graph<TAElement>& g) {
  for (int v = 0; v < g.size(); ++v) {
    const auto& label = g.at(v).label;
    if (std::holds_alternative<Hole>(label)) continue;
    check_element(s, std::get<TAElement>(label));
  }
}

std::optional<TAElement> close_word(const WilkeAlgebra& s, int arity,
                                    const std::vector<int>& word, const NodeLabel<TAElement>& end) {
  if (std::holds_alternative<Hole>(end)) {
    auto p = s.fold1(word);
    if (!p) return std::nullopt;
    return TAElement{arity, *p, std::get<Hole>(end).index};
  }
  int a = std::get<TAElement>(end).value;
  if (word.empty()) return TAElement{arity, a, -1};
  auto p = s.fold1(word);
  if (!p) return std::nullopt;
  auto m = s.mixed(*p, a);
  if (!m) return std::nullopt;
  return TAElement{arity, *m, -1};
}

}  // namespace

SlicePtr ta_slice(const WilkeAlgebra& s, int n) {
  if (n < 0) throw std::invalid_argument("negative arity");
  int n0 = n0_of(s), n1 = n1_of(s);
  std::vector<std::string> names;
  for (int a = 0; a < n0; ++a) names.push_back(s.s0->name(a));
  for (int k = 0; k < n; ++k)
    for (int b = 0; b < n1; ++b) names.push_back(s.s1->name(b) + "(x" + std::to_string(k) + ")");
  std::vector<std::pair<int, int>> le;
  for (int a = 0; a < n0; ++a)
    for (int b = 0; b < n0; ++b)
      if (a != b && s.s0->leq(a, b)) le.emplace_back(a, b);
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n1; ++a)
      for (int b = 0; b < n1; ++b)
        if (a != b && s.s1->leq(a, b)) le.emplace_back(n0 + k * n1 + a, n0 + k * n1 + b);
  return std::make_shared<const PosetSlice>(std::move(names), std::move(le));
}

int ta_index(const WilkeAlgebra& s, const TAElement& e) {
  check_element(s, e);
  if (e.nullary()) return e.value;
  return n0_of(s) + e.port * n1_of(s) + e.value;
}

TAElement ta_at(const WilkeAlgebra& s, int n, int index) {
  int n0 = n0_of(s), n1 = n1_of(s);
  if (index < 0 || index >= n0 + n * n1) throw std::invalid_argument("index out of range");
  if (index < n0) return TAElement{n, index, -1};
  int r = index - n0;
  return TAElement{n, r % n1, r / n1};
}

std::string print_ta(const WilkeAlgebra& s, const TAElement& e) {
  check_element(s, e);
  if (e.nullary()) return s.s0->name(e.value);
  return s.s1->name(e.value) + "(x" + std::to_string(e.port) + ")";
}

TAElement cylinder(const std::vector<int>& sigma, int n, const TAElement& a) {
  if (static_cast<int>(sigma.size()) != a.arity)
    throw std::invalid_argument("selector length does not match arity");
  std::set<int> seen;
  for (int k : sigma) {
    if (k < 0 || k >= n) throw std::invalid_argument("selector value out of range");
    if (!seen.insert(k).second) throw std::invalid_argument("selector not injective");
  }
  if (a.nullary()) return TAElement{n, a.value, -1};
  return TAElement{n, a.value, sigma[a.port]};
}

std::optional<TAElement> ta_product(const WilkeAlgebra& s, const Tree<TAElement>& t) {
  check_ta_tree(s, t);
  int n = t.declared_arity();
  std::vector<int> word;
  Address at;
  for (;;) {
    const auto& label = t.label(at);
    if (std::holds_alternative<Hole>(label)) return close_word(s, n, word, label);
    const TAElement& e = std::get<TAElement>(label);
    if (e.nullary()) return close_word(s, n, word, label);
    word.push_back(e.value);
    at = at + e.port;
  }
}

Tree<TAElement> un_ta(const Tree<TAElement>& t) {
  typename Tree<TAElement>::Nodes out;
  Address at, path;
  for (;;) {
    const auto& label = t.label(at);
    if (std::holds_alternative<Hole>(label)) {
      out.emplace(path, label);
      break;
    }
    const TAElement& e = std::get<TAElement>(label);
    if (e.nullary()) {
      out.emplace(path, NodeLabel<TAElement>(TAElement{0, e.value, -1}));
      break;
    }
    out.emplace(path, NodeLabel<TAElement>(TAElement{1, e.value, 0}));
    at = at + e.port;
    path = path + 0;
  }
  return Tree<TAElement>(t.declared_arity(), std::move(out));
}

std::optional<TAElement> ta_product_regular(const WilkeAlgebra& s, const Graph<TAElement>& g) {
  check_ta_graph(s, g);
  Graph<TAElement> lasso =
      unravel_graph_cyl(g, [](const TAElement& e) -> std::pair<TAElement, std::vector<int>> {
        if (e.nullary()) return {TAElement{0, e.value, -1}, {}};
        return {TAElement{1, e.value, 0}, {e.port}};
      });
  int n = g.declared_arity();
  std::vector<int> word;
  std::map<int, std::size_t> visited;
  int v = lasso.root();
  for (;;) {
    const auto& label = lasso.at(v).label;
    if (std::holds_alternative<Hole>(label) || std::get<TAElement>(label).nullary())
      return close_word(s, n, word, label);
    auto it = visited.find(v);
    if (it != visited.end()) {
      UPWord u;
      u.prefix.assign(word.begin(), word.begin() + it->second);
      u.loop.assign(word.begin() + it->second, word.end());
      auto val = up_product(s, u);
      if (!val) return std::nullopt;
      return TAElement{n, *val, -1};
    }
    visited.emplace(v, word.size());
    word.push_back(std::get<TAElement>(label).value);
    v = lasso.at(v).succ[0];
  }
}

ClLabel principal_cl(const WilkeAlgebra& s, const TAElement& e) {
  return ClLabel{e.arity, up_of(ta_slice(s, e.arity), {ta_index(s, e)})};
}

std::string print_cl(const WilkeAlgebra& s, const ClLabel& l) {
  (void)s;
  return to_string(l.set);
}

namespace {

void check_cl_tree(const WilkeAlgebra& s, const Tree<ClLabel>& t) {
  for (const auto& [at, label] : t.nodes()) {
    if (std::holds_alternative<Hole>(label)) continue;
    const ClLabel& c = std::get<ClLabel>(label);
    if (c.arity < 0 || !same_slice(c.set.slice, ta_slice(s, c.arity)))
      throw std::invalid_argument("label upset lives on the wrong slice");
  }
}

void check_cl_graph(const WilkeAlgebra& s, const Graph<ClLabel>& g) {
  for (int v = 0; v < g.size(); ++v) {
    const auto& label = g.at(v).label;
    if (std::holds_alternative<Hole>(label)) continue;
    const ClLabel& c = std::get<ClLabel>(label);
    if (c.arity < 0 || !same_slice(c.set.slice, ta_slice(s, c.arity)))
      throw std::invalid_argument("label upset lives on the wrong slice");
  }
}

}  // namespace

TraceSet traces_finite(const WilkeAlgebra& s, const Tree<ClLabel>& t) {
  check_cl_tree(s, t);
  int n = t.declared_arity();
  int n0 = n0_of(s), n1 = n1_of(s);
  std::vector<int> values;
  bool flag = false;

  // Walk every branch carrying the set of letter-fold values its choice words
  // can reach, together with whether some choice word folds to undefined.
  std::function<void(const Address&, const std::set<int>&, bool, bool)> visit =
      [&](const Address& at, const std::set<int>& vals, bool eps, bool undef) {
        const auto& label = t.label(at);
        if (std::holds_alternative<Hole>(label)) {
          int k = std::get<Hole>(label).index;
          for (int v : vals) values.push_back(n0 + k * n1 + v);
          flag = flag || undef;
          return;
        }
        const ClLabel& c = std::get<ClLabel>(label);
        if (c.arity == 0) {
          bool closed = false;
          for (int a : denote(c.set)) {
            closed = true;
            if (eps) values.push_back(a);
            for (int v : vals) {
              auto m = s.mixed(v, a);
              if (m)
                values.push_back(*m);
              else
                flag = true;
            }
          }
          flag = flag || (undef && closed);
          return;
        }
        for (int k = 0; k < c.arity; ++k) {
          std::set<int> next;
          bool nundef = false;
          for (int b = 0; b < n1; ++b) {
            if (!member(c.set, n0 + k * n1 + b)) continue;
            if (eps) next.insert(b);
            nundef = nundef || undef;
            for (int v : vals) {
              auto p = s.binary(v, b);
              if (p)
                next.insert(*p);
              else
                nundef = true;
            }
          }
          if (!next.empty() || nundef) visit(at + k, next, false, nundef);
        }
      };
  visit(Address{}, {}, true, false);
  return TraceSet{up_of(ta_slice(s, n), values), flag};
}

namespace {

// The limit-set reduction for regular trees runs over an auxiliary Wilke
// algebra of upward-closed sets: its S1 sort holds the upsets of the base S1,
// and its S0 sort holds the upsets of the base S0 together with the pairs
// (J, k) and (1, k) that remember a pending hole at port k.  Sets are kept as
// bitmasks over the base sorts, each extended with a dead letter (the top bit)
// that records choice words whose folds leave the tables; the dead letter is
// absorbing, so the auxiliary tables are total and a branch is flagged exactly
// when its limit value carries the dead bit.
struct UpsetAlgebra {
  std::vector<std::uint64_t> masks1, masks0;
  std::map<std::uint64_t, int> index1, index0;
  int ports = 0;
  int pair_width = 0;  // masks1 count plus one slot for the unit
  std::unique_ptr<WilkeAlgebra> alg;

  int pair_index(int j, int k) const {
    return static_cast<int>(masks0.size()) + k * pair_width + j;
  }
  int unit_slot() const { return static_cast<int>(masks1.size()); }
};

std::uint64_t up_close(const PosetSlice& slice, std::uint64_t mask) {
  std::uint64_t out = mask;
  for (int i = 0; i < slice.size(); ++i)
    if (mask & (std::uint64_t{1} << i))
      for (int j = 0; j < slice.size(); ++j)
        if (slice.leq(i, j)) out |= std::uint64_t{1} << j;
  return out;
}

// Masks over the slice plus the dead letter: the real part must be upward
// closed, the dead bit is free.
std::vector<std::uint64_t> all_upsets(const PosetSlice& slice, std::size_t guard) {
  if (slice.size() >= 20) throw BudgetExceeded("upset enumeration over a sort of size 20 or more");
  std::vector<std::uint64_t> out;
  std::uint64_t dead = std::uint64_t{1} << slice.size();
  for (std::uint64_t mask = 0; mask < (dead << 1); ++mask) {
    if (up_close(slice, mask & (dead - 1)) != (mask & (dead - 1))) continue;
    out.push_back(mask);
    if (out.size() > guard) throw BudgetExceeded("upset enumeration exceeded the guard");
  }
  return out;
}

// Closure of the seed set under binary products with a defined table entry.
std::set<int> product_closure(const WilkeAlgebra& s, std::set<int> seed) {
  for (bool grew = true; grew;) {
    grew = false;
    std::set<int> fresh;
    for (int u : seed)
      for (int v : seed) {
        auto p = s.binary(u, v);
        if (p && !seed.count(*p)) fresh.insert(*p);
      }
    for (int v : fresh) {
      seed.insert(v);
      grew = true;
    }
  }
  return seed;
}

// True when the word s e e e... has no evaluation of the shape
// prefix-fold * (segment-fold)^omega through the tables. Repetitions may be
// regrouped, so any evaluable power of e (and any prefix that absorbs some
// segments) rescues the word. s = -1 stands for the empty prefix.
bool unevaluable_repetition(const WilkeAlgebra& s, int prefix, int e) {
  std::set<int> powers = product_closure(s, {e});
  for (int p : powers) {
    auto ow = s.omega_power(p);
    if (!ow) continue;
    if (prefix < 0) return false;
    if (s.mixed(prefix, *ow)) return false;
    for (int q : powers) {
      auto sp = s.binary(prefix, q);
      if (sp && s.mixed(*sp, *ow)) return false;
    }
  }
  return true;
}

UpsetAlgebra build_upset_algebra(const WilkeAlgebra& s, int ports, std::size_t guard) {
  UpsetAlgebra t;
  t.ports = ports;
  t.masks1 = all_upsets(*s.s1, guard);
  t.masks0 = all_upsets(*s.s0, guard);
  for (std::size_t i = 0; i < t.masks1.size(); ++i) t.index1.emplace(t.masks1[i], (int)i);
  for (std::size_t i = 0; i < t.masks0.size(); ++i) t.index0.emplace(t.masks0[i], (int)i);
  t.pair_width = static_cast<int>(t.masks1.size()) + 1;
  std::size_t zero_count = t.masks0.size() + static_cast<std::size_t>(ports) * t.pair_width;
  if (zero_count > guard) throw BudgetExceeded("upset algebra sort exceeded the guard");

  std::vector<std::string> names1, names0;
  for (auto m : t.masks1) names1.push_back("J" + std::to_string(m));
  for (auto m : t.masks0) names0.push_back("K" + std::to_string(m));
  for (int k = 0; k < ports; ++k) {
    for (std::size_t j = 0; j < t.masks1.size(); ++j)
      names0.push_back("P" + std::to_string(t.masks1[j]) + "." + std::to_string(k));
    names0.push_back("U." + std::to_string(k));
  }
  t.alg = std::make_unique<WilkeAlgebra>(
      std::make_shared<const PosetSlice>(std::move(names0), std::vector<std::pair<int, int>>{}),
      std::make_shared<const PosetSlice>(std::move(names1), std::vector<std::pair<int, int>>{}));

  int n0 = n0_of(s), n1 = n1_of(s);
  std::uint64_t dead1 = std::uint64_t{1} << n1;
  std::uint64_t dead0 = std::uint64_t{1} << n0;

  auto product1 = [&](std::uint64_t im, std::uint64_t jm) {
    std::uint64_t out = 0;
    for (int b = 0; b <= n1; ++b) {
      if (!(im & (std::uint64_t{1} << b))) continue;
      for (int c = 0; c <= n1; ++c) {
        if (!(jm & (std::uint64_t{1} << c))) continue;
        if (b == n1 || c == n1) {
          out |= dead1;
          continue;
        }
        auto p = s.binary(b, c);
        out |= p ? std::uint64_t{1} << *p : dead1;
      }
    }
    return up_close(*s.s1, out & (dead1 - 1)) | (out & dead1);
  };

  for (std::size_t i = 0; i < t.masks1.size(); ++i)
    for (std::size_t j = 0; j < t.masks1.size(); ++j)
      t.alg->binary_t[i][j] = t.index1.at(product1(t.masks1[i], t.masks1[j]));

  for (std::size_t i = 0; i < t.masks1.size(); ++i) {
    std::uint64_t im = t.masks1[i];
    for (std::size_t j = 0; j < t.masks0.size(); ++j) {
      std::uint64_t out = 0;
      for (int b = 0; b <= n1; ++b) {
        if (!(im & (std::uint64_t{1} << b))) continue;
        for (int a = 0; a <= n0; ++a) {
          if (!(t.masks0[j] & (std::uint64_t{1} << a))) continue;
          if (b == n1 || a == n0) {
            out |= dead0;
            continue;
          }
          auto m = s.mixed(b, a);
          out |= m ? std::uint64_t{1} << *m : dead0;
        }
      }
      t.alg->mixed_t[i][j] = t.index0.at(up_close(*s.s0, out & (dead0 - 1)) | (out & dead0));
    }
    for (int k = 0; k < ports; ++k) {
      for (std::size_t j = 0; j < t.masks1.size(); ++j)
        t.alg->mixed_t[i][t.pair_index((int)j, k)] =
            t.pair_index(t.index1.at(product1(im, t.masks1[j])), k);
      t.alg->mixed_t[i][t.pair_index(t.unit_slot(), k)] = t.pair_index((int)i, k);
    }
  }

  for (std::size_t i = 0; i < t.masks1.size(); ++i) {
    std::uint64_t im = t.masks1[i];
    std::set<int> seed;
    bool dead = (im & dead1) != 0;
    for (int b = 0; b < n1; ++b)
      if (im & (std::uint64_t{1} << b)) seed.insert(b);
    std::set<int> gen = product_closure(s, std::move(seed));
    std::uint64_t out = 0;
    for (int v : gen) {
      auto ov = s.omega_power(v);
      if (!ov) continue;
      out |= std::uint64_t{1} << *ov;
      for (int u : gen) {
        auto m = s.mixed(u, *ov);
        if (m) out |= std::uint64_t{1} << *m;
      }
    }
    bool flagged = dead;
    for (int e : gen) {
      if (flagged) break;
      flagged = unevaluable_repetition(s, -1, e);
      for (int u : gen) {
        if (flagged) break;
        flagged = unevaluable_repetition(s, u, e);
      }
    }
    if (flagged) out |= dead0;
    t.alg->omega_t[i] = t.index0.at(up_close(*s.s0, out & (dead0 - 1)) | (out & dead0));
  }
  return t;
}

}  // namespace

TraceSet traces_regular(const WilkeAlgebra& s, const Graph<ClLabel>& g, std::size_t guard) {
  check_cl_graph(s, g);
  int n = g.declared_arity();
  int n0 = n0_of(s), n1 = n1_of(s);
  UpsetAlgebra t = build_upset_algebra(s, n, guard);

  AdditiveLabelling lab{graph_map(
                            [](const ClLabel& l) {
                              return Sym{"v" + std::to_string(l.arity), l.arity};
                            },
                            g),
                        {},
                        {}};
  for (int v = 0; v < g.size(); ++v) {
    const auto& label = g.at(v).label;
    if (std::holds_alternative<Hole>(label)) {
      lab.leaf[v] = t.pair_index(t.unit_slot(), std::get<Hole>(label).index);
      continue;
    }
    const ClLabel& c = std::get<ClLabel>(label);
    if (c.arity == 0) {
      std::uint64_t mask = 0;
      for (int a : denote(c.set)) mask |= std::uint64_t{1} << a;
      lab.leaf[v] = t.index0.at(mask);
      continue;
    }
    for (int k = 0; k < c.arity; ++k) {
      std::uint64_t mask = 0;
      for (int b = 0; b < n1; ++b)
        if (member(c.set, n0 + k * n1 + b)) mask |= std::uint64_t{1} << b;
      lab.edge[{v, k}] = t.index1.at(mask);
    }
  }

  LimitSet ls = limit_set(*t.alg, lab);
  std::vector<int> values;
  bool flag = ls.undefined;
  int n0c = static_cast<int>(t.masks0.size());
  for (int i : ls.values) {
    if (i < n0c) {
      if (t.masks0[i] & (std::uint64_t{1} << n0)) flag = true;
      for (int a = 0; a < n0; ++a)
        if (t.masks0[i] & (std::uint64_t{1} << a)) values.push_back(a);
      continue;
    }
    int r = i - n0c;
    int k = r / t.pair_width, j = r % t.pair_width;
    if (j == t.unit_slot()) continue;
    if (t.masks1[j] & (std::uint64_t{1} << n1)) flag = true;
    for (int b = 0; b < n1; ++b)
      if (t.masks1[j] & (std::uint64_t{1} << b)) values.push_back(n0 + k * n1 + b);
  }
  return TraceSet{up_of(ta_slice(s, n), values), flag};
}

std::optional<UpSet> c_product(const WilkeAlgebra& s, const Tree<ClLabel>& t) {
  TraceSet ts = traces_finite(s, t);
  if (ts.undefined) return std::nullopt;
  return ts.values;
}

std::optional<UpSet> c_product(const WilkeAlgebra& s, const Graph<ClLabel>& g, std::size_t guard) {
  TraceSet ts = traces_regular(s, g, guard);
  if (ts.undefined) return std::nullopt;
  return ts.values;
}

LawReport cl_subalgebra_closure_check(const WilkeAlgebra& s, int max_arity, int samples,
                                      std::uint64_t seed) {
  LawReport r;
  r.title = "closure of principal meets under products";
  int top = std::max(max_arity, 2);
  std::vector<std::vector<UpSet>> cl(top + 1);
  for (int m = 0; m <= top; ++m) {
    SlicePtr slice = ta_slice(s, m);
    std::vector<int> gens(slice->size());
    for (int i = 0; i < slice->size(); ++i) gens[i] = i;
    cl[m] = cl_meets_upsets(slice, gens);
  }

  std::mt19937_64 rng(seed);
  for (int i = 0; i < samples; ++i) {
    int n = static_cast<int>(rng() % static_cast<std::uint64_t>(max_arity + 1));
    std::vector<ClLabel> letters;
    for (int m = 0; m <= 2; ++m)
      for (int pick = 0; pick < 3; ++pick)
        letters.push_back(ClLabel{m, cl[m][rng() % cl[m].size()]});
    Tree<ClLabel> t = random_tree_over(letters, n, 6, rng);
    ++r.cases;
    auto cp = c_product(s, t);
    if (!cp || cp->antichain.empty()) {
      ++r.skipped;
      continue;
    }
    bool found = false;
    for (const auto& u : cl[n]) found = found || u == *cp;
    if (!found)
      r.add({t.size(),
             "cl-closure",
             to_term_string(t, [](const ClLabel& l) { return to_string(l.set); }),
             to_string(*cp),
             "no meet of principal upsets"});
  }
  return r;
}

}  // namespace treealg
