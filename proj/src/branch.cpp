#include "treealg/branch.hpp"

#include <algorithm>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "treealg/common.hpp"

namespace treealg {

namespace {

// Mixed-radix increment, least significant position last. False on wrap.
bool advance(std::vector<std::size_t>& odo, const std::vector<std::size_t>& sizes) {
  std::size_t i = odo.size();
  while (i > 0) {
    --i;
    if (++odo[i] < sizes[i]) return true;
    odo[i] = 0;
  }
  return false;
}

}  // namespace

BranchElement branch_of(int arity, std::vector<UpSet> members) {
  std::vector<UpSet> canon;
  canon.reserve(members.size());
  for (const auto& u : members) {
    if (!u.slice) throw std::invalid_argument("branch member without a slice");
    canon.push_back(up_of(u.slice, denote(u)));
  }
  for (std::size_t i = 1; i < canon.size(); ++i)
    if (!same_slice(canon[0].slice, canon[i].slice))
      throw std::invalid_argument("branch members over different slices");
  std::vector<UpSet> kept;
  for (std::size_t i = 0; i < canon.size(); ++i) {
    bool drop = false;
    for (std::size_t j = 0; j < canon.size() && !drop; ++j) {
      if (i == j || !uleq(canon[i], canon[j])) continue;
      if (canon[i] == canon[j] && i < j) continue;
      drop = true;
    }
    if (!drop) kept.push_back(canon[i]);
  }
  std::sort(kept.begin(), kept.end(),
            [](const UpSet& a, const UpSet& b) { return a.antichain < b.antichain; });
  return BranchElement{arity, std::move(kept)};
}

bool operator==(const BranchElement& a, const BranchElement& b) {
  if (a.arity != b.arity || a.body.size() != b.body.size()) return false;
  for (std::size_t i = 0; i < a.body.size(); ++i)
    if (!(a.body[i] == b.body[i])) return false;
  return true;
}

bool bleq(const BranchElement& a, const BranchElement& b) {
  if (a.arity != b.arity) return false;
  for (const auto& u : a.body) {
    bool dominated = false;
    for (const auto& v : b.body)
      if (uleq(u, v)) {
        dominated = true;
        break;
      }
    if (!dominated) return false;
  }
  return true;
}

BranchElement bjoin(const BranchElement& a, const BranchElement& b) {
  if (a.arity != b.arity)
    throw std::invalid_argument("join of branch elements of different arities");
  std::vector<UpSet> members = a.body;
  members.insert(members.end(), b.body.begin(), b.body.end());
  return branch_of(a.arity, std::move(members));
}

BranchElement branch_bottom(int arity) { return BranchElement{arity, {}}; }

BranchElement branch_unit(const WilkeAlgebra& s, const TAElement& e) {
  return BranchElement{e.arity, {up_of(ta_slice(s, e.arity), {ta_index(s, e)})}};
}

std::string print_branch(const BranchElement& e) {
  if (e.body.empty()) return "{ }";
  std::string out = "{ ";
  for (std::size_t i = 0; i < e.body.size(); ++i) {
    if (i) out += ", ";
    out += to_string(e.body[i]);
  }
  out += " }";
  return out;
}

BranchElement branch_product(const WilkeAlgebra& s, const Tree<BranchElement>& t,
                             std::size_t budget) {
  int n = t.declared_arity();
  SlicePtr out_slice = ta_slice(s, n);
  std::vector<Address> places;
  std::vector<const BranchElement*> labels;
  for (const auto& [v, l] : t.nodes()) {
    if (std::holds_alternative<Hole>(l)) continue;
    const auto& e = std::get<BranchElement>(l);
    for (const auto& u : e.body)
      if (!same_slice(u.slice, ta_slice(s, e.arity)))
        throw std::invalid_argument("branch label over a foreign slice");
    if (e.body.empty()) return branch_bottom(n);
    places.push_back(v);
    labels.push_back(&e);
  }
  std::vector<std::size_t> outer_sizes;
  std::size_t outer_count = 1;
  for (const auto* e : labels) {
    outer_sizes.push_back(e->body.size());
    outer_count *= e->body.size();
    if (outer_count > budget)
      throw BudgetExceeded("outer section enumeration over " + std::to_string(places.size()) +
                           " vertices");
  }
  std::vector<UpSet> results;
  std::vector<std::size_t> outer(places.size(), 0);
  do {
    // Denotations of the chosen members. An empty denotation means the chosen
    // upset is top, so the inner section set is empty and the value is
    // vacuously the empty upward closure, top again.
    std::vector<std::vector<TAElement>> items(places.size());
    std::vector<std::size_t> inner_sizes(places.size(), 0);
    bool top = false;
    std::size_t inner_count = 1;
    for (std::size_t i = 0; i < places.size() && !top; ++i) {
      const UpSet& u = labels[i]->body[outer[i]];
      for (int idx : denote(u)) items[i].push_back(ta_at(s, labels[i]->arity, idx));
      if (items[i].empty()) {
        top = true;
        break;
      }
      inner_sizes[i] = items[i].size();
      inner_count *= inner_sizes[i];
      if (inner_count > budget)
        throw BudgetExceeded("inner section enumeration over " + std::to_string(places.size()) +
                             " vertices");
    }
    if (top) {
      results.push_back(up_of(out_slice, {}));
      continue;
    }
    std::vector<int> values;
    bool dropped = false;
    std::vector<std::size_t> inner(places.size(), 0);
    do {
      typename Tree<TAElement>::Nodes nodes;
      for (const auto& [v, l] : t.nodes())
        if (std::holds_alternative<Hole>(l)) nodes.emplace(v, NodeLabel<TAElement>(std::get<Hole>(l)));
      for (std::size_t i = 0; i < places.size(); ++i)
        nodes.emplace(places[i], NodeLabel<TAElement>(items[i][inner[i]]));
      auto v = ta_product(s, Tree<TAElement>(n, std::move(nodes)));
      if (!v) {
        dropped = true;
        break;
      }
      values.push_back(ta_index(s, *v));
    } while (advance(inner, inner_sizes));
    if (!dropped) results.push_back(up_of(out_slice, std::move(values)));
  } while (advance(outer, outer_sizes));
  return branch_of(n, std::move(results));
}

FiniteTreeAlgebra ta_algebra(const WilkeAlgebra& s, int max_arity) {
  FiniteTreeAlgebra out;
  out.name = "TA";
  for (int n = 0; n <= max_arity; ++n) out.slices.push_back(ta_slice(s, n));
  auto base = std::make_shared<WilkeAlgebra>(s);
  out.product = [base](const Tree<AlgElem>& t) -> std::optional<AlgElem> {
    auto decoded = tree_map(
        [&](const AlgElem& e) { return std::optional<TAElement>(ta_at(*base, e.arity, e.index)); },
        t);
    auto v = ta_product(*base, *decoded);
    if (!v) return std::nullopt;
    return AlgElem{t.declared_arity(), ta_index(*base, *v)};
  };
  return out;
}

FiniteTreeAlgebra branch_algebra(const WilkeAlgebra& s, int max_arity, std::size_t guard) {
  return lift_down(lift_up(ta_algebra(s, max_arity), guard), guard);
}

AlgElem encode_branch(const FiniteTreeAlgebra& branch, const FiniteTreeAlgebra& up,
                      const BranchElement& e) {
  std::vector<int> members;
  members.reserve(e.body.size());
  for (const auto& u : e.body) members.push_back(encode_up(up, e.arity, u).index);
  return encode_down(branch, e.arity, down_of(up.slice_ptr(e.arity), std::move(members)));
}

LawReport join_generator_formula_check(const WilkeAlgebra& s, int max_arity, std::size_t samples,
                                       std::uint64_t seed, std::size_t budget) {
  LawReport r;
  r.title = "join generator formula (sampling refuter: failures are disproofs, a pass is "
            "evidence up to the sample budget)";
  std::mt19937_64 rng(seed);
  // cl(S) per arity in the upset representation: every nonempty union of
  // principal upsets. At positive arities only port-carrying elements
  // generate, keeping the sampled sections ranked.
  std::vector<std::vector<UpSet>> cls;
  for (int m = 0; m <= max_arity; ++m) {
    SlicePtr slice = ta_slice(s, m);
    std::vector<int> gens;
    for (int i = 0; i < slice->size(); ++i)
      if (m == 0 || !ta_at(s, m, i).nullary()) gens.push_back(i);
    cls.push_back(cl_meets_upsets(slice, gens, budget));
  }
  std::vector<BranchElement> letters;
  for (int m = 0; m <= max_arity; ++m) {
    const auto& pool = cls[static_cast<std::size_t>(m)];
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int i = 0; i < 6; ++i) {
      std::vector<UpSet> body{pool[pick(rng)]};
      if (i % 2 == 0) body.push_back(pool[pick(rng)]);
      letters.push_back(branch_of(m, std::move(body)));
    }
    letters.push_back(branch_bottom(m));
  }
  for (std::size_t it = 0; it < samples; ++it) {
    int declared = static_cast<int>(it % (static_cast<std::size_t>(max_arity) + 1));
    auto t = random_tree_over(letters, declared, 4, rng);
    std::vector<Address> places;
    std::vector<std::vector<const UpSet*>> below;
    std::size_t count = 1;
    bool skip = false;
    for (const auto& [v, l] : t.nodes()) {
      if (std::holds_alternative<Hole>(l)) continue;
      const auto& e = std::get<BranchElement>(l);
      std::vector<const UpSet*> cs;
      for (const auto& c : cls[static_cast<std::size_t>(e.arity)]) {
        for (const auto& m : e.body)
          if (uleq(c, m)) {
            cs.push_back(&c);
            break;
          }
      }
      places.push_back(v);
      count *= cs.size();
      below.push_back(std::move(cs));
      if (count > budget) {
        skip = true;
        break;
      }
    }
    if (skip) {
      ++r.skipped;
      continue;
    }
    auto lhs = branch_product(s, t, budget);
    std::vector<UpSet> sup;
    if (count > 0) {
      std::vector<std::size_t> sizes;
      for (const auto& cs : below) sizes.push_back(cs.size());
      std::vector<std::size_t> odo(places.size(), 0);
      do {
        typename Tree<ClLabel>::Nodes nodes;
        for (const auto& [v, l] : t.nodes())
          if (std::holds_alternative<Hole>(l)) nodes.emplace(v, NodeLabel<ClLabel>(std::get<Hole>(l)));
        for (std::size_t i = 0; i < places.size(); ++i) {
          const auto& lab = std::get<BranchElement>(t.nodes().at(places[i]));
          nodes.emplace(places[i], NodeLabel<ClLabel>(ClLabel{lab.arity, *below[i][odo[i]]}));
        }
        auto cp = c_product(s, Tree<ClLabel>(declared, std::move(nodes)));
        if (cp) sup.push_back(*cp);
      } while (advance(odo, sizes));
    }
    auto rhs = branch_of(declared, std::move(sup));
    ++r.cases;
    if (!(lhs == rhs))
      r.add({t.size(), "join-generator",
             to_term_string(t, [](const BranchElement& e) { return print_branch(e); }),
             print_branch(lhs), print_branch(rhs)});
  }
  return r;
}

bool recognize(const WilkeAlgebra& s, const BranchElement& e, int q0) {
  if (e.arity != 0) throw std::invalid_argument("recognition needs an element of arity 0");
  if (q0 < 0 || q0 >= s.s0->size()) throw std::invalid_argument("no nullary element at that index");
  UpSet principal = up_of(ta_slice(s, 0), {ta_index(s, TAElement{0, q0, -1})});
  for (const auto& u : e.body) {
    if (!same_slice(u.slice, principal.slice))
      throw std::invalid_argument("branch element over a foreign slice");
    if (uleq(principal, u)) return true;
  }
  return false;
}

}  // namespace treealg
