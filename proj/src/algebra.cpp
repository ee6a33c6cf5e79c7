#include "treealg/algebra.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <set>
#include <sstream>

namespace treealg {

std::optional<AlgElem> FiniteTreeAlgebra::find(const std::string& name) const {
  for (int n = 0; n <= max_arity(); ++n)
    if (auto i = slice(n).index_of(name)) return AlgElem{n, *i};
  return std::nullopt;
}

std::vector<AlgElem> FiniteTreeAlgebra::elements() const {
  std::vector<AlgElem> out;
  for (int n = 0; n <= max_arity(); ++n)
    for (int i = 0; i < slice(n).size(); ++i) out.push_back(AlgElem{n, i});
  return out;
}

std::string FiniteTreeAlgebra::term_string(const Tree<AlgElem>& t) const {
  return to_term_string(t, [this](const AlgElem& e) { return elem_name(e); });
}

namespace {

std::string show(const FiniteTreeAlgebra& alg, const std::optional<AlgElem>& v) {
  return v ? alg.elem_name(*v) : "undefined";
}

std::vector<Sym> shape_letters(int max_arity) {
  std::vector<Sym> out;
  for (int k = 0; k <= max_arity; ++k) out.push_back(Sym{"s" + std::to_string(k), k});
  return out;
}

}  // namespace

std::vector<Tree<Sym>> all_trees(const RankedAlphabet& a, int declared, int size_bound) {
  std::vector<Tree<Sym>> out;
  auto syms = a.symbols();
  typename Tree<Sym>::Nodes nodes;
  std::vector<Address> pending{Address{}};
  unsigned hole_mask = 0;

  std::function<void(int)> go = [&](int placed) {
    if (pending.empty()) {
      out.emplace_back(declared, nodes);
      return;
    }
    Address v = pending.front();
    pending.erase(pending.begin());
    if (!v.empty()) {
      for (int h = 0; h < declared; ++h) {
        if (hole_mask & (1u << h)) continue;
        nodes.emplace(v, Hole{h});
        hole_mask |= 1u << h;
        go(placed + 1);
        hole_mask &= ~(1u << h);
        nodes.erase(v);
      }
    }
    for (const auto& s : syms) {
      // Every open slot still costs at least one vertex.
      if (placed + 1 + static_cast<int>(pending.size()) + s.arity > size_bound) continue;
      nodes.emplace(v, s);
      for (int k = 0; k < s.arity; ++k) pending.push_back(v + k);
      go(placed + 1);
      for (int k = 0; k < s.arity; ++k) pending.pop_back();
      nodes.erase(v);
    }
    pending.insert(pending.begin(), v);
  };
  go(0);
  return out;
}

std::vector<Tree<Sym>> all_trees_depth(const RankedAlphabet& a, int declared, int depth_bound) {
  std::vector<Tree<Sym>> out;
  auto syms = a.symbols();
  typename Tree<Sym>::Nodes nodes;
  std::vector<std::pair<Address, int>> pending{{Address{}, depth_bound}};
  unsigned hole_mask = 0;

  std::function<void()> go = [&]() {
    if (pending.empty()) {
      out.emplace_back(declared, nodes);
      return;
    }
    auto [v, depth] = pending.front();
    pending.erase(pending.begin());
    if (depth >= 1) {
      if (!v.empty()) {
        for (int h = 0; h < declared; ++h) {
          if (hole_mask & (1u << h)) continue;
          nodes.emplace(v, Hole{h});
          hole_mask |= 1u << h;
          go();
          hole_mask &= ~(1u << h);
          nodes.erase(v);
        }
      }
      for (const auto& s : syms) {
        if (s.arity > 0 && depth < 2) continue;
        nodes.emplace(v, s);
        for (int k = 0; k < s.arity; ++k) pending.emplace_back(v + k, depth - 1);
        go();
        for (int k = 0; k < s.arity; ++k) pending.pop_back();
        nodes.erase(v);
      }
    }
    pending.insert(pending.begin(), {v, depth});
  };
  go();
  return out;
}

FiniteTreeAlgebra free_algebra(const RankedAlphabet& a, int size_bound) {
  struct Data {
    std::vector<std::vector<Tree<Sym>>> carrier;
    std::vector<std::map<Tree<Sym>, int>> index;
  };
  auto data = std::make_shared<Data>();
  FiniteTreeAlgebra alg;
  alg.name = "free(size<=" + std::to_string(size_bound) + ")";
  for (int n = 0; n <= a.max_arity(); ++n) {
    data->carrier.push_back(all_trees(a, n, size_bound));
    const auto& trees = data->carrier.back();
    data->index.emplace_back();
    std::vector<std::string> names;
    for (int i = 0; i < static_cast<int>(trees.size()); ++i) {
      data->index.back().emplace(trees[i], i);
      names.push_back(print_term(trees[i]));
    }
    std::vector<std::pair<int, int>> le;
    auto sym_le = [&a](const Sym& x, const Sym& y) { return a.leq(x, y); };
    for (int i = 0; i < static_cast<int>(trees.size()); ++i)
      for (int j = 0; j < static_cast<int>(trees.size()); ++j)
        if (i != j && lift_relation<Sym, Sym>(sym_le, trees[i], trees[j])) le.emplace_back(i, j);
    alg.slices.push_back(std::make_shared<PosetSlice>(names, le));
  }
  alg.product = [data, size_bound](const Tree<AlgElem>& t) -> std::optional<AlgElem> {
    int n = t.declared_arity();
    if (n >= static_cast<int>(data->carrier.size())) return std::nullopt;
    auto decoded = tree_map(
        [&](const AlgElem& e) {
          return std::optional<Tree<Sym>>(data->carrier[static_cast<std::size_t>(e.arity)]
                                              [static_cast<std::size_t>(e.index)]);
        },
        t);
    Tree<Sym> flat = flatten(*decoded);
    auto it = data->index[static_cast<std::size_t>(n)].find(flat);
    if (it == data->index[static_cast<std::size_t>(n)].end()) return std::nullopt;
    return AlgElem{n, it->second};
  };
  return alg;
}

RankedAlphabet carrier_alphabet(const FiniteTreeAlgebra& alg) {
  std::vector<std::vector<std::string>> names_by_arity;
  std::vector<std::pair<std::string, std::string>> le;
  std::set<std::string> seen;
  for (int n = 0; n <= alg.max_arity(); ++n) {
    names_by_arity.emplace_back();
    for (int i = 0; i < alg.slice(n).size(); ++i) {
      const std::string& name = alg.slice(n).name(i);
      if (!valid_symbol_name(name) || !seen.insert(name).second)
        throw std::invalid_argument("carrier name not usable as a symbol: " + name);
      names_by_arity.back().push_back(name);
      for (int j = 0; j < alg.slice(n).size(); ++j)
        if (i != j && alg.slice(n).leq(i, j)) le.emplace_back(name, alg.slice(n).name(j));
    }
  }
  return RankedAlphabet(names_by_arity, le);
}

Tree<AlgElem> decode_term(const FiniteTreeAlgebra& alg, const Tree<Sym>& t) {
  auto decoded = tree_map(
      [&](const Sym& s) -> std::optional<AlgElem> {
        if (s.arity > alg.max_arity())
          throw std::invalid_argument("no carrier slice of arity " + std::to_string(s.arity));
        auto i = alg.slice(s.arity).index_of(s.name);
        if (!i) throw std::invalid_argument("no carrier element named " + s.name);
        return AlgElem{s.arity, *i};
      },
      t);
  return *decoded;
}

namespace {

// All antichains of the slice, each sorted ascending; the empty antichain is
// included. Deterministic subset order.
std::vector<std::vector<int>> antichains(const PosetSlice& slice, std::size_t guard) {
  int n = slice.size();
  if (n >= 30 || (std::size_t{1} << n) > guard)
    throw BudgetExceeded("antichain enumeration over " + std::to_string(n) + " elements");
  std::vector<std::vector<int>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<int> items;
    for (int i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) items.push_back(i);
    bool anti = true;
    for (int x : items)
      for (int y : items)
        if (x != y && slice.leq(x, y)) anti = false;
    if (anti) out.push_back(std::move(items));
  }
  return out;
}

struct LiftData {
  FiniteTreeAlgebra base;
  std::vector<std::vector<std::vector<int>>> chains;       // per arity, per element
  std::vector<std::map<std::vector<int>, int>> index;      // antichain -> element
};

std::shared_ptr<LiftData> lift_carrier(const FiniteTreeAlgebra& alg, std::size_t guard, bool down,
                                       FiniteTreeAlgebra& out) {
  auto data = std::make_shared<LiftData>();
  data->base = alg;
  for (int n = 0; n <= alg.max_arity(); ++n) {
    data->chains.push_back(antichains(alg.slice(n), guard));
    data->index.emplace_back();
    const auto& chains = data->chains.back();
    std::vector<std::string> names;
    for (int i = 0; i < static_cast<int>(chains.size()); ++i) {
      data->index.back().emplace(chains[i], i);
      if (down)
        names.push_back(to_string(DownSet{alg.slice_ptr(n), chains[i]}));
      else
        names.push_back(to_string(UpSet{alg.slice_ptr(n), chains[i]}));
    }
    std::vector<std::pair<int, int>> le;
    for (int i = 0; i < static_cast<int>(chains.size()); ++i)
      for (int j = 0; j < static_cast<int>(chains.size()); ++j) {
        if (i == j) continue;
        bool rel = down ? dleq(DownSet{alg.slice_ptr(n), chains[i]},
                               DownSet{alg.slice_ptr(n), chains[j]})
                        : uleq(UpSet{alg.slice_ptr(n), chains[i]},
                               UpSet{alg.slice_ptr(n), chains[j]});
        if (rel) le.emplace_back(i, j);
      }
    out.slices.push_back(std::make_shared<PosetSlice>(names, le));
  }
  return data;
}

Tree<SetLabel<AlgElem>> denoted_labels(const LiftData& data, const Tree<AlgElem>& t, bool down) {
  auto mapped = tree_map(
      [&](const AlgElem& e) {
        const auto& chain = data.chains[static_cast<std::size_t>(e.arity)]
                                       [static_cast<std::size_t>(e.index)];
        auto slice = data.base.slice_ptr(e.arity);
        std::vector<int> items = down ? denote(DownSet{slice, chain}) : denote(UpSet{slice, chain});
        SetLabel<AlgElem> label{e.arity, {}};
        for (int i : items) label.items.push_back(AlgElem{e.arity, i});
        return std::optional<SetLabel<AlgElem>>(std::move(label));
      },
      t);
  return *mapped;
}

constexpr std::size_t kSectionBudget = std::size_t{1} << 22;

}  // namespace

FiniteTreeAlgebra lift_down(const FiniteTreeAlgebra& alg, std::size_t guard) {
  FiniteTreeAlgebra out;
  out.name = "D(" + alg.name + ")";
  auto data = lift_carrier(alg, guard, true, out);
  out.product = [data](const Tree<AlgElem>& t) -> std::optional<AlgElem> {
    int n = t.declared_arity();
    if (n >= static_cast<int>(data->chains.size())) return std::nullopt;
    auto sections = enumerate_sections(denoted_labels(*data, t, true), kSectionBudget);
    std::vector<int> values;
    for (const auto& s : sections.sections)
      if (auto v = data->base.product(s)) values.push_back(v->index);
    auto canon = down_of(data->base.slice_ptr(n), std::move(values));
    return AlgElem{n, data->index[static_cast<std::size_t>(n)].at(canon.antichain)};
  };
  return out;
}

FiniteTreeAlgebra lift_up(const FiniteTreeAlgebra& alg, std::size_t guard) {
  FiniteTreeAlgebra out;
  out.name = "U(" + alg.name + ")";
  auto data = lift_carrier(alg, guard, false, out);
  out.product = [data](const Tree<AlgElem>& t) -> std::optional<AlgElem> {
    int n = t.declared_arity();
    if (n >= static_cast<int>(data->chains.size())) return std::nullopt;
    auto sections = enumerate_sections(denoted_labels(*data, t, false), kSectionBudget);
    std::vector<int> values;
    for (const auto& s : sections.sections) {
      auto v = data->base.product(s);
      if (!v) return std::nullopt;
      values.push_back(v->index);
    }
    auto canon = up_of(data->base.slice_ptr(n), std::move(values));
    return AlgElem{n, data->index[static_cast<std::size_t>(n)].at(canon.antichain)};
  };
  return out;
}

AlgElem encode_down(const FiniteTreeAlgebra& lifted, int arity, const DownSet& d) {
  auto canon = down_of(d.slice, denote(d));
  auto i = lifted.slice(arity).index_of(to_string(canon));
  if (!i) throw std::invalid_argument("downset not present in the lifted carrier");
  return AlgElem{arity, *i};
}

AlgElem encode_up(const FiniteTreeAlgebra& lifted, int arity, const UpSet& u) {
  auto canon = up_of(u.slice, denote(u));
  auto i = lifted.slice(arity).index_of(to_string(canon));
  if (!i) throw std::invalid_argument("upset not present in the lifted carrier");
  return AlgElem{arity, *i};
}

AlgebraMorphism embed_down(const FiniteTreeAlgebra& alg) {
  AlgebraMorphism m;
  m.name = "eta(" + alg.name + ")";
  m.source = alg;
  m.target = lift_down(alg);
  FiniteTreeAlgebra target = m.target;
  std::vector<SlicePtr> base = alg.slices;
  m.map = [target, base](const AlgElem& a) {
    return encode_down(target, a.arity, down_of(base[static_cast<std::size_t>(a.arity)], {a.index}));
  };
  return m;
}

AlgebraMorphism embed_up(const FiniteTreeAlgebra& alg) {
  AlgebraMorphism m;
  m.name = "zeta(" + alg.name + ")";
  m.source = alg;
  m.target = lift_up(alg);
  FiniteTreeAlgebra target = m.target;
  std::vector<SlicePtr> base = alg.slices;
  m.map = [target, base](const AlgElem& a) {
    return encode_up(target, a.arity, up_of(base[static_cast<std::size_t>(a.arity)], {a.index}));
  };
  return m;
}

FiniteTreeAlgebra product_algebra(const FiniteTreeAlgebra& a, const FiniteTreeAlgebra& b) {
  if (a.max_arity() != b.max_arity())
    throw std::invalid_argument("product of algebras with different arities");
  FiniteTreeAlgebra out;
  out.name = a.name + "*" + b.name;
  std::vector<int> b_sizes;
  for (int n = 0; n <= a.max_arity(); ++n) {
    int na = a.slice(n).size();
    int nb = b.slice(n).size();
    b_sizes.push_back(nb);
    std::vector<std::string> names;
    std::vector<std::pair<int, int>> le;
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < nb; ++j)
        names.push_back("(" + a.slice(n).name(i) + "," + b.slice(n).name(j) + ")");
    for (int i = 0; i < na * nb; ++i)
      for (int j = 0; j < na * nb; ++j)
        if (i != j && a.slice(n).leq(i / nb, j / nb) && b.slice(n).leq(i % nb, j % nb))
          le.emplace_back(i, j);
    out.slices.push_back(std::make_shared<PosetSlice>(names, le));
  }
  FiniteTreeAlgebra pa = a;
  FiniteTreeAlgebra pb = b;
  out.product = [pa, pb, b_sizes](const Tree<AlgElem>& t) -> std::optional<AlgElem> {
    int n = t.declared_arity();
    if (n >= static_cast<int>(b_sizes.size())) return std::nullopt;
    auto left = tree_map(
        [&](const AlgElem& e) {
          return std::optional<AlgElem>(AlgElem{e.arity, e.index / b_sizes[static_cast<std::size_t>(e.arity)]});
        },
        t);
    auto right = tree_map(
        [&](const AlgElem& e) {
          return std::optional<AlgElem>(AlgElem{e.arity, e.index % b_sizes[static_cast<std::size_t>(e.arity)]});
        },
        t);
    auto va = pa.product(*left);
    auto vb = pb.product(*right);
    if (!va || !vb) return std::nullopt;
    return AlgElem{n, va->index * b_sizes[static_cast<std::size_t>(n)] + vb->index};
  };
  return out;
}

std::pair<AlgebraMorphism, AlgebraMorphism> product_projections(const FiniteTreeAlgebra& a,
                                                                const FiniteTreeAlgebra& b) {
  FiniteTreeAlgebra prod = product_algebra(a, b);
  std::vector<int> b_sizes;
  for (int n = 0; n <= b.max_arity(); ++n) b_sizes.push_back(b.slice(n).size());
  AlgebraMorphism p0{"pr0", prod, a, [b_sizes](const AlgElem& e) {
                       return AlgElem{e.arity, e.index / b_sizes[static_cast<std::size_t>(e.arity)]};
                     }};
  AlgebraMorphism p1{"pr1", prod, b, [b_sizes](const AlgElem& e) {
                       return AlgElem{e.arity, e.index % b_sizes[static_cast<std::size_t>(e.arity)]};
                     }};
  return {std::move(p0), std::move(p1)};
}

FiniteTreeAlgebra naive_example_algebra(int max_arity) {
  FiniteTreeAlgebra alg;
  alg.name = "naive-occurrence";
  for (int n = 0; n <= max_arity; ++n) {
    std::vector<std::string> names{"0_" + std::to_string(n), "1_" + std::to_string(n)};
    alg.slices.push_back(std::make_shared<PosetSlice>(
        names, std::vector<std::pair<int, int>>{{0, 1}}));
  }
  alg.product = [max_arity](const Tree<AlgElem>& t) -> std::optional<AlgElem> {
    int n = t.declared_arity();
    if (n > max_arity) return std::nullopt;
    int occurs = 0;
    for (const auto& [v, l] : t.nodes())
      if (!std::holds_alternative<Hole>(l) && std::get<AlgElem>(l).index == 1) occurs = 1;
    return AlgElem{n, occurs};
  };
  return alg;
}

FiniteTreeAlgebra corrected_example_algebra(int max_arity) {
  FiniteTreeAlgebra alg;
  alg.name = "occurrence-with-variables";
  for (int n = 0; n <= max_arity; ++n) {
    std::vector<std::string> names;
    std::vector<std::pair<int, int>> le;
    // index = mask * 2 + b, so order pairs relate equal masks only.
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      for (int b = 0; b <= 1; ++b) {
        std::string name = std::to_string(b) + "_" + std::to_string(n);
        std::string digits;
        for (int i = 0; i < n; ++i)
          if (mask & (1u << i)) digits += std::to_string(i);
        if (!digits.empty()) name += ".u" + digits;
        names.push_back(name);
      }
      le.emplace_back(static_cast<int>(mask) * 2, static_cast<int>(mask) * 2 + 1);
    }
    alg.slices.push_back(std::make_shared<PosetSlice>(names, le));
  }
  alg.product = [max_arity](const Tree<AlgElem>& t) -> std::optional<AlgElem> {
    int n = t.declared_arity();
    if (n > max_arity) return std::nullopt;
    int b = 0;
    unsigned holes = 0;
    std::function<void(const Address&)> walk = [&](const Address& v) {
      const AlgElem& e = std::get<AlgElem>(t.label(v));
      b |= e.index & 1;
      unsigned mask = static_cast<unsigned>(e.index) >> 1;
      for (int i = 0; i < e.arity; ++i) {
        if (!(mask & (1u << i))) continue;
        Address child = v + i;
        if (t.is_hole(child))
          holes |= 1u << t.hole_index(child);
        else
          walk(child);
      }
    };
    walk(Address{});
    return AlgElem{n, static_cast<int>(holes) * 2 + b};
  };
  return alg;
}

namespace {

// Unary elements are kept as their function tables over the diamond, so the
// product is literal composition and the monad laws hold by construction; the
// threshold c still jumps over the incomparable pair, breaking continuity.
FiniteTreeAlgebra threshold_algebra(bool detect_top) {
  auto diamond_le = [](int a, int b) { return a == b || a == 0 || b == 3; };
  std::vector<std::array<int, 4>> tables;
  tables.push_back({0, 0, 0, 0});  // k.bot
  tables.push_back(detect_top ? std::array<int, 4>{0, 0, 0, 3}
                              : std::array<int, 4>{0, 3, 3, 3});  // c
  tables.push_back({1, 1, 1, 1});  // k.x
  tables.push_back({2, 2, 2, 2});  // k.y
  tables.push_back({3, 3, 3, 3});  // k.top

  FiniteTreeAlgebra alg;
  alg.name = detect_top ? "threshold-top" : "threshold-bot";
  alg.slices.push_back(std::make_shared<PosetSlice>(
      std::vector<std::string>{"bot", "x", "y", "top"},
      std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 3}, {2, 3}}));
  std::vector<std::pair<int, int>> le1;
  for (int i = 0; i < static_cast<int>(tables.size()); ++i)
    for (int j = 0; j < static_cast<int>(tables.size()); ++j) {
      if (i == j) continue;
      bool below = true;
      for (int v = 0; v < 4; ++v) below = below && diamond_le(tables[i][v], tables[j][v]);
      if (below) le1.emplace_back(i, j);
    }
  alg.slices.push_back(std::make_shared<PosetSlice>(
      std::vector<std::string>{"k.bot", "c", "k.x", "k.y", "k.top"}, le1));

  alg.product = [tables](const Tree<AlgElem>& t) -> std::optional<AlgElem> {
    int n = t.declared_arity();
    if (n > 1) return std::nullopt;
    // The tree is a path; read off the unary chain down to the seed.
    std::vector<int> chain;
    std::array<int, 4> acc{0, 1, 2, 3};  // identity, for a path ending in the hole
    Address v{};
    while (true) {
      if (t.is_hole(v)) break;
      const AlgElem& e = std::get<AlgElem>(t.label(v));
      if (e.arity == 0) {
        acc = {e.index, e.index, e.index, e.index};
        break;
      }
      chain.push_back(e.index);
      v = v + 0;
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
      for (int& x : acc) x = tables[static_cast<std::size_t>(*it)][static_cast<std::size_t>(x)];
    if (n == 0) return AlgElem{0, acc[0]};
    for (int i = 0; i < static_cast<int>(tables.size()); ++i)
      if (tables[static_cast<std::size_t>(i)] == acc) return AlgElem{1, i};
    return std::nullopt;  // cannot happen: the table set is closed under composition
  };
  return alg;
}

std::size_t tt_weight(const Tree<Tree<AlgElem>>& t) {
  std::size_t w = 0;
  for (const auto& [v, l] : t.nodes())
    w += std::holds_alternative<Hole>(l) ? 1 : std::get<Tree<AlgElem>>(l).size();
  return w;
}

std::string tt_string(const FiniteTreeAlgebra& alg, const Tree<Tree<AlgElem>>& t) {
  return to_term_string(
      t, [&](const Tree<AlgElem>& comp) { return "[" + alg.term_string(comp) + "]"; });
}

int random_declared(const FiniteTreeAlgebra& alg, std::mt19937_64& rng) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(std::min(3, alg.max_arity()) + 1));
}

Tree<Tree<AlgElem>> random_tt_alg(const FiniteTreeAlgebra& alg, int declared, const Sampler& s,
                                  std::mt19937_64& rng) {
  int shape_max = std::min(2, alg.max_arity());
  auto outer = random_tree_over(shape_letters(shape_max), declared, s.outer_size, rng);
  auto letters = alg.elements();
  auto mapped = tree_map(
      [&](const Sym& sh) {
        return std::optional<Tree<AlgElem>>(random_tree_over(letters, sh.arity, s.tree_size, rng));
      },
      outer);
  return *mapped;
}

}  // namespace

FiniteTreeAlgebra threshold_top_algebra() { return threshold_algebra(true); }
FiniteTreeAlgebra threshold_bot_algebra() { return threshold_algebra(false); }

LawReport check_monad_laws(const FiniteTreeAlgebra& alg, const Sampler& s,
                           const std::vector<Tree<Tree<AlgElem>>>& extras) {
  LawReport r;
  r.title = alg.name + ": monad laws (sampling refuter: failures are disproofs, a pass is "
            "evidence up to the sample budget)";
  for (const AlgElem& a : alg.elements()) {
    auto sing = Tree<AlgElem>::singleton(a);
    auto v = alg.product(sing);
    ++r.cases;
    if (!v || !(*v == a))
      r.add({1, "unit", alg.term_string(sing), show(alg, v), alg.elem_name(a)});
  }
  auto run_tt = [&](const Tree<Tree<AlgElem>>& T) {
    auto mapped = tree_map([&](const Tree<AlgElem>& comp) { return alg.product(comp); }, T);
    if (!mapped) {
      ++r.skipped;
      return;
    }
    ++r.cases;
    auto lhs = alg.product(flatten(T));
    auto rhs = alg.product(*mapped);
    if (lhs.has_value() != rhs.has_value() || (lhs && !(*lhs == *rhs)))
      r.add({tt_weight(T), "assoc", tt_string(alg, T), show(alg, lhs), show(alg, rhs)});
  };
  for (const auto& T : extras) run_tt(T);
  std::mt19937_64 rng(s.seed);
  for (std::size_t i = 0; i < s.samples; ++i) run_tt(random_tt_alg(alg, random_declared(alg, rng), s, rng));
  // Monotonicity of the product, sampled: raise one label upward.
  auto letters = alg.elements();
  for (std::size_t i = 0; i < s.samples; ++i) {
    auto t = random_tree_over(letters, random_declared(alg, rng), s.tree_size, rng);
    auto raised = tree_map(
        [&](const AlgElem& e) {
          std::vector<int> ups;
          for (int j = 0; j < alg.slice(e.arity).size(); ++j)
            if (alg.slice(e.arity).leq(e.index, j)) ups.push_back(j);
          return std::optional<AlgElem>(AlgElem{e.arity, ups[rng() % ups.size()]});
        },
        t);
    ++r.cases;
    auto lo = alg.product(t);
    auto hi = alg.product(*raised);
    if (lo && hi && !alg.leq(*lo, *hi))
      r.add({t.size(), "monotone",
             alg.term_string(t) + " <= " + alg.term_string(*raised), show(alg, lo),
             show(alg, hi)});
  }
  return r;
}

LawReport check_morphism(const AlgebraMorphism& m, const Sampler& s) {
  LawReport r;
  r.title = m.name + ": morphism laws (sampling refuter on source-defined products)";
  for (const AlgElem& a : m.source.elements()) {
    AlgElem b = m.map(a);
    ++r.cases;
    if (b.arity != a.arity || !m.target.valid(b))
      r.add({1, "arity", m.source.elem_name(a), "arity " + std::to_string(a.arity),
             "arity " + std::to_string(b.arity)});
  }
  for (const AlgElem& a : m.source.elements())
    for (const AlgElem& b : m.source.elements()) {
      if (!(a.arity == b.arity) || !m.source.leq(a, b)) continue;
      ++r.cases;
      if (!m.target.leq(m.map(a), m.map(b)))
        r.add({1, "monotone", m.source.elem_name(a) + " <= " + m.source.elem_name(b),
               m.target.elem_name(m.map(a)), m.target.elem_name(m.map(b))});
    }
  std::mt19937_64 rng(s.seed);
  auto letters = m.source.elements();
  for (std::size_t i = 0; i < s.samples; ++i) {
    auto t = random_tree_over(letters, random_declared(m.source, rng), s.tree_size, rng);
    auto sv = m.source.product(t);
    if (!sv) {
      ++r.skipped;
      continue;
    }
    ++r.cases;
    auto img = tree_map([&](const AlgElem& e) { return std::optional<AlgElem>(m.map(e)); }, t);
    auto tv = m.target.product(*img);
    AlgElem want = m.map(*sv);
    if (!tv || !(*tv == want))
      r.add({t.size(), "preserve", m.source.term_string(t), show(m.target, tv),
             m.target.elem_name(want)});
  }
  return r;
}

namespace {

using STree = Tree<Sym>;
using SetTree = Tree<SetLabel<Sym>>;

std::vector<Sym> lower_syms(const RankedAlphabet& a, const Sym& s) {
  std::vector<Sym> out;
  for (int i = 0; i < a.slice(s.arity).size(); ++i) {
    Sym cand{a.slice(s.arity).name(i), s.arity};
    if (a.leq(cand, s)) out.push_back(cand);
  }
  return out;
}

std::set<STree> sections_set(const SetTree& t) {
  auto secs = enumerate_sections(t);
  return std::set<STree>(secs.sections.begin(), secs.sections.end());
}

// Downward closure of a family of trees under the lifted symbol order.
std::set<STree> down_close(const RankedAlphabet& a, const std::set<STree>& family) {
  std::set<STree> out;
  for (const STree& t : family) {
    auto wrapped = tree_map(
        [&](const Sym& s) { return std::optional(SetLabel<Sym>{s.arity, lower_syms(a, s)}); }, t);
    for (const auto& below : enumerate_sections(*wrapped).sections) out.insert(below);
  }
  return out;
}

SetLabel<Sym> random_down_label(const RankedAlphabet& a, int arity, std::mt19937_64& rng,
                                int empty_pct) {
  if (static_cast<int>(rng() % 100) < empty_pct) return SetLabel<Sym>{arity, {}};
  const auto& slice = a.slice(arity);
  std::set<std::string> picked;
  int count = 1 + static_cast<int>(rng() % 2);
  for (int i = 0; i < count; ++i) {
    Sym top{slice.name(static_cast<int>(rng() % static_cast<std::uint64_t>(slice.size()))),
            arity};
    for (const Sym& below : lower_syms(a, top)) picked.insert(below.name);
  }
  SetLabel<Sym> out{arity, {}};
  for (int i = 0; i < slice.size(); ++i)
    if (picked.count(slice.name(i))) out.items.push_back(Sym{slice.name(i), arity});
  return out;
}

SetTree random_set_tree(const RankedAlphabet& a, int declared, int size, std::mt19937_64& rng,
                        int empty_pct) {
  auto base = random_tree_over(a.symbols(), declared, size, rng);
  auto mapped = tree_map(
      [&](const Sym& s) { return std::optional(random_down_label(a, s.arity, rng, empty_pct)); },
      base);
  return *mapped;
}

std::string set_tree_string(const SetTree& t) {
  return to_term_string(t, [](const SetLabel<Sym>& l) {
    std::string out = "{";
    for (std::size_t i = 0; i < l.items.size(); ++i) {
      if (i) out += ",";
      out += l.items[i].name;
    }
    return out + "}";
  });
}

std::string family_string(const std::set<STree>& f) {
  std::ostringstream os;
  os << "{|" << f.size() << "|";
  std::size_t shown = 0;
  for (const auto& t : f) {
    os << (shown ? ", " : ": ") << print_term(t);
    if (++shown == 5 && f.size() > 5) {
      os << ", ...";
      break;
    }
  }
  os << "}";
  return os.str();
}

}  // namespace

LawReport check_dist_law(const RankedAlphabet& a, const Sampler& s) {
  LawReport r;
  r.title = "dist : T D -> D T distributive law (sampling refuter over materialised families)";
  int shape_max = std::min(2, a.max_arity());
  std::mt19937_64 rng(s.seed);

  // dist(flat(T)) = D flat (dist (T dist (T))) on nested set-labelled trees.
  // Labels here are kept non-empty: flat discards subtrees under unused holes,
  // and an empty label inside discarded material has no sections, which
  // silently empties the right-hand side. The sections operation is only
  // specified for non-empty labels, so the generator stays in that domain.
  for (std::size_t i = 0; i < (s.samples + 1) / 2; ++i) {
    int declared = static_cast<int>(rng() % 3);
    auto outer = random_tree_over(shape_letters(shape_max), declared, 3, rng);
    auto nested = tree_map(
        [&](const Sym& sh) { return std::optional(random_set_tree(a, sh.arity, 3, rng, 0)); },
        outer);
    ++r.cases;
    auto lhs = sections_set(flatten(*nested));
    auto inner = tree_map(
        [&](const SetTree& comp) {
          auto secs = enumerate_sections(comp);
          return std::optional(SetLabel<STree>{comp.declared_arity(), std::move(secs.sections)});
        },
        *nested);
    std::set<STree> rhs_raw;
    for (const auto& pick : enumerate_sections(*inner).sections) rhs_raw.insert(flatten(pick));
    auto rhs = down_close(a, rhs_raw);
    if (lhs != rhs)
      r.add({flatten(*nested).size(), "dist-flat",
             to_term_string(*nested, [](const SetTree& c) { return "[" + set_tree_string(c) + "]"; }),
             family_string(lhs), family_string(rhs)});
  }

  // dist(T union (t)) = union (D dist (dist (t))) on family-labelled trees.
  for (std::size_t i = 0; i < (s.samples + 3) / 4; ++i) {
    int declared = static_cast<int>(rng() % 3);
    auto base = random_tree_over(a.symbols(), declared, 3, rng);
    auto fam_tree = tree_map(
        [&](const Sym& sym) {
          std::set<std::vector<std::string>> seen;
          std::vector<SetLabel<Sym>> family;
          int gens = 1 + static_cast<int>(rng() % 2);
          for (int g = 0; g < gens; ++g) {
            auto gen = random_down_label(a, sym.arity, rng, 10);
            // All down-closed subsets of the generator keep the family itself
            // downward closed in D A.
            std::size_t m = gen.items.size();
            for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
              SetLabel<Sym> sub{sym.arity, {}};
              for (std::size_t b = 0; b < m; ++b)
                if (mask & (std::size_t{1} << b)) sub.items.push_back(gen.items[b]);
              bool closed = true;
              for (const Sym& x : sub.items)
                for (const Sym& y : gen.items)
                  if (a.leq(y, x)) {
                    bool present = false;
                    for (const Sym& z : sub.items) present = present || z == y;
                    closed = closed && present;
                  }
              if (!closed) continue;
              std::vector<std::string> key;
              for (const Sym& x : sub.items) key.push_back(x.name);
              if (seen.insert(key).second) family.push_back(std::move(sub));
            }
          }
          return std::optional(SetLabel<SetLabel<Sym>>{sym.arity, std::move(family)});
        },
        base);
    ++r.cases;
    auto unioned = tree_map(
        [&](const SetLabel<SetLabel<Sym>>& fam) {
          std::set<std::string> seen;
          SetLabel<Sym> u{fam.arity, {}};
          for (const auto& member : fam.items)
            for (const Sym& x : member.items)
              if (seen.insert(x.name).second) u.items.push_back(x);
          return std::optional(std::move(u));
        },
        *fam_tree);
    auto lhs = sections_set(*unioned);
    std::set<STree> rhs;
    for (const auto& pick : enumerate_sections(*fam_tree).sections)
      for (const auto& sec : enumerate_sections(pick).sections) rhs.insert(sec);
    if (lhs != rhs)
      r.add({base.size(), "dist-union",
             to_term_string(*fam_tree,
                            [](const SetLabel<SetLabel<Sym>>& fam) {
                              std::string out = "{|" + std::to_string(fam.items.size()) + "|}";
                              return out;
                            }),
             family_string(lhs), family_string(rhs)});
  }

  // dist(sing(S)) = D sing (S), exhaustively over the downsets of each slice.
  for (int n = 0; n <= a.max_arity(); ++n) {
    const auto& slice = a.slice(n);
    if (slice.size() > 12) continue;
    for (std::size_t mask = 0; mask < (std::size_t{1} << slice.size()); ++mask) {
      SetLabel<Sym> label{n, {}};
      for (int i = 0; i < slice.size(); ++i)
        if (mask & (std::size_t{1} << i)) label.items.push_back(Sym{slice.name(i), n});
      bool closed = true;
      for (const Sym& x : label.items)
        for (int i = 0; i < slice.size(); ++i) {
          Sym below{slice.name(i), n};
          if (a.leq(below, x)) {
            bool present = false;
            for (const Sym& z : label.items) present = present || z == below;
            closed = closed && present;
          }
        }
      if (!closed) continue;
      ++r.cases;
      typename SetTree::Nodes nodes;
      nodes.emplace(Address{}, label);
      for (int k = 0; k < n; ++k) nodes.emplace(Address{k}, Hole{k});
      SetTree sing_tree(n, std::move(nodes));
      auto lhs = sections_set(sing_tree);
      std::set<STree> gens;
      for (const Sym& x : label.items) gens.insert(STree::singleton(x));
      auto rhs = down_close(a, gens);
      if (lhs != rhs)
        r.add({1, "dist-sing", set_tree_string(sing_tree), family_string(lhs),
               family_string(rhs)});
    }
  }

  // dist(T pt (t)) = pt(t), the principal downset of t.
  for (std::size_t i = 0; i < (s.samples + 3) / 4; ++i) {
    int declared = static_cast<int>(rng() % 3);
    auto t = random_tree_over(a.symbols(), declared, 4, rng);
    ++r.cases;
    auto principal = tree_map(
        [&](const Sym& sym) { return std::optional(SetLabel<Sym>{sym.arity, lower_syms(a, sym)}); },
        t);
    auto lhs = sections_set(*principal);
    auto rhs = down_close(a, {t});
    if (lhs != rhs)
      r.add({t.size(), "dist-pt", print_term(t), family_string(lhs), family_string(rhs)});
  }
  return r;
}

namespace {

// Shared core of the continuity checks: label sets over the carrier, pointwise
// bound on one side, bound of the section products on the other.
LawReport continuity_check(const FiniteTreeAlgebra& alg, const std::vector<AlgElem>& letters,
                           bool join, const std::string& title, const Sampler& s) {
  LawReport r;
  r.title = title;
  std::vector<AlgElem> nullary;
  for (const AlgElem& e : letters)
    if (e.arity == 0) nullary.push_back(e);
  if (nullary.empty()) throw std::invalid_argument("label set needs a nullary element");
  std::mt19937_64 rng(s.seed);
  for (std::size_t i = 0; i < s.samples; ++i) {
    int declared = random_declared(alg, rng);
    auto base = random_tree_over(letters, declared, s.tree_size, rng);
    auto labelled = tree_map(
        [&](const AlgElem& e) {
          SetLabel<AlgElem> label{e.arity, {e}};
          for (const AlgElem& other : letters)
            if (other.arity == e.arity && !(other == e) && rng() % 3 == 0)
              label.items.push_back(other);
          return std::optional(std::move(label));
        },
        base);
    ++r.cases;
    // Pointwise bound tree.
    bool bound_ok = true;
    auto bound = tree_map(
        [&](const SetLabel<AlgElem>& label) -> std::optional<AlgElem> {
          std::vector<int> idx;
          for (const AlgElem& e : label.items) idx.push_back(e.index);
          auto b = join ? alg.slice(label.arity).sup(idx) : alg.slice(label.arity).inf(idx);
          if (!b) {
            bound_ok = false;
            return std::nullopt;
          }
          return AlgElem{label.arity, *b};
        },
        *labelled);
    std::optional<AlgElem> lhs;
    if (bound_ok && bound) lhs = alg.product(*bound);
    // Bound of the section products.
    std::optional<AlgElem> rhs;
    bool all_defined = true;
    std::vector<int> values;
    for (const auto& sec : enumerate_sections(*labelled).sections) {
      auto v = alg.product(sec);
      if (!v) {
        all_defined = false;
        break;
      }
      values.push_back(v->index);
    }
    if (all_defined) {
      auto b = join ? alg.slice(declared).sup(values) : alg.slice(declared).inf(values);
      if (b) rhs = AlgElem{declared, *b};
    }
    if (lhs.has_value() != rhs.has_value() || (lhs && !(*lhs == *rhs)))
      r.add({base.size(), join ? "join-continuity" : "meet-embedding",
             set_tree_string(*tree_map(
                 [&](const SetLabel<AlgElem>& l) {
                   SetLabel<Sym> out{l.arity, {}};
                   for (const AlgElem& e : l.items) out.items.push_back(Sym{alg.elem_name(e), l.arity});
                   return std::optional(std::move(out));
                 },
                 *labelled)),
             show(alg, lhs), show(alg, rhs)});
  }
  return r;
}

}  // namespace

LawReport check_join_continuity(const FiniteTreeAlgebra& alg, const Sampler& s) {
  return continuity_check(alg, alg.elements(), true,
                          alg.name + ": join continuity (sampling refuter)", s);
}

LawReport check_meet_embedding(const FiniteTreeAlgebra& alg, const std::vector<AlgElem>& C,
                               const Sampler& s) {
  return continuity_check(alg, C, false,
                          alg.name + ": meet-continuous embedding (sampling refuter)", s);
}

LawReport check_extension_condition(ExtensionKind kind, const FiniteTreeAlgebra& alg,
                                    const std::vector<AlgElem>& C, const Sampler& s) {
  bool join = kind == ExtensionKind::join;
  LawReport r;
  r.title = alg.name + (join ? ": join" : ": meet") +
            "-extension condition (sampling refuter on equal-bound label pairs)";
  std::vector<AlgElem> nullary;
  for (const AlgElem& e : C)
    if (e.arity == 0) nullary.push_back(e);
  if (nullary.empty()) throw std::invalid_argument("generator set needs a nullary element");
  std::mt19937_64 rng(s.seed);
  auto side_label = [&](const AlgElem& bound) {
    // Random subset of the cone under (resp. over) bound whose sup (resp.
    // inf) is exactly bound; it need not contain bound itself, which is what
    // lets the two sides of a pair differ.
    std::vector<AlgElem> related;
    for (const AlgElem& other : C) {
      if (other.arity != bound.arity) continue;
      bool rel = join ? alg.leq(other, bound) : alg.leq(bound, other);
      if (rel) related.push_back(other);
    }
    for (int attempt = 0; attempt < 4; ++attempt) {
      SetLabel<AlgElem> label{bound.arity, {}};
      std::vector<int> idx;
      for (const AlgElem& a : related)
        if (rng() % 2 == 0) {
          label.items.push_back(a);
          idx.push_back(a.index);
        }
      if (idx.empty()) continue;
      auto got = join ? alg.slice(bound.arity).sup(idx) : alg.slice(bound.arity).inf(idx);
      if (got && *got == bound.index) return label;
    }
    return SetLabel<AlgElem>{bound.arity, {bound}};
  };
  auto side_value = [&](const Tree<SetLabel<AlgElem>>& labelled,
                        int declared) -> std::optional<AlgElem> {
    std::vector<int> values;
    for (const auto& sec : enumerate_sections(labelled).sections) {
      auto v = alg.product(sec);
      if (!v) return std::nullopt;
      values.push_back(v->index);
    }
    auto b = join ? alg.slice(declared).sup(values) : alg.slice(declared).inf(values);
    if (!b) return std::nullopt;
    return AlgElem{declared, *b};
  };
  for (std::size_t i = 0; i < s.samples; ++i) {
    int declared = random_declared(alg, rng);
    auto bounds = random_tree_over(C, declared, s.tree_size, rng);
    auto first = tree_map([&](const AlgElem& e) { return std::optional(side_label(e)); }, bounds);
    auto second = tree_map([&](const AlgElem& e) { return std::optional(side_label(e)); }, bounds);
    ++r.cases;
    auto lhs = side_value(*first, declared);
    auto rhs = side_value(*second, declared);
    if (lhs.has_value() != rhs.has_value() || (lhs && !(*lhs == *rhs))) {
      auto name_tree = [&](const Tree<SetLabel<AlgElem>>& t) {
        return set_tree_string(*tree_map(
            [&](const SetLabel<AlgElem>& l) {
              SetLabel<Sym> out{l.arity, {}};
              for (const AlgElem& e : l.items) out.items.push_back(Sym{alg.elem_name(e), l.arity});
              return std::optional(std::move(out));
            },
            t));
      };
      r.add({bounds.size(), join ? "join-extension" : "meet-extension",
             name_tree(*first) + " vs " + name_tree(*second), show(alg, lhs), show(alg, rhs)});
    }
  }
  return r;
}

namespace {

// Bottom-up table evaluation for file-defined algebras.
struct TableData {
  std::vector<SlicePtr> slices;
  std::map<std::string, AlgElem> table;
};

std::optional<AlgElem> table_eval(const TableData& data, Tree<AlgElem> t) {
  auto name_of = [&](const AlgElem& e) {
    return data.slices[static_cast<std::size_t>(e.arity)]->name(e.index);
  };
  auto canonical_key = [&](const Tree<AlgElem>& u) -> std::optional<std::string> {
    auto holes = u.holes_used();
    int m = static_cast<int>(holes.size());
    for (int i = 0; i < m; ++i)
      if (holes[static_cast<std::size_t>(i)] != i) return std::nullopt;
    if (u.declared_arity() != m) return std::nullopt;
    return to_term_string(u, name_of);
  };
  std::set<std::string> visited;
  for (int steps = 0; steps < 10000; ++steps) {
    if (auto key = canonical_key(t)) {
      auto it = data.table.find(*key);
      if (it != data.table.end()) return it->second;
      if (!visited.insert(*key).second) return std::nullopt;  // rewriting loops
    }
    // Unit law fallback.
    const auto& root = t.label(Address{});
    if (!std::holds_alternative<Hole>(root)) {
      const AlgElem& a = std::get<AlgElem>(root);
      if (t == Tree<AlgElem>::singleton(a) && t.declared_arity() == a.arity) return a;
    }
    // Contract the shortlex-last height-two subterm with a table entry.
    bool contracted = false;
    std::vector<Address> verts;
    for (const auto& [v, l] : t.nodes()) verts.push_back(v);
    for (auto it = verts.rbegin(); it != verts.rend() && !contracted; ++it) {
      const Address& v = *it;
      if (v.empty() || t.is_hole(v) || t.child_count(v) == 0) continue;
      bool flat_children = true;
      for (int k = 0; k < t.child_count(v); ++k)
        flat_children = flat_children && t.child_count(v + k) == 0;
      if (!flat_children) continue;
      Tree<AlgElem> sub = subtree(t, v, t.declared_arity());
      auto holes = sub.holes_used();
      // Renumber holes to 0..m-1 for the lookup.
      std::map<int, int> renum;
      for (std::size_t j = 0; j < holes.size(); ++j) renum[holes[j]] = static_cast<int>(j);
      typename Tree<AlgElem>::Nodes canon_nodes;
      for (const auto& [w, l] : sub.nodes()) {
        if (std::holds_alternative<Hole>(l))
          canon_nodes.emplace(w, Hole{renum.at(std::get<Hole>(l).index)});
        else
          canon_nodes.emplace(w, l);
      }
      Tree<AlgElem> canon(static_cast<int>(holes.size()), std::move(canon_nodes));
      auto entry = data.table.find(to_term_string(canon, name_of));
      if (entry == data.table.end()) continue;
      const AlgElem& value = entry->second;
      if (value.arity != static_cast<int>(holes.size())) continue;
      typename Tree<AlgElem>::Nodes repl;
      repl.emplace(Address{}, value);
      for (std::size_t j = 0; j < holes.size(); ++j)
        repl.emplace(Address{static_cast<int>(j)}, Hole{holes[j]});
      t = splice(t, v, Tree<AlgElem>(t.declared_arity(), std::move(repl)));
      contracted = true;
    }
    if (!contracted) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

FiniteTreeAlgebra parse_algebra(const std::string& text) {
  std::string name;
  std::vector<std::vector<std::string>> names_by_arity;
  std::vector<std::tuple<int, std::string, std::string>> le_lines;
  std::vector<std::tuple<int, std::string, std::string>> pi_lines;
  std::set<std::string> declared;
  for (const auto& [line, tokens] : tokenize_lines(text)) {
    if (tokens[0] == "algebra") {
      if (tokens.size() != 2) throw ParseError("algebra wants a name", line);
      if (!name.empty()) throw ParseError("duplicate algebra line", line);
      name = tokens[1];
    } else if (tokens[0] == "elem") {
      if (name.empty()) throw ParseError("algebra line must come first", line);
      if (tokens.size() != 3) throw ParseError("elem wants a name and an arity", line);
      if (!valid_symbol_name(tokens[1])) throw ParseError("bad element name " + tokens[1], line);
      if (!declared.insert(tokens[1]).second)
        throw ParseError("duplicate element " + tokens[1], line);
      int arity;
      try {
        arity = std::stoi(tokens[2]);
      } catch (const std::exception&) {
        throw ParseError("bad arity " + tokens[2], line);
      }
      if (arity < 0 || arity > 31) throw ParseError("arity out of range", line);
      if (static_cast<int>(names_by_arity.size()) <= arity)
        names_by_arity.resize(static_cast<std::size_t>(arity) + 1);
      names_by_arity[static_cast<std::size_t>(arity)].push_back(tokens[1]);
    } else if (tokens[0] == "le") {
      if (tokens.size() != 3) throw ParseError("le wants two elements", line);
      le_lines.emplace_back(line, tokens[1], tokens[2]);
    } else if (tokens[0] == "pi") {
      // The term may have been split at spaces after commas; rejoin it.
      auto eq = std::find(tokens.begin() + 1, tokens.end(), "=");
      if (eq == tokens.end() || eq + 2 != tokens.end() || eq == tokens.begin() + 1)
        throw ParseError("pi wants '<term> = <element>'", line);
      std::string term;
      for (auto it = tokens.begin() + 1; it != eq; ++it) term += *it;
      pi_lines.emplace_back(line, term, tokens.back());
    } else {
      throw ParseError("unknown directive " + tokens[0], line);
    }
  }
  if (name.empty()) throw ParseError("missing algebra line", 1);
  if (names_by_arity.empty()) throw ParseError("no elements declared", 1);

  std::vector<std::pair<std::string, std::string>> le_named;
  for (const auto& [line, lo, hi] : le_lines) {
    if (!declared.count(lo)) throw ParseError("unknown element " + lo, line);
    if (!declared.count(hi)) throw ParseError("unknown element " + hi, line);
    le_named.emplace_back(lo, hi);
  }
  RankedAlphabet carrier;
  try {
    carrier = RankedAlphabet(names_by_arity, le_named);
  } catch (const std::exception& e) {
    throw ParseError(e.what(), 1);
  }

  FiniteTreeAlgebra alg;
  alg.name = name;
  for (int n = 0; n <= carrier.max_arity(); ++n) alg.slices.push_back(carrier.slice_ptr(n));

  auto data = std::make_shared<TableData>();
  data->slices = alg.slices;
  for (const auto& [line, termstr, valname] : pi_lines) {
    std::optional<Tree<Sym>> term;
    try {
      term = parse_term(termstr, carrier);
    } catch (const ParseError& e) {
      throw ParseError(std::string("in pi term: ") + e.what(), line);
    }
    auto value = alg.find(valname);
    if (!value) throw ParseError("unknown element " + valname, line);
    if (value->arity != term->declared_arity())
      throw ParseError("pi value arity " + std::to_string(value->arity) +
                           " does not match term arity " +
                           std::to_string(term->declared_arity()),
                       line);
    std::string key = print_term(*term);
    if (!data->table.emplace(key, *value).second)
      throw ParseError("duplicate pi entry for " + key, line);
    alg.pi_table.emplace(key, valname);
  }
  alg.product = [data](const Tree<AlgElem>& t) { return table_eval(*data, t); };
  return alg;
}

std::string print_algebra(const FiniteTreeAlgebra& alg) {
  std::ostringstream os;
  os << "algebra " << alg.name << "\n";
  for (int n = 0; n <= alg.max_arity(); ++n)
    for (int i = 0; i < alg.slice(n).size(); ++i)
      os << "elem " << alg.slice(n).name(i) << " " << n << "\n";
  for (int n = 0; n <= alg.max_arity(); ++n)
    for (int i = 0; i < alg.slice(n).size(); ++i)
      for (int j = 0; j < alg.slice(n).size(); ++j)
        if (i != j && alg.slice(n).leq(i, j))
          os << "le " << alg.slice(n).name(i) << " " << alg.slice(n).name(j) << "\n";
  for (const auto& [term, value] : alg.pi_table) os << "pi " << term << " = " << value << "\n";
  return os.str();
}

}  // namespace treealg
