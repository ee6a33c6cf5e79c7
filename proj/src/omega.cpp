#include "treealg/omega.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <memory>
#include <sstream>
#include <tuple>

#include "treealg/alphabet.hpp"
#include "treealg/common.hpp"

namespace treealg {

WilkeAlgebra::WilkeAlgebra(SlicePtr s0_in, SlicePtr s1_in)
    : s0(std::move(s0_in)), s1(std::move(s1_in)) {
  mixed_t.assign(s1->size(), std::vector<int>(s0->size(), -1));
  binary_t.assign(s1->size(), std::vector<int>(s1->size(), -1));
  omega_t.assign(s1->size(), -1);
}

std::optional<int> WilkeAlgebra::fold1(const std::vector<int>& word) const {
  if (word.empty()) return std::nullopt;
  int acc = word[0];
  for (std::size_t i = 1; i < word.size(); ++i) {
    auto next = binary(acc, word[i]);
    if (!next) return std::nullopt;
    acc = *next;
  }
  return acc;
}

WilkeAlgebra parse_wilke(const std::string& text) {
  std::vector<std::string> names0, names1;
  std::set<std::string> taken;
  struct TableLine {
    int line;
    std::vector<std::string> tokens;
  };
  std::vector<TableLine> tables;
  std::vector<std::tuple<int, std::string, std::string>> le_lines;

  auto declare = [&](std::vector<std::string>& into, const std::vector<std::string>& tokens,
                     int line) {
    if (tokens.size() < 2) throw ParseError(tokens[0] + " wants at least one name", line);
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      if (!valid_symbol_name(tokens[i])) throw ParseError("bad element name " + tokens[i], line);
      if (!taken.insert(tokens[i]).second)
        throw ParseError("element " + tokens[i] + " declared twice", line);
      into.push_back(tokens[i]);
    }
  };

  for (const auto& [line, tokens] : tokenize_lines(text)) {
    if (tokens[0] == "s0") {
      declare(names0, tokens, line);
    } else if (tokens[0] == "s1") {
      declare(names1, tokens, line);
    } else if (tokens[0] == "mix" || tokens[0] == "bin" || tokens[0] == "omega") {
      tables.push_back({line, tokens});
    } else if (tokens[0] == "le") {
      if (tokens.size() != 3) throw ParseError("le wants two elements", line);
      le_lines.emplace_back(line, tokens[1], tokens[2]);
    } else {
      throw ParseError("unknown directive " + tokens[0], line);
    }
  }

  auto slot = [&](const std::vector<std::string>& names, const std::string& n) {
    auto it = std::find(names.begin(), names.end(), n);
    return it == names.end() ? -1 : static_cast<int>(it - names.begin());
  };

  std::vector<std::pair<int, int>> le0, le1;
  for (const auto& [line, x, y] : le_lines) {
    int x1 = slot(names1, x), y1 = slot(names1, y);
    int x0 = slot(names0, x), y0 = slot(names0, y);
    if (x1 >= 0 && y1 >= 0)
      le1.emplace_back(x1, y1);
    else if (x0 >= 0 && y0 >= 0)
      le0.emplace_back(x0, y0);
    else if (x1 < 0 && x0 < 0)
      throw ParseError("unknown element " + x, line);
    else if (y1 < 0 && y0 < 0)
      throw ParseError("unknown element " + y, line);
    else
      throw ParseError("le relates elements of different sorts: " + x + ", " + y, line);
  }

  WilkeAlgebra w = [&] {
    try {
      return WilkeAlgebra(std::make_shared<PosetSlice>(names0, le0),
                          std::make_shared<PosetSlice>(names1, le1));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  }();

  auto need = [&](const std::vector<std::string>& names, const std::string& n, int line,
                  const char* sort) {
    int i = slot(names, n);
    if (i < 0) throw ParseError(n + " is not an " + sort + " element", line);
    return i;
  };
  for (const auto& [line, tokens] : tables) {
    if (tokens[0] == "mix") {
      if (tokens.size() != 5 || tokens[3] != "=")
        throw ParseError("mix wants: mix <s> <a> = <b>", line);
      int s = need(names1, tokens[1], line, "s1");
      int a = need(names0, tokens[2], line, "s0");
      int b = need(names0, tokens[4], line, "s0");
      if (w.mixed_t[s][a] >= 0)
        throw ParseError("mix " + tokens[1] + " " + tokens[2] + " defined twice", line);
      w.mixed_t[s][a] = b;
    } else if (tokens[0] == "bin") {
      if (tokens.size() != 5 || tokens[3] != "=")
        throw ParseError("bin wants: bin <s> <t> = <u>", line);
      int s = need(names1, tokens[1], line, "s1");
      int t = need(names1, tokens[2], line, "s1");
      int u = need(names1, tokens[4], line, "s1");
      if (w.binary_t[s][t] >= 0)
        throw ParseError("bin " + tokens[1] + " " + tokens[2] + " defined twice", line);
      w.binary_t[s][t] = u;
    } else {
      if (tokens.size() != 4 || tokens[2] != "=")
        throw ParseError("omega wants: omega <s> = <a>", line);
      int s = need(names1, tokens[1], line, "s1");
      int a = need(names0, tokens[3], line, "s0");
      if (w.omega_t[s] >= 0) throw ParseError("omega " + tokens[1] + " defined twice", line);
      w.omega_t[s] = a;
    }
  }
  return w;
}

std::string print_wilke(const WilkeAlgebra& w) {
  std::ostringstream os;
  os << "s0";
  for (int i = 0; i < w.s0->size(); ++i) os << " " << w.s0->name(i);
  os << "\ns1";
  for (int i = 0; i < w.s1->size(); ++i) os << " " << w.s1->name(i);
  os << "\n";
  for (int s = 0; s < w.s1->size(); ++s)
    for (int a = 0; a < w.s0->size(); ++a)
      if (w.mixed_t[s][a] >= 0)
        os << "mix " << w.s1->name(s) << " " << w.s0->name(a) << " = "
           << w.s0->name(w.mixed_t[s][a]) << "\n";
  for (int s = 0; s < w.s1->size(); ++s)
    for (int t = 0; t < w.s1->size(); ++t)
      if (w.binary_t[s][t] >= 0)
        os << "bin " << w.s1->name(s) << " " << w.s1->name(t) << " = "
           << w.s1->name(w.binary_t[s][t]) << "\n";
  for (int s = 0; s < w.s1->size(); ++s)
    if (w.omega_t[s] >= 0)
      os << "omega " << w.s1->name(s) << " = " << w.s0->name(w.omega_t[s]) << "\n";
  for (int i = 0; i < w.s0->size(); ++i)
    for (int j = 0; j < w.s0->size(); ++j)
      if (i != j && w.s0->leq(i, j)) os << "le " << w.s0->name(i) << " " << w.s0->name(j) << "\n";
  for (int i = 0; i < w.s1->size(); ++i)
    for (int j = 0; j < w.s1->size(); ++j)
      if (i != j && w.s1->leq(i, j)) os << "le " << w.s1->name(i) << " " << w.s1->name(j) << "\n";
  return os.str();
}

LawReport wilke_check(const WilkeAlgebra& w) {
  LawReport r;
  r.title = "wilke axioms";
  auto n1 = [&](int i) { return w.s1->name(i); };
  auto n0 = [&](int i) { return w.s0->name(i); };
  auto fail = [&](const std::string& law, std::string witness, std::string lhs, std::string rhs) {
    r.add({witness.size(), law, std::move(witness), std::move(lhs), std::move(rhs)});
  };
  int m1 = w.s1->size(), m0 = w.s0->size();

  for (int s = 0; s < m1; ++s)
    for (int t = 0; t < m1; ++t)
      for (int u = 0; u < m1; ++u) {
        ++r.cases;
        auto st = w.binary(s, t);
        auto tu = w.binary(t, u);
        auto l = st ? w.binary(*st, u) : std::nullopt;
        auto rr = tu ? w.binary(s, *tu) : std::nullopt;
        if (!l || !rr) {
          ++r.skipped;
        } else if (*l != *rr) {
          fail("bin-assoc", "(" + n1(s) + " " + n1(t) + ") " + n1(u), n1(*l), n1(*rr));
        }
      }

  for (int s = 0; s < m1; ++s)
    for (int t = 0; t < m1; ++t)
      for (int a = 0; a < m0; ++a) {
        ++r.cases;
        auto st = w.binary(s, t);
        auto ta = w.mixed(t, a);
        auto l = st ? w.mixed(*st, a) : std::nullopt;
        auto rr = ta ? w.mixed(s, *ta) : std::nullopt;
        if (!l || !rr) {
          ++r.skipped;
        } else if (*l != *rr) {
          fail("mix-assoc", "(" + n1(s) + " " + n1(t) + ") " + n0(a), n0(*l), n0(*rr));
        }
      }

  // (st)^w = s (ts)^w
  for (int s = 0; s < m1; ++s)
    for (int t = 0; t < m1; ++t) {
      ++r.cases;
      auto st = w.binary(s, t);
      auto ts = w.binary(t, s);
      auto l = st ? w.omega_power(*st) : std::nullopt;
      auto tsw = ts ? w.omega_power(*ts) : std::nullopt;
      auto rr = tsw ? w.mixed(s, *tsw) : std::nullopt;
      if (!l || !rr) {
        ++r.skipped;
      } else if (*l != *rr) {
        fail("wilke-omega", "(" + n1(s) + " " + n1(t) + ")^w", n0(*l), n0(*rr));
      }
    }

  // (s^n)^w = s^w for n up to |S1|+1
  for (int s = 0; s < m1; ++s) {
    std::optional<int> power = s;
    for (int n = 2; n <= m1 + 1; ++n) {
      power = power ? w.binary(*power, s) : std::nullopt;
      ++r.cases;
      auto l = power ? w.omega_power(*power) : std::nullopt;
      auto rr = w.omega_power(s);
      if (!l || !rr) {
        ++r.skipped;
      } else if (*l != *rr) {
        fail("omega-power", "(" + n1(s) + "^" + std::to_string(n) + ")^w", n0(*l), n0(*rr));
      }
    }
  }

  auto monotone2 = [&](const char* law, auto get, auto name_arg, int na, auto name_val, int ns) {
    for (int s = 0; s < ns; ++s)
      for (int s2 = 0; s2 < ns; ++s2) {
        if (!w.s1->leq(s, s2)) continue;
        for (int t = 0; t < na; ++t)
          for (int t2 = 0; t2 < na; ++t2) {
            if (s == s2 && t == t2) continue;
            if (!(law[0] == 'b' ? w.s1->leq(t, t2) : w.s0->leq(t, t2))) continue;
            ++r.cases;
            auto l = get(s, t);
            auto rr = get(s2, t2);
            if (!l || !rr) {
              ++r.skipped;
            } else if (!(law[0] == 'b' ? w.s1->leq(*l, *rr) : w.s0->leq(*l, *rr))) {
              fail(law, n1(s) + " " + name_arg(t) + " <= " + n1(s2) + " " + name_arg(t2),
                   name_val(*l), name_val(*rr));
            }
          }
      }
  };
  monotone2(
      "bin-monotone", [&](int s, int t) { return w.binary(s, t); }, n1, m1, n1, m1);
  monotone2(
      "mix-monotone", [&](int s, int a) { return w.mixed(s, a); }, n0, m0, n0, m1);
  for (int s = 0; s < m1; ++s)
    for (int s2 = 0; s2 < m1; ++s2) {
      if (s == s2 || !w.s1->leq(s, s2)) continue;
      ++r.cases;
      auto l = w.omega_power(s);
      auto rr = w.omega_power(s2);
      if (!l || !rr) {
        ++r.skipped;
      } else if (!w.s0->leq(*l, *rr)) {
        fail("omega-monotone", n1(s) + "^w <= " + n1(s2) + "^w", n0(*l), n0(*rr));
      }
    }
  return r;
}

UPWord parse_up_word(const WilkeAlgebra& w, const std::string& text) {
  auto semi = text.find(';');
  if (semi != std::string::npos && text.find(';', semi + 1) != std::string::npos)
    throw ParseError("an ultimately periodic word has a single ;");
  auto tokens = [](const std::string& part) {
    std::istringstream is(part);
    std::vector<std::string> out;
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
  };
  auto find1 = [&](const std::string& n) {
    auto i = w.s1->index_of(n);
    if (!i) throw ParseError(n + " is not an s1 element");
    return *i;
  };
  UPWord u;
  if (semi == std::string::npos) {
    auto toks = tokens(text);
    if (toks.empty()) throw ParseError("empty word");
    auto term = w.s0->index_of(toks.back());
    if (!term)
      throw ParseError("a word without a loop must end in an s0 element, got " + toks.back());
    u.terminal = *term;
    toks.pop_back();
    for (const auto& t : toks) u.prefix.push_back(find1(t));
  } else {
    for (const auto& t : tokens(text.substr(0, semi))) u.prefix.push_back(find1(t));
    for (const auto& t : tokens(text.substr(semi + 1))) u.loop.push_back(find1(t));
    if (u.loop.empty()) throw ParseError("the loop after ; must be non-empty");
  }
  return u;
}

std::string print_up_word(const WilkeAlgebra& w, const UPWord& u) {
  std::ostringstream os;
  for (std::size_t i = 0; i < u.prefix.size(); ++i) {
    if (i) os << " ";
    os << w.s1->name(u.prefix[i]);
  }
  if (u.terminal) {
    if (!u.prefix.empty()) os << " ";
    os << w.s0->name(*u.terminal);
  } else {
    os << (u.prefix.empty() ? ";" : " ;");
    for (int s : u.loop) os << " " << w.s1->name(s);
  }
  return os.str();
}

std::optional<int> up_product(const WilkeAlgebra& w, const UPWord& u) {
  if (u.terminal.has_value() ? !u.loop.empty() : u.loop.empty())
    throw std::invalid_argument("up word needs exactly one of terminal and loop");
  std::optional<int> p;
  if (!u.prefix.empty()) {
    p = w.fold1(u.prefix);
    if (!p) return std::nullopt;
  }
  std::optional<int> tail;
  if (u.terminal) {
    tail = *u.terminal;
  } else {
    auto q = w.fold1(u.loop);
    if (!q) return std::nullopt;
    tail = w.omega_power(*q);
    if (!tail) return std::nullopt;
  }
  if (!p) return tail;
  return w.mixed(*p, *tail);
}

void validate_labelling(const WilkeAlgebra& w, const AdditiveLabelling& lab) {
  const Graph<Sym>& g = lab.graph;
  std::size_t edges = 0, leaves = 0;
  for (int v = 0; v < g.size(); ++v) {
    const auto& node = g.at(v);
    if (node.succ.empty()) {
      ++leaves;
      auto it = lab.leaf.find(v);
      if (it == lab.leaf.end())
        throw std::invalid_argument("leaf " + g.vertex_name(v) + " has no value");
      if (it->second < 0 || it->second >= w.s0->size())
        throw std::invalid_argument("leaf value out of range at " + g.vertex_name(v));
    } else {
      for (int k = 0; k < static_cast<int>(node.succ.size()); ++k) {
        ++edges;
        auto it = lab.edge.find({v, k});
        if (it == lab.edge.end())
          throw std::invalid_argument("edge " + g.vertex_name(v) + "/" + std::to_string(k) +
                                      " has no value");
        if (it->second < 0 || it->second >= w.s1->size())
          throw std::invalid_argument("edge value out of range at " + g.vertex_name(v));
      }
    }
  }
  if (lab.edge.size() != edges || lab.leaf.size() != leaves)
    throw std::invalid_argument("labelling mentions vertices outside the graph");
}

LimitSet limit_set(const WilkeAlgebra& w, const AdditiveLabelling& lab) {
  validate_labelling(w, lab);
  const Graph<Sym>& g = lab.graph;
  LimitSet out;

  // Reachable (vertex, product) pairs; -1 is the empty product at the root.
  std::set<std::pair<int, int>> pairs;
  std::vector<std::pair<int, int>> todo{{g.root(), -1}};
  pairs.insert(todo.back());
  auto mixed_or_bare = [&](int s, int a) -> std::optional<int> {
    if (s < 0) return a;
    return w.mixed(s, a);
  };
  while (!todo.empty()) {
    auto [v, s] = todo.back();
    todo.pop_back();
    const auto& node = g.at(v);
    if (node.succ.empty()) {
      auto val = mixed_or_bare(s, lab.leaf.at(v));
      if (val)
        out.values.insert(*val);
      else
        out.undefined = true;
      continue;
    }
    for (int k = 0; k < static_cast<int>(node.succ.size()); ++k) {
      int t = lab.edge.at({v, k});
      auto ns = s < 0 ? std::optional<int>(t) : w.binary(s, t);
      if (!ns) {
        out.undefined = true;
        continue;
      }
      if (pairs.insert({node.succ[k], *ns}).second) todo.push_back({node.succ[k], *ns});
    }
  }

  // Path products (u, v, p) along non-empty paths, saturated edge by edge.
  // Restricting attention to u = v afterwards yields every loop product,
  // already closed under composition of consecutive loops.
  std::set<std::array<int, 3>> triples;
  std::vector<std::array<int, 3>> twork;
  auto add_triple = [&](int u, int v, int p) {
    if (triples.insert({u, v, p}).second) twork.push_back({u, v, p});
  };
  for (int v = 0; v < g.size(); ++v)
    for (int k = 0; k < static_cast<int>(g.at(v).succ.size()); ++k)
      add_triple(v, g.at(v).succ[k], lab.edge.at({v, k}));
  while (!twork.empty()) {
    auto [u, v, p] = twork.back();
    twork.pop_back();
    for (int k = 0; k < static_cast<int>(g.at(v).succ.size()); ++k) {
      auto q = w.binary(p, lab.edge.at({v, k}));
      if (!q) {
        out.undefined = true;
        continue;
      }
      add_triple(u, g.at(v).succ[k], *q);
    }
  }
  std::map<int, std::set<int>> loops;
  for (const auto& t : triples)
    if (t[0] == t[1]) loops[t[0]].insert(t[2]);

  for (const auto& [v, s] : pairs) {
    auto it = loops.find(v);
    if (it == loops.end()) continue;
    for (int e : it->second) {
      auto ee = w.binary(e, e);
      if (!ee) {
        out.undefined = true;
        continue;
      }
      if (*ee != e) continue;
      auto ew = w.omega_power(e);
      if (!ew) {
        out.undefined = true;
        continue;
      }
      auto val = mixed_or_bare(s, *ew);
      if (val)
        out.values.insert(*val);
      else
        out.undefined = true;
    }
  }
  return out;
}

namespace {

// Non-empty subsets of a slice, as sorted index lists.
std::vector<std::vector<int>> nonempty_subsets(const PosetSlice& s) {
  std::vector<std::vector<int>> out;
  int n = s.size();
  for (unsigned m = 1; m < (1u << n); ++m) {
    std::vector<int> items;
    for (int i = 0; i < n; ++i)
      if (m & (1u << i)) items.push_back(i);
    out.push_back(std::move(items));
  }
  return out;
}

std::string set_text(const PosetSlice& s, const std::vector<int>& items) {
  std::string out = "{";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += s.name(items[i]);
  }
  return out + "}";
}

}  // namespace

LawReport check_meet_continuity_sg(const WilkeAlgebra& w, int bound, std::size_t guard) {
  LawReport r;
  r.title = "meet-continuity of the word product";
  if (w.s1->size() > 16 || w.s0->size() > 16)
    throw BudgetExceeded("meet-continuity check needs sorts of at most 16 elements");
  auto subs1 = nonempty_subsets(*w.s1);
  auto subs0 = nonempty_subsets(*w.s0);
  std::size_t steps = 0;
  auto step = [&] {
    if (++steps > guard) throw BudgetExceeded("meet-continuity enumeration exceeded its guard");
  };

  // One comparison: a word of letter sets, evaluated pointwise over every
  // choice function versus once on the letterwise infima. value_of returns
  // the product for one choice; sets[i] lives in slice(i).
  auto compare = [&](const std::vector<const std::vector<int>*>& sets,
                     const std::vector<const PosetSlice*>& slices, const PosetSlice& out,
                     const std::function<std::optional<int>(const std::vector<int>&)>& value_of,
                     const std::string& kind) {
    ++r.cases;
    std::vector<int> infs;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      auto gi = slices[i]->inf(*sets[i]);
      if (!gi) {
        ++r.skipped;  // the slice lacks this meet, nothing to state
        return;
      }
      infs.push_back(*gi);
    }
    auto lhs = value_of(infs);

    std::vector<std::size_t> choice(sets.size(), 0);
    std::vector<int> values;
    bool all_defined = true;
    for (;;) {
      step();
      std::vector<int> picked;
      for (std::size_t i = 0; i < sets.size(); ++i) picked.push_back((*sets[i])[choice[i]]);
      auto val = value_of(picked);
      if (val)
        values.push_back(*val);
      else
        all_defined = false;
      std::size_t i = 0;
      while (i < sets.size() && ++choice[i] == sets[i]->size()) choice[i++] = 0;
      if (i == sets.size()) break;
    }

    std::string witness = kind + ":";
    for (std::size_t i = 0; i < sets.size(); ++i) witness += " " + set_text(*slices[i], *sets[i]);
    if (lhs.has_value() != all_defined) {
      r.add({witness.size(), "definedness", witness,
             lhs ? "inf-word defined" : "inf-word undefined",
             all_defined ? "all choices defined" : "some choice undefined"});
      return;
    }
    if (!lhs) return;
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    auto glb = out.inf(values);
    if (!glb) {
      r.add({witness.size(), "meet-continuity", witness, out.name(*lhs),
             "value set " + set_text(out, values) + " has no infimum"});
    } else if (*glb != *lhs) {
      r.add({witness.size(), "meet-continuity", witness, out.name(*lhs),
             "inf " + set_text(out, values) + " = " + out.name(*glb)});
    }
  };

  // Every word of S1 subsets with the given length, continued by more.
  std::function<void(std::vector<const std::vector<int>*>&, int,
                     const std::function<void(const std::vector<const std::vector<int>*>&)>&)>
      words = [&](std::vector<const std::vector<int>*>& acc, int len,
                  const std::function<void(const std::vector<const std::vector<int>*>&)>& at) {
        if (len == 0) {
          at(acc);
          return;
        }
        for (const auto& u : subs1) {
          acc.push_back(&u);
          words(acc, len - 1, at);
          acc.pop_back();
        }
      };

  std::vector<const PosetSlice*> slices;
  std::vector<const std::vector<int>*> acc;

  // Finite S1 words: product stays in S1.
  for (int len = 2; len <= bound; ++len) {
    slices.assign(len, w.s1.get());
    words(acc, len, [&](const std::vector<const std::vector<int>*>& sets) {
      compare(sets, slices, *w.s1,
              [&](const std::vector<int>& letters) { return w.fold1(letters); }, "word");
    });
  }

  // Words ending in an S0 terminal.
  for (int len = 1; len + 1 <= bound; ++len) {
    slices.assign(len, w.s1.get());
    slices.push_back(w.s0.get());
    words(acc, len, [&](const std::vector<const std::vector<int>*>& sets) {
      for (const auto& a : subs0) {
        auto full = sets;
        full.push_back(&a);
        compare(full, slices, *w.s0,
                [&](const std::vector<int>& letters) {
                  UPWord u;
                  u.prefix.assign(letters.begin(), letters.end() - 1);
                  u.terminal = letters.back();
                  return up_product(w, u);
                },
                "terminal");
      }
    });
  }

  // Ultimately periodic set-words, prefix + loop of total length <= bound.
  for (int plen = 0; plen < bound; ++plen) {
    for (int llen = 1; plen + llen <= bound; ++llen) {
      slices.assign(plen + llen, w.s1.get());
      words(acc, plen + llen, [&](const std::vector<const std::vector<int>*>& sets) {
        compare(sets, slices, *w.s0,
                [&](const std::vector<int>& letters) {
                  UPWord u;
                  u.prefix.assign(letters.begin(), letters.begin() + plen);
                  u.loop.assign(letters.begin() + plen, letters.end());
                  return up_product(w, u);
                },
                "up(" + std::to_string(plen) + ";" + std::to_string(llen) + ")");
      });
    }
  }
  return r;
}

}  // namespace treealg
