#pragma once

#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "treealg/alphabet.hpp"
#include "treealg/trees.hpp"

namespace treealg {

// Finite rooted graphs with edge-ordered successors, representing regular
// trees by unravelling. A vertex is either labelled (with exactly as many
// successors as the label's arity) or a hole leaf.
//
// Hole discipline: the unravelling must land in T_n, where each variable
// labels at most one vertex. A hole index may therefore label at most one
// graph vertex, and the path from the root to it must be unique. We enforce
// the latter directly: every vertex on the chain leading to a hole has
// in-degree exactly one, and a graph containing any hole has no edge back
// into its root (such an edge would close a cycle through the root and
// duplicate the hole in the unravelling).

template <class L>
struct GraphNode {
  NodeLabel<L> label;
  std::vector<int> succ;
};

template <class A, class B>
int arity_of(const std::pair<A, B>& p) {
  return arity_of(p.first);
}

template <class L>
class Graph {
 public:
  // Validates, prunes unreachable vertices, and renumbers breadth-first from
  // the root, so equal-looking graphs get equal representations. names are
  // optional display names carried through pruning; missing ones default to
  // v<index> of the original position.
  Graph(int declared, int root, std::vector<GraphNode<L>> verts,
        std::vector<std::string> names = {})
      : declared_(declared) {
    if (declared < 0) throw std::invalid_argument("negative graph arity");
    if (verts.empty()) throw std::invalid_argument("graph needs at least one vertex");
    if (root < 0 || root >= static_cast<int>(verts.size()))
      throw std::invalid_argument("root out of range");
    if (std::holds_alternative<Hole>(verts[root].label))
      throw std::invalid_argument("the root of a graph cannot be a hole");
    for (std::size_t v = 0; v < verts.size(); ++v) {
      const GraphNode<L>& node = verts[v];
      int want = 0;
      if (const L* l = std::get_if<L>(&node.label)) want = arity_of(*l);
      if (static_cast<int>(node.succ.size()) != want)
        throw std::invalid_argument("vertex " + std::to_string(v) + " has " +
                                    std::to_string(node.succ.size()) + " successors, label wants " +
                                    std::to_string(want));
      for (int s : node.succ)
        if (s < 0 || s >= static_cast<int>(verts.size()))
          throw std::invalid_argument("successor out of range at vertex " + std::to_string(v));
      if (const Hole* h = std::get_if<Hole>(&node.label))
        if (h->index < 0 || h->index >= declared)
          throw std::invalid_argument("hole index " + std::to_string(h->index) +
                                      " outside declared arity " + std::to_string(declared));
    }

    // Breadth-first prune and renumber.
    std::vector<int> renum(verts.size(), -1);
    std::vector<int> order;
    std::queue<int> todo;
    renum[root] = 0;
    order.push_back(root);
    todo.push(root);
    while (!todo.empty()) {
      int v = todo.front();
      todo.pop();
      for (int s : verts[v].succ)
        if (renum[s] < 0) {
          renum[s] = static_cast<int>(order.size());
          order.push_back(s);
          todo.push(s);
        }
    }
    for (int v : order) {
      GraphNode<L> node = verts[v];
      for (int& s : node.succ) s = renum[s];
      verts_.push_back(std::move(node));
      names_.push_back(v < static_cast<int>(names.size()) && !names[v].empty()
                           ? names[v]
                           : "v" + std::to_string(v));
    }

    std::vector<int> indeg(verts_.size(), 0);
    std::map<int, int> hole_at;
    for (std::size_t v = 0; v < verts_.size(); ++v) {
      for (int s : verts_[v].succ) ++indeg[s];
      if (const Hole* h = std::get_if<Hole>(&verts_[v].label)) {
        if (!hole_at.emplace(h->index, static_cast<int>(v)).second)
          throw std::invalid_argument("hole " + std::to_string(h->index) +
                                      " labels two reachable vertices");
      }
    }
    if (!hole_at.empty() && indeg[0] > 0)
      throw std::invalid_argument(
          "a graph with holes cannot have an edge back into its root");
    std::vector<std::vector<int>> preds(verts_.size());
    for (std::size_t v = 0; v < verts_.size(); ++v)
      for (int s : verts_[v].succ) preds[s].push_back(static_cast<int>(v));
    for (const auto& [idx, hv] : hole_at) {
      std::set<int> seen;
      int cur = hv;
      while (cur != 0) {
        if (!seen.insert(cur).second)
          throw std::invalid_argument("cycle on the path to hole " + std::to_string(idx));
        if (indeg[cur] != 1)
          throw std::invalid_argument("hole " + std::to_string(idx) +
                                      " is reachable along two paths");
        cur = preds[cur][0];
      }
    }
  }

  int declared_arity() const { return declared_; }
  int root() const { return 0; }
  int size() const { return static_cast<int>(verts_.size()); }
  const GraphNode<L>& at(int v) const { return verts_.at(v); }
  const std::string& vertex_name(int v) const { return names_.at(v); }
  const std::vector<GraphNode<L>>& vertices() const { return verts_; }

  // Structural equality; display names do not participate.
  friend bool operator==(const Graph& a, const Graph& b) {
    if (a.declared_ != b.declared_ || a.verts_.size() != b.verts_.size()) return false;
    for (std::size_t v = 0; v < a.verts_.size(); ++v)
      if (!(a.verts_[v].label == b.verts_[v].label) || a.verts_[v].succ != b.verts_[v].succ)
        return false;
    return true;
  }

 private:
  int declared_;
  std::vector<GraphNode<L>> verts_;
  std::vector<std::string> names_;
};

template <class L>
int arity_of(const Graph<L>& g) {
  return g.declared_arity();
}

// Relabel the vertices in place; shape and holes are untouched.
template <class F, class L, class U = std::invoke_result_t<F, const L&>>
Graph<U> graph_map(F f, const Graph<L>& g) {
  std::vector<GraphNode<U>> verts;
  std::vector<std::string> names;
  for (int v = 0; v < g.size(); ++v) {
    const GraphNode<L>& node = g.at(v);
    if (const Hole* h = std::get_if<Hole>(&node.label))
      verts.push_back(GraphNode<U>{*h, node.succ});
    else
      verts.push_back(GraphNode<U>{f(std::get<L>(node.label)), node.succ});
    names.push_back(g.vertex_name(v));
  }
  return Graph<U>(g.declared_arity(), g.root(), std::move(verts), std::move(names));
}

// The tree-shaped graph of a finite tree, vertex per node.
template <class L>
Graph<L> graph_of_tree(const Tree<L>& t) {
  std::map<Address, int, ShortLex> index;
  int next = 0;
  for (const auto& [v, l] : t.nodes()) index.emplace(v, next++);
  std::vector<GraphNode<L>> verts(index.size());
  for (const auto& [v, l] : t.nodes()) {
    GraphNode<L>& node = verts[index.at(v)];
    node.label = l;
    for (int i = 0; i < t.child_count(v); ++i) {
      Address c = v;
      c.push_back(i);
      node.succ.push_back(index.at(c));
    }
  }
  return Graph<L>(t.declared_arity(), index.at(Address{}), std::move(verts));
}

// Depth-truncated unravelling: vertices at depths 0..depth keep their
// labels, everything reached at depth+1 becomes a cut leaf. An acyclic
// graph unravels exactly once the depth covers its longest path.
template <class L>
Tree<L> unravel_prefix(const Graph<L>& g, int depth, const L& cut) {
  if (arity_of(cut) != 0) throw std::invalid_argument("cut label must be nullary");
  typename Tree<L>::Nodes nodes;
  struct Item {
    int vertex, left;
    Address at;
  };
  std::vector<Item> todo{{g.root(), depth, {}}};
  while (!todo.empty()) {
    Item it = todo.back();
    todo.pop_back();
    if (it.left < 0) {
      nodes.emplace(it.at, cut);
      continue;
    }
    const GraphNode<L>& node = g.at(it.vertex);
    nodes.emplace(it.at, node.label);
    for (std::size_t i = 0; i < node.succ.size(); ++i) {
      Address c = it.at;
      c.push_back(static_cast<int>(i));
      todo.push_back({node.succ[i], it.left - 1, c});
    }
  }
  return Tree<L>(g.declared_arity(), std::move(nodes));
}

inline Tree<Sym> unravel_prefix(const Graph<Sym>& g, int depth) {
  return unravel_prefix(g, depth, Sym{kCutSymbolName, 0});
}

// Do the two graphs unravel to the same tree? Product bisimulation from the
// root pair: the unravellings agree exactly when every reachable pair of
// vertices carries the same label.
template <class L>
bool unravel_equal(const Graph<L>& g, const Graph<L>& h) {
  if (g.declared_arity() != h.declared_arity()) return false;
  std::set<std::pair<int, int>> seen;
  std::vector<std::pair<int, int>> todo{{g.root(), h.root()}};
  seen.insert(todo.back());
  while (!todo.empty()) {
    auto [a, b] = todo.back();
    todo.pop_back();
    const GraphNode<L>& na = g.at(a);
    const GraphNode<L>& nb = h.at(b);
    if (!(na.label == nb.label)) return false;
    for (std::size_t i = 0; i < na.succ.size(); ++i)
      if (seen.insert({na.succ[i], nb.succ[i]}).second)
        todo.push_back({na.succ[i], nb.succ[i]});
  }
  return true;
}

// Reachable direct product. The two unravellings must have the same shape:
// equal arities everywhere and holes matching holes with equal indices.
// The projections (via graph_map on .first / .second) unravel back to the
// factors.
template <class A, class B>
Graph<std::pair<A, B>> graph_product(const Graph<A>& g, const Graph<B>& h) {
  if (g.declared_arity() != h.declared_arity())
    throw std::invalid_argument("graph product needs equal declared arities");
  std::map<std::pair<int, int>, int> index;
  std::vector<std::pair<int, int>> order;
  std::queue<std::pair<int, int>> todo;
  auto visit = [&](std::pair<int, int> p) {
    if (index.emplace(p, static_cast<int>(order.size())).second) {
      order.push_back(p);
      todo.push(p);
    }
  };
  visit({g.root(), h.root()});
  std::vector<GraphNode<std::pair<A, B>>> verts;
  std::vector<std::string> names;
  while (!todo.empty()) {
    auto [a, b] = todo.front();
    todo.pop();
    const GraphNode<A>& na = g.at(a);
    const GraphNode<B>& nb = h.at(b);
    GraphNode<std::pair<A, B>> node;
    const Hole* ha = std::get_if<Hole>(&na.label);
    const Hole* hb = std::get_if<Hole>(&nb.label);
    if ((ha != nullptr) != (hb != nullptr) || (ha && hb && ha->index != hb->index))
      throw std::invalid_argument("graph product: hole mismatch at (" + g.vertex_name(a) +
                                  "," + h.vertex_name(b) + ")");
    if (ha) {
      node.label = *ha;
    } else {
      const A& la = std::get<A>(na.label);
      const B& lb = std::get<B>(nb.label);
      if (arity_of(la) != arity_of(lb))
        throw std::invalid_argument("graph product: arity mismatch at (" + g.vertex_name(a) +
                                    "," + h.vertex_name(b) + ")");
      node.label = std::pair<A, B>(la, lb);
    }
    for (std::size_t i = 0; i < na.succ.size(); ++i) {
      std::pair<int, int> p{na.succ[i], nb.succ[i]};
      visit(p);
      node.succ.push_back(index.at(p));
    }
    verts.push_back(std::move(node));
    names.push_back("(" + g.vertex_name(a) + "," + h.vertex_name(b) + ")");
  }
  return Graph<std::pair<A, B>>(g.declared_arity(), 0, std::move(verts), std::move(names));
}

// Flattening of a graph whose labels are graphs. Each component is spliced
// in place of its vertex; component holes are rerouted to the root of the
// component at the corresponding outer successor (or to the outer hole
// vertex itself). Outer subtrees hanging below unused component holes become
// unreachable and are pruned, which is exactly the vanishing behaviour of
// tree flattening.
template <class L>
Graph<L> flatten_graph(const Graph<Graph<L>>& g) {
  // New vertex ids: outer holes first, then the non-hole vertices of every
  // component in order.
  std::map<int, int> outer_hole_id;
  std::map<std::pair<int, int>, int> comp_id;
  int next = 0;
  for (int v = 0; v < g.size(); ++v)
    if (std::holds_alternative<Hole>(g.at(v).label)) outer_hole_id[v] = next++;
  // The Graph invariant |succ(v)| = arity(label(v)) already gives each
  // component exactly as many outer successors as it declares holes for.
  for (int v = 0; v < g.size(); ++v) {
    if (std::holds_alternative<Hole>(g.at(v).label)) continue;
    const Graph<L>& comp = std::get<Graph<L>>(g.at(v).label);
    for (int w = 0; w < comp.size(); ++w)
      if (!std::holds_alternative<Hole>(comp.at(w).label)) comp_id[{v, w}] = next++;
  }

  // Where does component vertex w of outer vertex v really point?
  auto resolve = [&](int v, int w) -> int {
    const Graph<L>& comp = std::get<Graph<L>>(g.at(v).label);
    if (const Hole* h = std::get_if<Hole>(&comp.at(w).label)) {
      int outer = g.at(v).succ.at(h->index);
      if (outer_hole_id.count(outer)) return outer_hole_id.at(outer);
      return comp_id.at({outer, std::get<Graph<L>>(g.at(outer).label).root()});
    }
    return comp_id.at({v, w});
  };

  std::vector<GraphNode<L>> verts(next);
  std::vector<std::string> names(next);
  for (const auto& [v, id] : outer_hole_id) {
    verts[id].label = std::get<Hole>(g.at(v).label);
    names[id] = g.vertex_name(v);
  }
  for (const auto& [vw, id] : comp_id) {
    const Graph<L>& comp = std::get<Graph<L>>(g.at(vw.first).label);
    const GraphNode<L>& node = comp.at(vw.second);
    verts[id].label = node.label;
    for (int s : node.succ) verts[id].succ.push_back(resolve(vw.first, s));
    names[id] = g.vertex_name(vw.first) + "." + comp.vertex_name(vw.second);
  }
  int root = comp_id.at({g.root(), std::get<Graph<L>>(g.at(g.root()).label).root()});
  return Graph<L>(g.declared_arity(), root, std::move(verts), std::move(names));
}

// Unravelling with respect to a cylindrical structure on the labels. cyl
// maps a label a to the pair (a0, sigma) with sigma strictly increasing and
// arity(a0) = |sigma| <= arity(a); each vertex is relabelled a0, keeping
// only the successors sigma selects. Holes are untouched. Unreachable
// vertices disappear, so repeated application is stable once every label
// satisfies a0 = a.
template <class L, class Cyl>
Graph<L> unravel_graph_cyl(const Graph<L>& g, Cyl cyl) {
  std::vector<GraphNode<L>> verts;
  std::vector<std::string> names;
  for (int v = 0; v < g.size(); ++v) {
    const GraphNode<L>& node = g.at(v);
    if (std::holds_alternative<Hole>(node.label)) {
      verts.push_back(node);
    } else {
      const L& a = std::get<L>(node.label);
      auto [a0, sigma] = cyl(a);
      if (static_cast<int>(sigma.size()) != arity_of(a0) || arity_of(a0) > arity_of(a))
        throw std::invalid_argument("cylindrical data inconsistent with arity at " +
                                    g.vertex_name(v));
      GraphNode<L> out{a0, {}};
      int prev = -1;
      for (int k : sigma) {
        if (k <= prev || k >= arity_of(a))
          throw std::invalid_argument("cylindrical selector not strictly increasing at " +
                                      g.vertex_name(v));
        prev = k;
        out.succ.push_back(node.succ[k]);
      }
      verts.push_back(std::move(out));
    }
    names.push_back(g.vertex_name(v));
  }
  return Graph<L>(g.declared_arity(), g.root(), std::move(verts), std::move(names));
}

// Canonical representative of the unravel-equivalence class: quotient by
// label-respecting bisimulation, then rely on the constructor's
// breadth-first renumbering. Two graphs unravel equally iff their canonical
// forms compare equal.
template <class L>
Graph<L> canonical_form(const Graph<L>& g) {
  // Partition refinement: start from label classes, split by successor
  // class vectors until stable.
  std::vector<int> cls(g.size());
  {
    std::map<NodeLabel<L>, int> by_label;
    for (int v = 0; v < g.size(); ++v)
      cls[v] = by_label.emplace(g.at(v).label, static_cast<int>(by_label.size())).first->second;
  }
  for (;;) {
    std::map<std::pair<int, std::vector<int>>, int> sig;
    std::vector<int> fresh(g.size());
    for (int v = 0; v < g.size(); ++v) {
      std::vector<int> key;
      for (int s : g.at(v).succ) key.push_back(cls[s]);
      fresh[v] = sig.emplace(std::pair(cls[v], std::move(key)), static_cast<int>(sig.size()))
                     .first->second;
    }
    if (fresh == cls) break;
    cls = std::move(fresh);
  }
  int classes = 0;
  for (int c : cls) classes = std::max(classes, c + 1);
  std::vector<int> rep(classes, -1);
  for (int v = g.size() - 1; v >= 0; --v) rep[cls[v]] = v;
  std::vector<GraphNode<L>> verts(classes);
  for (int c = 0; c < classes; ++c) {
    verts[c].label = g.at(rep[c]).label;
    for (int s : g.at(rep[c]).succ) verts[c].succ.push_back(cls[s]);
  }
  return Graph<L>(g.declared_arity(), cls[g.root()], std::move(verts));
}

// Text format, one directive per line with # comments:
//   root <v>
//   vertex <v> <symbol> <succ...>
//   hole <v> <i>
// The declared arity is 1 + the largest hole index (0 without holes), the
// symbol's arity is the successor count. print_graph emits vertices in the
// canonical breadth-first order, so print(parse(text)) is a fixed point.
Graph<Sym> parse_graph(const std::string& text);
std::string print_graph(const Graph<Sym>& g);

}  // namespace treealg
