#include "treealg/graphs.hpp"

#include <sstream>

namespace treealg {

Graph<Sym> parse_graph(const std::string& text) {
  struct Def {
    int line;
    bool hole;
    Sym sym;               // valid when !hole
    int hole_index = 0;    // valid when hole
    std::vector<std::string> succ;
  };
  std::vector<std::string> order;
  std::map<std::string, Def> defs;
  std::map<std::string, std::pair<int, int>> sym_arity;  // name -> (arity, line)
  std::optional<std::string> root;

  auto define = [&](const std::string& v, Def d) {
    if (!valid_symbol_name(v)) throw ParseError("bad vertex name " + v, d.line);
    if (!defs.emplace(v, std::move(d)).second)
      throw ParseError("vertex " + v + " defined twice", d.line);
    order.push_back(v);
  };

  for (const auto& [line, tokens] : tokenize_lines(text)) {
    if (tokens[0] == "root") {
      if (tokens.size() != 2) throw ParseError("root wants a vertex", line);
      if (root) throw ParseError("second root line", line);
      root = tokens[1];
    } else if (tokens[0] == "vertex") {
      if (tokens.size() < 3) throw ParseError("vertex wants a name and a symbol", line);
      if (!valid_symbol_name(tokens[2])) throw ParseError("bad symbol name " + tokens[2], line);
      Def d{line, false, Sym{tokens[2], static_cast<int>(tokens.size()) - 3}, 0,
            {tokens.begin() + 3, tokens.end()}};
      auto [it, fresh] = sym_arity.emplace(tokens[2], std::pair(d.sym.arity, line));
      if (!fresh && it->second.first != d.sym.arity)
        throw ParseError("symbol " + tokens[2] + " used with arities " +
                             std::to_string(it->second.first) + " (line " +
                             std::to_string(it->second.second) + ") and " +
                             std::to_string(d.sym.arity),
                         line);
      define(tokens[1], std::move(d));
    } else if (tokens[0] == "hole") {
      if (tokens.size() != 3) throw ParseError("hole wants a vertex and an index", line);
      int idx = -1;
      try {
        idx = std::stoi(tokens[2]);
      } catch (...) {
      }
      if (idx < 0) throw ParseError("bad hole index " + tokens[2], line);
      define(tokens[1], Def{line, true, Sym{}, idx, {}});
    } else {
      throw ParseError("unknown directive " + tokens[0], line);
    }
  }
  if (!root) throw ParseError("missing root line");
  if (!defs.count(*root)) throw ParseError("root " + *root + " is not defined");

  int declared = 0;
  for (const auto& [v, d] : defs)
    if (d.hole) declared = std::max(declared, d.hole_index + 1);

  std::map<std::string, int> id;
  for (std::size_t i = 0; i < order.size(); ++i) id[order[i]] = static_cast<int>(i);
  std::vector<GraphNode<Sym>> verts;
  for (const std::string& v : order) {
    const Def& d = defs.at(v);
    GraphNode<Sym> node;
    if (d.hole)
      node.label = Hole{d.hole_index};
    else
      node.label = d.sym;
    for (const std::string& s : d.succ) {
      auto it = id.find(s);
      if (it == id.end()) throw ParseError("unknown successor " + s, d.line);
      node.succ.push_back(it->second);
    }
    verts.push_back(std::move(node));
  }
  try {
    return Graph<Sym>(declared, id.at(*root), std::move(verts), order);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

std::string print_graph(const Graph<Sym>& g) {
  std::ostringstream os;
  os << "root " << g.vertex_name(g.root()) << "\n";
  for (int v = 0; v < g.size(); ++v) {
    const GraphNode<Sym>& node = g.at(v);
    if (const Hole* h = std::get_if<Hole>(&node.label)) {
      os << "hole " << g.vertex_name(v) << " " << h->index << "\n";
    } else {
      os << "vertex " << g.vertex_name(v) << " " << std::get<Sym>(node.label).name;
      for (int s : node.succ) os << " " << g.vertex_name(s);
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace treealg
