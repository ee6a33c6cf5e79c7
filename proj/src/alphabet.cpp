#include "treealg/alphabet.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace treealg {

std::vector<std::pair<int, std::vector<std::string>>> tokenize_lines(const std::string& text) {
  std::vector<std::pair<int, std::vector<std::string>>> out;
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (!toks.empty()) out.emplace_back(no, std::move(toks));
  }
  return out;
}

bool valid_symbol_name(const std::string& name) {
  if (name.empty() || name == kCutSymbolName) return false;
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '+' ||
          c == ':' || c == '-'))
      return false;
  if (name[0] == 'x' && name.size() > 1 &&
      std::all_of(name.begin() + 1, name.end(),
                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return false;
  return true;
}

RankedAlphabet::RankedAlphabet(std::vector<std::vector<std::string>> names_by_arity,
                               const std::vector<std::pair<std::string, std::string>>& le_pairs) {
  std::vector<std::vector<std::pair<int, int>>> le(names_by_arity.size());
  auto locate = [&](const std::string& n) -> std::pair<int, int> {
    for (std::size_t a = 0; a < names_by_arity.size(); ++a) {
      auto& v = names_by_arity[a];
      auto it = std::find(v.begin(), v.end(), n);
      if (it != v.end()) return {static_cast<int>(a), static_cast<int>(it - v.begin())};
    }
    throw std::invalid_argument("unknown symbol in order pair: " + n);
  };
  for (const auto& [x, y] : le_pairs) {
    auto [ax, ix] = locate(x);
    auto [ay, iy] = locate(y);
    if (ax != ay)
      throw std::invalid_argument("order relates symbols of different arities: " + x + ", " + y);
    le[static_cast<std::size_t>(ax)].emplace_back(ix, iy);
  }
  for (std::size_t a = 0; a < names_by_arity.size(); ++a)
    slices_.push_back(std::make_shared<PosetSlice>(names_by_arity[a], le[a]));
}

std::optional<Sym> RankedAlphabet::find(const std::string& name) const {
  for (int a = 0; a <= max_arity(); ++a)
    if (slice(a).index_of(name)) return Sym{name, a};
  return std::nullopt;
}

bool RankedAlphabet::contains(const Sym& s) const {
  return s.arity >= 0 && s.arity <= max_arity() && slice(s.arity).index_of(s.name).has_value();
}

bool RankedAlphabet::leq(const Sym& a, const Sym& b) const {
  if (a.arity != b.arity) return false;
  auto ia = slice(a.arity).index_of(a.name);
  auto ib = slice(b.arity).index_of(b.name);
  if (!ia || !ib) throw std::invalid_argument("symbol not in alphabet");
  return slice(a.arity).leq(*ia, *ib);
}

std::vector<Sym> RankedAlphabet::symbols() const {
  std::vector<Sym> out;
  for (int a = 0; a <= max_arity(); ++a)
    for (int i = 0; i < slice(a).size(); ++i) out.push_back(Sym{slice(a).name(i), a});
  return out;
}

RankedAlphabet parse_alphabet(const std::string& text) {
  std::vector<std::vector<std::string>> names;
  std::vector<std::pair<std::string, std::string>> le;
  for (const auto& [no, toks] : tokenize_lines(text)) {
    if (toks[0] == "symbol") {
      if (toks.size() != 3) throw ParseError("expected: symbol <name> <arity>", no);
      if (!valid_symbol_name(toks[1])) throw ParseError("invalid symbol name: " + toks[1], no);
      int ar;
      try {
        ar = std::stoi(toks[2]);
      } catch (const std::exception&) {
        throw ParseError("invalid arity: " + toks[2], no);
      }
      if (ar < 0 || ar > 31) throw ParseError("arity out of range: " + toks[2], no);
      if (static_cast<int>(names.size()) <= ar) names.resize(static_cast<std::size_t>(ar) + 1);
      for (const auto& v : names)
        if (std::find(v.begin(), v.end(), toks[1]) != v.end())
          throw ParseError("duplicate symbol: " + toks[1], no);
      names[static_cast<std::size_t>(ar)].push_back(toks[1]);
    } else if (toks[0] == "le") {
      if (toks.size() != 3) throw ParseError("expected: le <a> <b>", no);
      le.emplace_back(toks[1], toks[2]);
    } else {
      throw ParseError("unknown directive: " + toks[0], no);
    }
  }
  try {
    return RankedAlphabet(std::move(names), le);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

std::string print_alphabet(const RankedAlphabet& a) {
  std::ostringstream os;
  for (const Sym& s : a.symbols()) os << "symbol " << s.name << ' ' << s.arity << '\n';
  for (int ar = 0; ar <= a.max_arity(); ++ar)
    for (int i = 0; i < a.slice(ar).size(); ++i)
      for (int j = 0; j < a.slice(ar).size(); ++j)
        if (i != j && a.slice(ar).leq(i, j))
          os << "le " << a.slice(ar).name(i) << ' ' << a.slice(ar).name(j) << '\n';
  return os.str();
}

namespace {

struct TermParser {
  const std::string& text;
  const RankedAlphabet& alphabet;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at offset " + std::to_string(pos));
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size()) {
      char c = text[pos];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '+' ||
          c == ':' || c == '-')
        ++pos;
      else
        break;
    }
    if (start == pos) fail("expected a symbol name");
    return text.substr(start, pos - start);
  }

  void build(typename Tree<Sym>::Nodes& nodes, const Address& at) {
    std::string name = ident();
    if (name.size() > 1 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      nodes.emplace(at, NodeLabel<Sym>(Hole{std::stoi(name.substr(1))}));
      return;
    }
    auto sym = alphabet.find(name);
    if (!sym) fail("unknown symbol " + name);
    nodes.emplace(at, NodeLabel<Sym>(*sym));
    skip_ws();
    int want = sym->arity;
    if (want == 0) return;
    if (pos >= text.size() || text[pos] != '(')
      fail("symbol " + name + " needs " + std::to_string(want) + " arguments");
    ++pos;
    for (int k = 0; k < want; ++k) {
      build(nodes, at + k);
      skip_ws();
      char expect = (k + 1 == want) ? ')' : ',';
      if (pos >= text.size() || text[pos] != expect)
        fail(std::string("expected '") + expect + "' in arguments of " + name);
      ++pos;
    }
  }
};

}  // namespace

Tree<Sym> parse_term(const std::string& text, const RankedAlphabet& a,
                     std::optional<int> declared_arity) {
  TermParser p{text, a};
  typename Tree<Sym>::Nodes nodes;
  p.build(nodes, Address{});
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input after term");
  int max_hole = -1;
  for (const auto& [v, l] : nodes)
    if (std::holds_alternative<Hole>(l)) max_hole = std::max(max_hole, std::get<Hole>(l).index);
  int declared = declared_arity.value_or(max_hole + 1);
  try {
    return Tree<Sym>(declared, std::move(nodes));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

std::string print_term(const Tree<Sym>& t) {
  return to_term_string(t, [](const Sym& s) { return s.name; });
}

Tree<Sym> random_tree(const RankedAlphabet& a, int size_bound, int declared_arity,
                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_tree_over(a.symbols(), declared_arity, size_bound, rng);
}

}  // namespace treealg
