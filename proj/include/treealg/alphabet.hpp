#pragma once

// Ranked alphabets and the textual formats for alphabets and terms.
//
// Alphabet file, one directive per line ('#' starts a comment):
//   symbol <name> <arity>
//   le <a> <b>          order between symbols of equal arity
// Term syntax: name, name(term,...,term), or x<i> for the i-th variable.

#include <optional>
#include <string>
#include <vector>

#include "treealg/order.hpp"
#include "treealg/trees.hpp"

namespace treealg {

class RankedAlphabet {
 public:
  RankedAlphabet() = default;
  // names_by_arity[a] lists the symbols of arity a; le pairs must relate
  // symbols of one arity.
  RankedAlphabet(std::vector<std::vector<std::string>> names_by_arity,
                 const std::vector<std::pair<std::string, std::string>>& le_pairs);

  int max_arity() const { return static_cast<int>(slices_.size()) - 1; }
  const PosetSlice& slice(int arity) const { return *slices_[static_cast<std::size_t>(arity)]; }
  SlicePtr slice_ptr(int arity) const { return slices_[static_cast<std::size_t>(arity)]; }

  std::optional<Sym> find(const std::string& name) const;
  bool contains(const Sym& s) const;
  bool leq(const Sym& a, const Sym& b) const;
  // All symbols, by arity then slice order.
  std::vector<Sym> symbols() const;

 private:
  std::vector<SlicePtr> slices_;
};

// Reserved truncation marker used by graph windows; no alphabet may declare it.
inline constexpr const char* kCutSymbolName = "<cut>";
inline Sym cut_symbol() { return Sym{kCutSymbolName, 0}; }

// Valid symbol and identifier names: alnum plus . _ + : -, not of the
// hole form x<digits>, not the reserved cut marker.
bool valid_symbol_name(const std::string& name);

RankedAlphabet parse_alphabet(const std::string& text);
std::string print_alphabet(const RankedAlphabet& a);

// Parses a term over the alphabet. The declared arity defaults to one more
// than the largest hole index (zero for a closed term).
Tree<Sym> parse_term(const std::string& text, const RankedAlphabet& a,
                     std::optional<int> declared_arity = std::nullopt);
std::string print_term(const Tree<Sym>& t);

// Random member of T_n over the alphabet with at most size_bound vertices.
Tree<Sym> random_tree(const RankedAlphabet& a, int size_bound, int declared_arity,
                      std::uint64_t seed);

// Splits text into lines, dropping blank lines and '#' comments; returns
// (1-based line number, tokenised line).
std::vector<std::pair<int, std::vector<std::string>>> tokenize_lines(const std::string& text);

}  // namespace treealg
