#pragma once

// Finite ordered Wilke algebras and their use on graphs: products of
// ultimately periodic words, the axiom checker, meet-continuity of the
// word product, and limit sets of additive labellings.
//
// Infinite products are only ever computed for ultimately periodic words
// (via the omega-power table) and, on graphs, through linked pairs with an
// idempotent loop product. Regular inputs never need more; the general
// infinite product of the underlying omega-semigroup stays abstract.
//
// Wilke table file, one directive per line ('#' starts a comment):
//   s0 <names...>            nullary sort
//   s1 <names...>            unary sort
//   mix <s> <a> = <b>        S1 x S0 -> S0
//   bin <s> <t> = <u>        S1 x S1 -> S1
//   omega <s> = <a>          S1 -> S0
//   le <x> <y>               order within one sort
// Names must not repeat across the two sorts, so le lines stay unambiguous.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "treealg/graphs.hpp"
#include "treealg/order.hpp"
#include "treealg/report.hpp"

namespace treealg {

// Tables hold -1 for missing entries; the accessors translate to optional.
struct WilkeAlgebra {
  SlicePtr s0, s1;
  std::vector<std::vector<int>> mixed_t;   // [s][a], values in S0
  std::vector<std::vector<int>> binary_t;  // [s][t], values in S1
  std::vector<int> omega_t;                // [s], values in S0

  WilkeAlgebra(SlicePtr s0_in, SlicePtr s1_in);

  std::optional<int> mixed(int s, int a) const { return entry(mixed_t[s][a]); }
  std::optional<int> binary(int s, int t) const { return entry(binary_t[s][t]); }
  std::optional<int> omega_power(int s) const { return entry(omega_t[s]); }

  // Fold of a non-empty S1 word by the binary table.
  std::optional<int> fold1(const std::vector<int>& word) const;

 private:
  static std::optional<int> entry(int v) {
    if (v < 0) return std::nullopt;
    return v;
  }
};

WilkeAlgebra parse_wilke(const std::string& text);
std::string print_wilke(const WilkeAlgebra& w);

// Exhaustive check of the Wilke axioms over the finite tables: associativity
// of bin and mix, (st)^w = s(ts)^w, (s^n)^w = s^w for n up to |S1|+1, and
// monotonicity of all three tables. Comparisons apply where all the needed
// entries are defined; a partial table does not fail for its gaps.
LawReport wilke_check(const WilkeAlgebra& w);

// Ultimately periodic word: either prefix + terminal (a finite word ending
// in S0) or prefix + non-empty loop.
struct UPWord {
  std::vector<int> prefix;      // S1 indices
  std::optional<int> terminal;  // S0 index; present iff loop is empty
  std::vector<int> loop;        // S1 indices
};

// "u1 u2 ; v1 v2" for prefix and loop, "u1 u2 a" for a word with terminal a.
UPWord parse_up_word(const WilkeAlgebra& w, const std::string& text);
std::string print_up_word(const WilkeAlgebra& w, const UPWord& u);

// Value of the word: fold the prefix, then mixed-multiply either the
// terminal or the omega power of the loop's fold. Any missing table entry
// makes the value undefined.
std::optional<int> up_product(const WilkeAlgebra& w, const UPWord& u);

// Edge and leaf weights on a graph. Every edge (vertex, slot) carries an S1
// value and every successor-less vertex (holes included) an S0 value.
struct AdditiveLabelling {
  Graph<Sym> graph;
  std::map<std::pair<int, int>, int> edge;
  std::map<int, int> leaf;
};

// Throws std::invalid_argument when the labelling does not cover the graph
// exactly or an index is out of range.
void validate_labelling(const WilkeAlgebra& w, const AdditiveLabelling& lab);

struct LimitSet {
  std::set<int> values;    // S0 indices
  bool undefined = false;  // some path product hit a missing table entry
};

// Values of all maximal paths from the root: finite paths fold edges into
// the leaf value; infinite paths contribute s * e^w for every reachable
// partial product s and idempotent loop product e at the same vertex. Loop
// products are saturated transitively, so compound loops are covered before
// the idempotent filter. Missing entries set the undefined flag instead of
// being dropped silently.
LimitSet limit_set(const WilkeAlgebra& w, const AdditiveLabelling& lab);

// Meet-continuity of the word product: for words whose letters are sets,
// the product of the letterwise infima equals the infimum of the products
// over all letterwise choices, and is defined iff they all are. Checked
// exhaustively for finite S1 words, words with a terminal set, and
// ultimately periodic set-words up to the length bound. Letter sets without
// an infimum in the slice are skipped; a value set without one is a
// failure. Throws BudgetExceeded when the enumeration would outgrow guard.
LawReport check_meet_continuity_sg(const WilkeAlgebra& w, int bound,
                                   std::size_t guard = std::size_t{1} << 21);

}  // namespace treealg
