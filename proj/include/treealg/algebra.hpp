#pragma once

// Finite tree algebras: ordered carriers per arity with a partial product on
// trees over the carrier, plus the constructions around them (free algebras,
// the D and U lifts with their canonical embeddings, binary products) and the
// sampling law checkers.
//
// Products are supplied as evaluators, not full tables: a table over every
// tree shape would be infinite. The law checkers are therefore refuters, not
// verifiers: they search for counterexamples on sampled inputs and report the
// minimal witness found. Checks run sequentially so reports are reproducible.
//
// Definedness convention when two product values are compared: both sides
// undefined counts as agreement, one side defined and the other not is a
// failure. The associativity sample itself needs T pi to be defined, since
// otherwise there is no value tree whose product could be compared; those
// samples are reported as skipped instead of failed. The bounded free algebra
// shows the distinction is forced: a component exceeding the bound can sit
// below an unused hole, where flattening forgets it entirely, so no
// definedness predicate on the flat side can see it.
//
// Algebra file, one directive per line ('#' starts a comment):
//   algebra <name>
//   elem <name> <arity>
//   le <a> <b>              order between elements of equal arity
//   pi <term> = <element>   product of a generator term
// Terms use holes x0..x{m-1} and default to declared arity m; the element on
// the right must live in that arity. Evaluation applies the table directly,
// falls back to the unit law on singletons, and otherwise contracts innermost
// one-level subterms bottom-up (last in shortlex order first), so a consistent
// table extends compositionally and an inconsistent one is caught by the law
// checkers rather than smoothed over.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treealg/alphabet.hpp"
#include "treealg/order.hpp"
#include "treealg/report.hpp"
#include "treealg/trees.hpp"

namespace treealg {

// Carrier element: index into the slice of its arity.
struct AlgElem {
  int arity = 0;
  int index = 0;
  friend bool operator==(const AlgElem&, const AlgElem&) = default;
  friend auto operator<=>(const AlgElem&, const AlgElem&) = default;
};
inline int arity_of(const AlgElem& e) { return e.arity; }

struct FiniteTreeAlgebra {
  std::string name;
  std::vector<SlicePtr> slices;  // index = arity
  std::function<std::optional<AlgElem>(const Tree<AlgElem>&)> product;
  // Term-string -> element-name lines of a table-defined algebra; empty for
  // evaluator-backed algebras, which cannot be printed.
  std::map<std::string, std::string> pi_table;

  int max_arity() const { return static_cast<int>(slices.size()) - 1; }
  const PosetSlice& slice(int arity) const { return *slices[static_cast<std::size_t>(arity)]; }
  SlicePtr slice_ptr(int arity) const { return slices[static_cast<std::size_t>(arity)]; }
  bool valid(const AlgElem& e) const {
    return e.arity >= 0 && e.arity <= max_arity() && e.index >= 0 &&
           e.index < slice(e.arity).size();
  }
  bool leq(const AlgElem& a, const AlgElem& b) const {
    return a.arity == b.arity && slice(a.arity).leq(a.index, b.index);
  }
  const std::string& elem_name(const AlgElem& e) const { return slice(e.arity).name(e.index); }
  // Name lookup across all arities; names need not be unique between arities
  // for evaluator-backed algebras, in which case the lowest arity wins.
  std::optional<AlgElem> find(const std::string& name) const;
  std::vector<AlgElem> elements() const;
  std::string term_string(const Tree<AlgElem>& t) const;
};

// Total arity-preserving map between carriers. Morphism laws are checked by
// check_morphism, not enforced here.
struct AlgebraMorphism {
  std::string name;
  FiniteTreeAlgebra source;
  FiniteTreeAlgebra target;
  std::function<AlgElem(const AlgElem&)> map;
};

// Sampling budget shared by the checkers. outer_size bounds the outer tree of
// a nested TT-sample, keeping nesting depth at two; tree_size bounds each
// component.
struct Sampler {
  std::size_t samples = 500;
  int tree_size = 8;
  int outer_size = 4;
  std::uint64_t seed = 0;
};

// All trees over the alphabet with at most size_bound vertices, declared at
// the given arity (holes may be used or not, each at most once).
std::vector<Tree<Sym>> all_trees(const RankedAlphabet& a, int declared, int size_bound);
// All such trees of height at most depth_bound (a single vertex has height 1).
std::vector<Tree<Sym>> all_trees_depth(const RankedAlphabet& a, int declared, int depth_bound);

// Free algebra on bounded trees: the carrier at arity n is every tree of size
// at most size_bound declared at n, the product flattens and stays defined
// exactly when the result fits the bound. A legitimately partial algebra.
FiniteTreeAlgebra free_algebra(const RankedAlphabet& a, int size_bound);

// Conversions between carrier trees and symbol trees for table algebras and
// witnesses. carrier_alphabet requires globally unique, parseable names.
RankedAlphabet carrier_alphabet(const FiniteTreeAlgebra& alg);
Tree<AlgElem> decode_term(const FiniteTreeAlgebra& alg, const Tree<Sym>& t);

// D-lift: carrier = all downsets of each slice, product = downward closure of
// the defined section products. Total. guard bounds the antichain enumeration
// (2^|slice| subsets are inspected).
//
// The empty downset needs care: a tree with an empty label has no sections,
// so its product is the empty downset even when the empty label sits below an
// unused hole that flattening would discard. Associativity over the lifted
// carrier therefore only holds on trees whose labels are non-empty; the
// distributive law behind it carries the same restriction.
FiniteTreeAlgebra lift_down(const FiniteTreeAlgebra& alg, std::size_t guard = std::size_t{1} << 20);
// U-lift: carrier = all upsets ordered by reverse inclusion; the product is
// the upward closure of the section products and stays undefined if any
// section product is undefined.
FiniteTreeAlgebra lift_up(const FiniteTreeAlgebra& alg, std::size_t guard = std::size_t{1} << 20);

// Encoding of a downset / upset over the base slice of the given arity as an
// element of the lifted carrier.
AlgElem encode_down(const FiniteTreeAlgebra& lifted, int arity, const DownSet& d);
AlgElem encode_up(const FiniteTreeAlgebra& lifted, int arity, const UpSet& u);

// eta : a -> the principal downset of a, into lift_down(alg); zeta dually.
// zeta is product-preserving for total algebras; on partial ones the U product
// of a principal tree may be undefined, which check_morphism will surface.
AlgebraMorphism embed_down(const FiniteTreeAlgebra& alg);
AlgebraMorphism embed_up(const FiniteTreeAlgebra& alg);

// Componentwise product algebra and its projection morphisms.
FiniteTreeAlgebra product_algebra(const FiniteTreeAlgebra& a, const FiniteTreeAlgebra& b);
std::pair<AlgebraMorphism, AlgebraMorphism> product_projections(const FiniteTreeAlgebra& a,
                                                                const FiniteTreeAlgebra& b);

// The two-valued algebra that merely asks whether a 1 occurs anywhere. Its
// product ignores which arguments are actually used, so associativity fails
// once a subtree vanishes into an unused hole.
FiniteTreeAlgebra naive_example_algebra(int max_arity = 3);
// The repaired version: elements carry the set of argument positions they use,
// and only labels reachable through those sets contribute.
FiniteTreeAlgebra corrected_example_algebra(int max_arity = 3);

// Lattice counterexamples for the continuity checks: unary c over the diamond
// bot <= x,y <= top. threshold_top sends only top to top, so c(sup{x,y})
// jumps above sup{c x, c y}; threshold_bot dually breaks meets.
FiniteTreeAlgebra threshold_top_algebra();
FiniteTreeAlgebra threshold_bot_algebra();

// pi o sing = id exhaustively over the carrier, pi o flat = pi o T pi on
// sampled nested trees (samples where T pi is undefined are skipped, see the
// header comment), and sampled monotonicity. extras are checked before
// sampling, so a known witness always appears in the report.
LawReport check_monad_laws(const FiniteTreeAlgebra& alg, const Sampler& s = {},
                           const std::vector<Tree<Tree<AlgElem>>>& extras = {});

// The four distributive-law equations for dist : T D -> D T over the ordered
// alphabet, compared as materialized families of trees. The flattening
// equation is sampled with non-empty labels only (see lift_down on why an
// empty label under a vanishing position breaks it).
LawReport check_dist_law(const RankedAlphabet& a, const Sampler& s = {});

// f o pi = pi o T f on sampled source trees (source-defined inputs only),
// plus exhaustive arity preservation and monotonicity of the map.
LawReport check_morphism(const AlgebraMorphism& m, const Sampler& s = {});

// pi(T sup S) = sup { pi(s) : s section of S } on sampled set-labelled trees.
// A side is defined when every ingredient is (all sups exist, every section
// product is defined, the value set has a sup).
LawReport check_join_continuity(const FiniteTreeAlgebra& alg, const Sampler& s = {});

// Meet-continuous embedding of the subset C: pi(T inf S) = inf { pi(s) } for
// set labels drawn from C, definedness compared in both directions.
LawReport check_meet_embedding(const FiniteTreeAlgebra& alg, const std::vector<AlgElem>& C,
                               const Sampler& s = {});

enum class ExtensionKind { join, meet };

// For sampled pairs of set-labelled trees with equal pointwise sup (resp.
// inf), the sup (resp. inf) of the section products must agree.
LawReport check_extension_condition(ExtensionKind kind, const FiniteTreeAlgebra& alg,
                                    const std::vector<AlgElem>& C, const Sampler& s = {});

FiniteTreeAlgebra parse_algebra(const std::string& text);
// Canonical printing of carrier, order, and table lines. Evaluator-backed
// products are not serialisable; their pi_table is empty.
std::string print_algebra(const FiniteTreeAlgebra& alg);

}  // namespace treealg
