#pragma once

// The arity-indexed family TA(S) over a Wilke algebra: nullary elements from
// S0 and port-directed unary elements from S1. Products of finite trees and
// of graph-represented regular trees reduce to a single branch word, which is
// folded in S (with up_product for the infinite lasso case). On top of that,
// trace sets of trees labelled with meet-closure elements cl(S), represented
// as upsets over the TA slice.
//
// The regular-tree trace set goes through an auxiliary Wilke algebra whose
// sorts are upsets of S1 and of S0 plus port-tagged pairs. Both sorts carry
// an extra absorbing dead letter so that choice words whose folds hit a table
// gap stay visible through the setwise products; a branch is flagged
// undefined when its limit value carries the dead letter. Omega powers
// collect the values of all evaluable repetitions over the generated
// products and flag a repetition none of whose regroupings into powers
// evaluates; deaths that a finer re-bracketing of the underlying letters
// could rescue are flagged conservatively.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treealg/graphs.hpp"
#include "treealg/omega.hpp"
#include "treealg/order.hpp"
#include "treealg/report.hpp"
#include "treealg/trees.hpp"

namespace treealg {

// Element of TA_n(S): nullary a or b directed at port k < n. port < 0 marks
// the nullary case.
struct TAElement {
  int arity = 0;
  int value = 0;
  int port = -1;
  bool nullary() const { return port < 0; }
  friend bool operator==(const TAElement&, const TAElement&) = default;
  friend auto operator<=>(const TAElement&, const TAElement&) = default;
};
inline int arity_of(const TAElement& e) { return e.arity; }

// The slice TA_n(S) as a poset: S0 elements first, then for each port the S1
// elements, named like b(x2). Nullaries compare by S0, directed elements by
// S1 at equal ports, nothing across.
SlicePtr ta_slice(const WilkeAlgebra& s, int n);

// Position of e in ta_slice(s, e.arity), and back.
int ta_index(const WilkeAlgebra& s, const TAElement& e);
TAElement ta_at(const WilkeAlgebra& s, int n, int index);

std::string print_ta(const WilkeAlgebra& s, const TAElement& e);

// cy_sigma: reindexes the port along an injective map into [n]; nullaries are
// untouched apart from the arity.
TAElement cylinder(const std::vector<int>& sigma, int n, const TAElement& a);

// Branch word of a finite TA tree: follow the ports from the root, fold the
// S1 letters, close with the mixed product at a nullary leaf or keep the hole
// index as the port. Undefined table entries make the product undefined.
std::optional<TAElement> ta_product(const WilkeAlgebra& s, const Tree<TAElement>& t);

// The path tree the product reads: unary labels become arity-1 elements at
// port 0, the terminal vertex stays. ta_product(un_ta(t)) = ta_product(t) by
// construction.
Tree<TAElement> un_ta(const Tree<TAElement>& t);

// Same product over a graph representation. The followed path either leaves
// through a nullary or a hole, or closes into a lasso whose word is evaluated
// with up_product.
std::optional<TAElement> ta_product_regular(const WilkeAlgebra& s, const Graph<TAElement>& g);

// Label drawn from cl(S): an upset over ta_slice(s, arity).
struct ClLabel {
  int arity = 0;
  UpSet set;
};
inline int arity_of(const ClLabel& l) { return l.arity; }

ClLabel principal_cl(const WilkeAlgebra& s, const TAElement& e);
std::string print_cl(const WilkeAlgebra& s, const ClLabel& l);

// Trace values of a tree, as an upset over ta_slice(s, declared arity).
// undefined records trace words whose product has no value.
struct TraceSet {
  UpSet values;
  bool undefined = false;
};

// Per-branch enumeration: along each branch, choices are the S1 letters whose
// port-directed cylinder lies in the vertex label, closed by a dominating S0
// value at a leaf or by the hole's port. Reachable letter-fold values are
// propagated as sets, so the enumeration is polynomial.
TraceSet traces_finite(const WilkeAlgebra& s, const Tree<ClLabel>& t);

// The same trace set for a regular tree, via an additive labelling over the
// auxiliary upset algebra and limit_set. guard bounds the number of upsets
// per sort of that algebra.
TraceSet traces_regular(const WilkeAlgebra& s, const Graph<ClLabel>& g,
                        std::size_t guard = 512);

// Product over cl(S): the infimum of the trace values, which in the upset
// representation is their union. An undefined trace makes it undefined.
std::optional<UpSet> c_product(const WilkeAlgebra& s, const Tree<ClLabel>& t);
std::optional<UpSet> c_product(const WilkeAlgebra& s, const Graph<ClLabel>& g,
                               std::size_t guard = 512);

// Samples random cl(S)-labelled trees and checks each defined c_product value
// against the meet closure of the TA slice. Empty trace sets denote products
// outside cl(S) and are counted as skipped, like undefined ones.
LawReport cl_subalgebra_closure_check(const WilkeAlgebra& s, int max_arity, int samples,
                                      std::uint64_t seed);

}  // namespace treealg
