#pragma once

// Elements and products of Branch(S) = D(U(TA(S))), the canonical
// branch-continuous algebra over a Wilke algebra S. An element is a downset
// of the upset lattice over a TA slice, kept as the antichain of its maximal
// members; the full carrier is doubly exponential in the slice, so elements
// are only materialized as they are constructed. branch_product evaluates the
// product of a finite labelled tree by two-level section enumeration without
// touching the rest of the lattice; branch_algebra builds the literal
// composite of the D and U lifts, which is feasible for very small S only but
// gives an independent evaluator and a carrier the generic law checkers can
// sample from.

#include <cstdint>
#include <string>
#include <vector>

#include "treealg/algebra.hpp"
#include "treealg/omega.hpp"
#include "treealg/order.hpp"
#include "treealg/report.hpp"
#include "treealg/trees.hpp"
#include "treealg/treesg.hpp"

namespace treealg {

// Antichain of upsets of ta_slice(S, arity), maximal under the upset order
// (reverse inclusion). A body containing the empty upset denotes every upset
// of its arity, since the empty upset is top; an empty body is bottom.
struct BranchElement {
  int arity = 0;
  std::vector<UpSet> body;
};
inline int arity_of(const BranchElement& e) { return e.arity; }

// Canonical form: members re-canonicalised, dominated and duplicate members
// dropped, deterministic member order. Every operation below returns
// canonical elements and equality assumes them.
BranchElement branch_of(int arity, std::vector<UpSet> members);
bool operator==(const BranchElement& a, const BranchElement& b);

// Downset containment and union, the order and join of the D level.
bool bleq(const BranchElement& a, const BranchElement& b);
BranchElement bjoin(const BranchElement& a, const BranchElement& b);

BranchElement branch_bottom(int arity);
// eta(zeta(e)): the principal downset of the principal upset of e.
BranchElement branch_unit(const WilkeAlgebra& s, const TAElement& e);

// Nested antichain printer, `{ {a, b(x0)}, {} }` style; bottom prints `{ }`.
std::string print_branch(const BranchElement& e);

// Product of a BranchElement-labelled tree: outer sections pick one body
// member per vertex, the inner value is the upward closure of ta_product over
// all choices from the members' denotations, and an outer section is dropped
// when any of its inner products is undefined. Total. Throws BudgetExceeded
// when the section count at either level exceeds the budget.
BranchElement branch_product(const WilkeAlgebra& s, const Tree<BranchElement>& t,
                             std::size_t budget = 1000000);

// TA(S) packaged as a finite tree algebra: slices from ta_slice, product from
// ta_product. The base of the lifts below.
FiniteTreeAlgebra ta_algebra(const WilkeAlgebra& s, int max_arity);

// The materialized composite D(U(TA(S))). Both lift stages enumerate their
// carriers under the guard, so this blows the budget beyond toy S.
FiniteTreeAlgebra branch_algebra(const WilkeAlgebra& s, int max_arity,
                                 std::size_t guard = std::size_t{1} << 20);

// Index of a BranchElement in the materialized carrier. up must be the
// intermediate lift_up(ta_algebra(...)) and branch the composite over it.
AlgElem encode_branch(const FiniteTreeAlgebra& branch, const FiniteTreeAlgebra& up,
                      const BranchElement& e);

// Samples trees labelled by joins of nonempty upsets and compares
// branch_product against the join of c_product over every tree labelled in
// cl(S) that sits below the sample. Oversized section spaces are skipped, not
// failed. At arities above zero the sampled members range over port-carrying
// elements, keeping the sections ranked; trace products ignore nullary values
// at inner vertices, so unranked labels compare section against trace
// semantics, which the formula does not relate.
LawReport join_generator_formula_check(const WilkeAlgebra& s, int max_arity, std::size_t samples,
                                       std::uint64_t seed, std::size_t budget = 1000000);

// True iff the principal upset of the nullary q0 lies in the downset denoted
// by e, which must have arity 0.
bool recognize(const WilkeAlgebra& s, const BranchElement& e, int q0);

}  // namespace treealg
