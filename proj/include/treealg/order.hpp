#pragma once

// Finite posets and their downward / upward closed subsets. Down- and upsets
// are kept as the antichain of their extremal elements; all operations
// canonicalise. Upsets are ordered by reverse inclusion, so the empty
// antichain denotes the top element (the empty upset).

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treealg/common.hpp"

namespace treealg {

// One arity slice of an ordered ranked set: named elements with a reflexive,
// transitive, antisymmetric relation. The constructor closes the given pairs
// transitively and rejects cycles.
class PosetSlice {
 public:
  PosetSlice() = default;
  PosetSlice(std::vector<std::string> names, const std::vector<std::pair<int, int>>& le_pairs);

  int size() const { return static_cast<int>(names_.size()); }
  bool leq(int a, int b) const { return leq_[a][b]; }
  const std::string& name(int i) const { return names_[i]; }
  std::optional<int> index_of(const std::string& name) const;

  // Greatest lower / least upper bound of a non-empty subset, when it exists.
  std::optional<int> inf(const std::vector<int>& items) const;
  std::optional<int> sup(const std::vector<int>& items) const;

  bool operator==(const PosetSlice& other) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<bool>> leq_;
};

using SlicePtr = std::shared_ptr<const PosetSlice>;

// True when the two handles denote the same slice (identical or equal content).
bool same_slice(const SlicePtr& a, const SlicePtr& b);

// Downward closed subset as the antichain of its maximal elements.
struct DownSet {
  SlicePtr slice;
  std::vector<int> antichain;
};

// Upward closed subset as the antichain of its minimal elements.
struct UpSet {
  SlicePtr slice;
  std::vector<int> antichain;
};

DownSet down_of(SlicePtr slice, std::vector<int> items);
UpSet up_of(SlicePtr slice, std::vector<int> items);

// Full member list, sorted ascending.
std::vector<int> denote(const DownSet& d);
std::vector<int> denote(const UpSet& u);

bool member(const DownSet& d, int x);
bool member(const UpSet& u, int x);

// Subset test, decided by antichain domination.
bool dleq(const DownSet& lhs, const DownSet& rhs);
// Order on upsets: lhs <= rhs iff lhs is a superset of rhs.
bool uleq(const UpSet& lhs, const UpSet& rhs);

bool operator==(const DownSet& a, const DownSet& b);
bool operator==(const UpSet& a, const UpSet& b);

// Literal set operations. On downsets union is the join and intersection the
// meet; on upsets it is the other way around.
DownSet dunion(const DownSet& a, const DownSet& b);
DownSet dintersect(const DownSet& a, const DownSet& b);
UpSet uunion(const UpSet& a, const UpSet& b);
UpSet uintersect(const UpSet& a, const UpSet& b);

// Image of a downset under a partial map into target; points where the map is
// undefined are dropped, so the result is always defined.
DownSet map_down(const std::function<std::optional<int>(int)>& f, const DownSet& d,
                 SlicePtr target);
// Image of an upset. Undefined on any member makes the whole image undefined.
std::optional<UpSet> map_up(const std::function<std::optional<int>(int)>& f, const UpSet& u,
                            SlicePtr target);

struct ClMeets {
  std::vector<int> elements;              // generators plus all existing infima
  std::vector<std::vector<int>> skipped;  // subsets without an infimum in the slice
};

// Closure of the generators under non-empty meets taken in the raw slice.
// Enumerates every non-empty subset; guard bounds 2^|gens|.
ClMeets cl_meets(const SlicePtr& slice, const std::vector<int>& gens,
                 std::size_t guard = std::size_t{1} << 16);

// The same closure in the upset representation, where the meet of principal
// upsets is their union. Every non-empty subset of generators contributes.
std::vector<UpSet> cl_meets_upsets(const SlicePtr& slice, const std::vector<int>& gens,
                                   std::size_t guard = std::size_t{1} << 16);

std::string to_string(const DownSet& d);
std::string to_string(const UpSet& u);

}  // namespace treealg
