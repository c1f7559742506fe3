#pragma once

#include <random>
#include <span>
#include <vector>

#include "holonet/nerve.hpp"

namespace holonet {

/// A chain of elementary steps between regions. Steps are stored in
/// traversal order; in product notation the first step is the rightmost
/// factor, p = (o o_n) * ... * (o_1 a).
class PosetPath {
 public:
  /// The empty path sitting in region r.
  static PosetPath empty_at(RegionId r);
  /// Throws PathError when consecutive steps do not chain.
  PosetPath(RegionId start, std::vector<EdgeStep> steps);

  RegionId start() const { return start_; }
  RegionId end() const { return end_; }
  bool is_loop() const { return start_ == end_; }
  bool empty() const { return steps_.empty(); }
  const std::vector<EdgeStep>& steps() const { return steps_; }

  bool operator==(const PosetPath&) const = default;

 private:
  RegionId start_ = 0;
  RegionId end_ = 0;
  std::vector<EdgeStep> steps_;
};

/// p followed by q; requires end(p) == start(q).
PosetPath path_compose(const PosetPath& p, const PosetPath& q);
PosetPath path_reverse(const PosetPath& p);

/// One step per consecutive pair, through the lowest overlap component.
/// A repeated region yields a stay step.
PosetPath approximate_curve(const Cover& cover, std::span<const RegionId> visited);

/// The path base -> start(p) along the tree, then p, then end(p) -> base.
PosetPath close_at_root(const NerveGraph& nerve, const PosetPath& p);

/// Element of π₁ at the base region, as a word over the presentation's
/// generators. `canonical` is false when the presentation does not decide
/// equality, in which case only free reduction has been applied.
struct LoopClass {
  Word word;
  bool canonical = true;

  bool operator==(const LoopClass&) const = default;
};

/// Raw word of a path: step words multiplied with the first step rightmost.
Word path_word(const NerveGraph& nerve, const Pi1Presentation& pres, const PosetPath& p);

/// Throws PathError if p is not a loop or uses a missing overlap.
LoopClass loop_class(const NerveGraph& nerve, const Pi1Presentation& pres, const PosetPath& p);

/// The loop base -> lo -> hi -> base through a nerve edge.
PosetPath edge_loop(const NerveGraph& nerve, int edge_index);

/// Homotopic variant of p: `moves` random insertions of back-and-forth
/// excursions, stays and triangle detours.
PosetPath random_homotopic_variant(const NerveGraph& nerve, const PosetPath& p, int moves, std::mt19937_64& rng);

/// Random walk of `length` overlap steps from `start`.
PosetPath random_walk(const NerveGraph& nerve, RegionId start, int length, std::mt19937_64& rng);

}  // namespace holonet
