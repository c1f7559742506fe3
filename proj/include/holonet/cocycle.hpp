#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "holonet/group.hpp"
#include "holonet/nerve.hpp"
#include "holonet/path.hpp"

namespace holonet {

/// A morphism σ: π₁ → G given on the presentation's generators.
class SigmaMorphism {
 public:
  /// Values for eliminated generators that are not supplied are derived from
  /// the presentation's elimination words. Throws MissingGenerator when a free
  /// generator has no value, VariantMismatch when values disagree on G.
  SigmaMorphism(const Pi1Presentation& pres, GroupDescriptor target, std::map<std::string, GroupValue> values);

  /// σ ≡ 1.
  static SigmaMorphism trivial(const Pi1Presentation& pres, GroupDescriptor target);

  const GroupDescriptor& target() const { return target_; }
  const std::map<std::string, GroupValue>& assignment() const { return assignment_; }
  const GroupValue& at(const std::string& generator) const;

  /// Product of generator values, leftmost letter leftmost.
  GroupValue evaluate(const Word& w) const;

 private:
  GroupDescriptor target_;
  std::map<std::string, GroupValue> assignment_;
};

struct RelationViolation {
  std::size_t relation = 0;  // index into Pi1Presentation::relations
  Word word;
  double residual = 0.0;
};

/// Empty when every relation evaluates to the identity within `tol`.
std::vector<RelationViolation> validate_sigma(const Pi1Presentation& pres, const SigmaMorphism& sigma,
                                              double tol = kGroupTolerance);

/// g on every ordered overlap component. `forward[e]` transports from
/// edges[e].lo to edges[e].hi; the reverse direction stores its inverse.
class TransitionCocycle {
 public:
  TransitionCocycle(const NerveGraph& nerve, std::vector<GroupValue> forward);

  const GroupDescriptor& group() const { return group_; }
  std::size_t edge_count() const { return forward_.size(); }
  /// g for the step from `from` into `to` across `component`; identity for stays.
  const GroupValue& value(RegionId to, RegionId from, int component) const;
  const GroupValue& value(const EdgeStep& s) const { return value(s.to, s.from, s.component); }
  const GroupValue& forward(std::size_t edge) const { return forward_[edge]; }
  const std::vector<NerveEdge>& edges() const { return edges_; }

  /// Copy with one edge's forward value replaced.
  TransitionCocycle with_edge(std::size_t edge, GroupValue forward_value) const;

 private:
  std::vector<NerveEdge> edges_;
  GroupDescriptor group_;
  std::vector<GroupValue> forward_;
  std::vector<GroupValue> backward_;
  GroupValue identity_;
};

/// g_{oa} = σ(ℓ(oa)) where ℓ(oa) runs base -> a -> o -> base along the tree.
TransitionCocycle transition_cocycle(const SigmaMorphism& sigma, const NerveGraph& nerve);

/// g_{oa} := λ_o λ_a⁻¹ for per-region values λ.
TransitionCocycle coboundary(const NerveGraph& nerve, const std::vector<GroupValue>& lambda);

struct TripleResidual {
  std::size_t triple = 0;
  double residual = 0.0;
};

struct CocycleReport {
  double max_residual = 0.0;
  std::vector<TripleResidual> residuals;  // one per triple, cover order
  std::vector<std::size_t> failing;       // triples above tolerance

  bool ok() const { return failing.empty(); }
};

/// ‖g(r0←r1)·g(r1←r2) − g(r0←r2)‖ for every triple.
CocycleReport check_cocycle(const TransitionCocycle& g, const Cover& cover, double tol = kGroupTolerance);

struct Trivialization {
  std::vector<GroupValue> lambda;  // per region, λ_root = 1
  double reconstruction_residual = 0.0;
};

struct WitnessLoop {
  PosetPath loop;
  int edge = -1;  // the offending non-tree edge
  GroupValue holonomy;
};

using TrivializeResult = std::variant<Trivialization, WitnessLoop>;

/// Solves g_{oa} = λ_o λ_a⁻¹ along the spanning tree. Throws
/// InconsistentCocycle when check_cocycle fails.
TrivializeResult trivialize(const TransitionCocycle& g, const NerveGraph& nerve, double tol = kGroupTolerance);

/// Real lifts Â of a U(1) cocycle with their triangle integers.
struct FlatPotentialU1 {
  std::vector<NerveEdge> edges;
  std::vector<double> forward;                   // Â for lo -> hi; the reverse is −Â
  std::optional<std::vector<double>> primitives;  // φ_o with Â_{oa} ≡ φ_o − φ_a (mod 2π)
  std::vector<long> triangle_numbers;            // (Â₀₁ + Â₁₂ + Â₂₀) / 2π per triple
  std::vector<double> triangle_defects;          // distance of each sum from 2πℤ

  /// Â for the step from `from` into `to`.
  double angle(RegionId to, RegionId from, int component) const;
  double angle(const EdgeStep& s) const { return angle(s.to, s.from, s.component); }

  /// Potential built from per-region primitives: Â_{oa} = φ_o − φ_a + 2π·shift.
  static FlatPotentialU1 from_primitives(const NerveGraph& nerve, std::vector<double> phi,
                                         const std::vector<long>& shifts = {});
  /// Copy with Â on one edge moved by 2π·k, triangle numbers recomputed.
  FlatPotentialU1 shifted(const Cover& cover, std::size_t edge, long k) const;
};

/// Recomputes triangle numbers and defects in place.
void compute_triangle_numbers(FlatPotentialU1& pot, const Cover& cover);

/// Principal-branch lift of a U(1) cocycle; throws VariantMismatch otherwise.
FlatPotentialU1 lift_potential(const TransitionCocycle& g, const NerveGraph& nerve);

/// Ordered product of edge values along p, last step leftmost.
GroupValue holonomy(const TransitionCocycle& g, const PosetPath& p);
GroupValue holonomy(const FlatPotentialU1& pot, const PosetPath& p);

}  // namespace holonet
