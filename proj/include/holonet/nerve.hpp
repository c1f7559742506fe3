#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "holonet/cover.hpp"
#include "holonet/group.hpp"

namespace holonet {

/// An overlap component seen as an edge of the nerve, stored with lo < hi.
struct NerveEdge {
  RegionId lo = 0;
  RegionId hi = 0;
  int component = 0;
  bool tree = false;
  int generator = -1;  // index into Pi1Presentation::generators for non-tree edges
};

/// One traversal of a nerve edge (or a stay inside a single region when
/// to == from, encoded with edge == -1).
struct EdgeStep {
  RegionId to = 0;
  RegionId from = 0;
  int component = -1;

  bool operator==(const EdgeStep&) const = default;
};

struct NerveGraph {
  Cover cover;
  RegionId root = 0;
  std::vector<NerveEdge> edges;         // sorted by (lo, hi, component)
  std::vector<Triple> triangles;        // cover triples, in cover order
  std::vector<int> parent_edge;         // per region; -1 at the root
  std::vector<RegionId> parent;         // per region; -1 at the root
  std::vector<int> depth;               // tree distance from the root
  std::vector<RegionId> bfs_order;
  std::vector<int> non_tree_edges;      // edge indices, canonical order

  int vertex_count() const { return cover.region_count(); }
  /// Edge index for the component of a ∩ b, or -1.
  int edge_index(RegionId a, RegionId b, int component) const;
  const NerveEdge& edge(RegionId a, RegionId b, int component) const;
  /// Steps along the spanning tree from `from` to `to`.
  std::vector<EdgeStep> tree_steps(RegionId from, RegionId to) const;
};

/// Breadth-first spanning tree from the cover's base region (or `root`),
/// neighbours visited in (region id, component id) order.
NerveGraph build_nerve(const Cover& cover);
NerveGraph build_nerve(const Cover& cover, RegionId root);

/// How far the generator-elimination pass got in deciding equality.
enum class NormalForm {
  Free,         // no residual relations: reduced words are canonical
  FreeAbelian,  // residual relations are exactly the commutators
  Unresolved,   // equality of words is not decided
};

std::string to_string(NormalForm nf);

struct Pi1Presentation {
  std::vector<std::string> generators;   // "g0", "g1", ... one per non-tree edge
  std::vector<int> generator_edges;      // nerve edge index per generator
  std::vector<Word> relations;           // boundary words of the triangles (nonempty only)
  std::vector<int> relation_triangles;   // triangle index per relation
  RegionId base = 0;

  // Result of eliminating generators through relations in which they occur once.
  std::vector<std::string> free_generators;
  std::map<std::string, Word> eliminated;  // generator -> word over free_generators
  std::vector<Word> residual_relations;
  NormalForm normal_form = NormalForm::Free;

  int generator_index(const std::string& symbol) const;
  /// Free rank of the abelianization.
  int abelian_rank() const;
  /// Canonical representative when normal_form != Unresolved.
  Word normalize(const Word& w) const;
};

Pi1Presentation pi1_presentation(const NerveGraph& nerve);

/// Word contributed by one step: empty for stays and tree edges, otherwise
/// the generator, inverted when the edge is crossed from hi to lo.
Word step_word(const NerveGraph& nerve, const Pi1Presentation& pres, const EdgeStep& step);

}  // namespace holonet
