#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "holonet/error.hpp"

namespace holonet {

/// Index of a region within its Cover.
using RegionId = int;

/// One connected component of the intersection of two regions.
struct Overlap {
  RegionId first = 0;
  RegionId second = 0;
  int component = 0;

  bool operator==(const Overlap&) const = default;
};

/// A non-empty triple intersection. `components[k]` names the overlap
/// component of the pair (regions[k], regions[(k+1) % 3]) that the triple
/// intersection lies in. The region order fixes the triangle's orientation.
struct Triple {
  std::array<RegionId, 3> regions{};
  std::array<int, 3> components{};

  bool operator==(const Triple&) const = default;
};

/// A finite cover by simply connected regions, given combinatorially.
struct Cover {
  std::vector<std::string> regions;  // region ids; RegionId indexes this list
  std::vector<Overlap> overlaps;
  std::vector<Triple> triples;
  std::vector<std::pair<RegionId, RegionId>> disjoint_pairs;
  RegionId base_region = 0;
  std::map<RegionId, std::string> labels;  // optional human names

  int region_count() const { return static_cast<int>(regions.size()); }
  std::optional<RegionId> find(std::string_view id) const;
  const std::string& name(RegionId r) const;

  bool has_overlap(RegionId a, RegionId b, int component) const;
  /// Component ids of a ∩ b in increasing order; empty when disjoint.
  std::vector<int> components(RegionId a, RegionId b) const;
  bool overlapping(RegionId a, RegionId b) const { return !components(a, b).empty(); }
  /// a ⊥ b as declared in disjoint_pairs.
  bool causally_disjoint(RegionId a, RegionId b) const;

  /// Throws CoverError naming the first violated invariant.
  void validate() const;
};

enum class BuiltinTopology { Circle, Annulus, Disk, FigureEight, Torus };

struct BuiltinSpec {
  BuiltinTopology topology = BuiltinTopology::Circle;
  int n = 3;  // circle only
};

/// Parses "circle", "circle(5)", "annulus", "disk", "figure_eight", "torus".
BuiltinSpec parse_builtin(std::string_view name, std::optional<int> n = std::nullopt);
std::string to_string(const BuiltinSpec& spec);

/// Fixture covers:
///   circle(n)     ring r0..r{n-1}, no triples, π₁ ≅ ℤ
///   annulus       triangulated ring (inner i0..i2, outer o0..o2), π₁ ≅ ℤ
///   disk          three pairwise overlapping regions with one triple, π₁ = 1
///   figure_eight  two rings through a shared center c, π₁ ≅ F₂
///   torus         3×3 periodic grid with diagonals, π₁ ≅ ℤ²
Cover builtin_cover(const BuiltinSpec& spec);
Cover builtin_cover(std::string_view name, std::optional<int> n = std::nullopt);

/// Named visited-region loops that come with a builtin cover (e.g. the
/// annulus "winding" loop, the figure-eight "a", "b" and "commutator").
std::map<std::string, std::vector<RegionId>> builtin_loops(const BuiltinSpec& spec);

}  // namespace holonet
