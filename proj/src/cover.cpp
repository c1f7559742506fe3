#include "holonet/cover.hpp"

#include <algorithm>
#include <numeric>
#include <regex>
#include <set>

namespace holonet {

namespace {

std::pair<RegionId, RegionId> ordered(RegionId a, RegionId b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

Cover make_cover(std::vector<std::string> names) {
  Cover c;
  c.regions = std::move(names);
  return c;
}

void add_overlap(Cover& c, RegionId a, RegionId b, int component = 0) {
  c.overlaps.push_back({a, b, component});
}

void add_disjoint_complement(Cover& c) {
  for (RegionId a = 0; a < c.region_count(); ++a) {
    for (RegionId b = a + 1; b < c.region_count(); ++b) {
      if (!c.overlapping(a, b)) c.disjoint_pairs.emplace_back(a, b);
    }
  }
}

}  // namespace

std::optional<RegionId> Cover::find(std::string_view id) const {
  for (RegionId r = 0; r < region_count(); ++r) {
    if (regions[static_cast<std::size_t>(r)] == id) return r;
  }
  return std::nullopt;
}

const std::string& Cover::name(RegionId r) const {
  if (r < 0 || r >= region_count()) throw CoverError("region index out of range: " + std::to_string(r));
  return regions[static_cast<std::size_t>(r)];
}

bool Cover::has_overlap(RegionId a, RegionId b, int component) const {
  const auto [lo, hi] = ordered(a, b);
  return std::any_of(overlaps.begin(), overlaps.end(), [&](const Overlap& o) {
    const auto [olo, ohi] = ordered(o.first, o.second);
    return olo == lo && ohi == hi && o.component == component;
  });
}

std::vector<int> Cover::components(RegionId a, RegionId b) const {
  const auto [lo, hi] = ordered(a, b);
  std::vector<int> out;
  for (const auto& o : overlaps) {
    const auto [olo, ohi] = ordered(o.first, o.second);
    if (olo == lo && ohi == hi) out.push_back(o.component);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Cover::causally_disjoint(RegionId a, RegionId b) const {
  const auto key = ordered(a, b);
  return std::any_of(disjoint_pairs.begin(), disjoint_pairs.end(),
                     [&](const auto& p) { return ordered(p.first, p.second) == key; });
}

void Cover::validate() const {
  const int n = region_count();
  if (n == 0) throw CoverError("cover has no regions");
  std::set<std::string> names;
  for (const auto& r : regions) {
    if (r.empty()) throw CoverError("empty region id");
    if (!names.insert(r).second) throw CoverError("duplicate region id '" + r + "'");
  }
  if (base_region < 0 || base_region >= n) throw CoverError("base region is not a region of the cover");

  auto check_region = [&](RegionId r, const char* where) {
    if (r < 0 || r >= n) throw CoverError(std::string(where) + " references unknown region index " + std::to_string(r));
  };

  std::set<std::tuple<RegionId, RegionId, int>> seen;
  for (const auto& o : overlaps) {
    check_region(o.first, "overlap");
    check_region(o.second, "overlap");
    if (o.first == o.second) throw CoverError("overlap of region '" + name(o.first) + "' with itself");
    if (o.component < 0) throw CoverError("negative overlap component id");
    const auto [lo, hi] = ordered(o.first, o.second);
    if (!seen.emplace(lo, hi, o.component).second) {
      throw CoverError("duplicate overlap component " + name(lo) + "-" + name(hi) + "#" + std::to_string(o.component));
    }
  }
  for (const auto& t : triples) {
    for (int k = 0; k < 3; ++k) {
      check_region(t.regions[static_cast<std::size_t>(k)], "triple");
    }
    for (int k = 0; k < 3; ++k) {
      const RegionId a = t.regions[static_cast<std::size_t>(k)];
      const RegionId b = t.regions[static_cast<std::size_t>((k + 1) % 3)];
      if (!has_overlap(a, b, t.components[static_cast<std::size_t>(k)])) {
        throw CoverError("triple needs overlap " + name(a) + "-" + name(b) + "#" +
                         std::to_string(t.components[static_cast<std::size_t>(k)]));
      }
    }
  }
  for (const auto& [a, b] : disjoint_pairs) {
    check_region(a, "disjoint pair");
    check_region(b, "disjoint pair");
    if (a == b) throw CoverError("region '" + name(a) + "' declared disjoint from itself");
    if (overlapping(a, b)) {
      throw CoverError("pair " + name(a) + "-" + name(b) + " is both overlapping and causally disjoint");
    }
  }

  // Connectivity of the nerve.
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (const auto& o : overlaps) parent[static_cast<std::size_t>(root(o.first))] = root(o.second);
  for (RegionId r = 0; r < n; ++r) {
    if (root(r) != root(base_region)) {
      throw CoverError("cover is disconnected: region '" + name(r) + "' is not reachable from the base region");
    }
  }
}

// ---------------------------------------------------------------- builtins

BuiltinSpec parse_builtin(std::string_view name, std::optional<int> n) {
  static const std::regex with_arg(R"(^\s*([a-z_]+)\s*\(\s*(-?\d+)\s*\)\s*$)");
  std::string key(name);
  std::smatch m;
  if (std::regex_match(key, m, with_arg)) {
    key = m[1].str();
    n = std::stoi(m[2].str());
  }
  BuiltinSpec spec;
  if (key == "circle") {
    spec.topology = BuiltinTopology::Circle;
    spec.n = n.value_or(3);
    if (spec.n < 3) throw CoverError("circle cover needs n >= 3, got " + std::to_string(spec.n));
    return spec;
  }
  if (n) throw CoverError("builtin '" + key + "' takes no parameter");
  if (key == "annulus") spec.topology = BuiltinTopology::Annulus;
  else if (key == "disk") spec.topology = BuiltinTopology::Disk;
  else if (key == "figure_eight") spec.topology = BuiltinTopology::FigureEight;
  else if (key == "torus") spec.topology = BuiltinTopology::Torus;
  else throw CoverError("unknown builtin topology '" + std::string(name) + "'");
  return spec;
}

std::string to_string(const BuiltinSpec& spec) {
  switch (spec.topology) {
    case BuiltinTopology::Circle: return "circle(" + std::to_string(spec.n) + ")";
    case BuiltinTopology::Annulus: return "annulus";
    case BuiltinTopology::Disk: return "disk";
    case BuiltinTopology::FigureEight: return "figure_eight";
    case BuiltinTopology::Torus: return "torus";
  }
  return "?";
}

Cover builtin_cover(const BuiltinSpec& spec) {
  Cover c;
  switch (spec.topology) {
    case BuiltinTopology::Circle: {
      if (spec.n < 3) throw CoverError("circle cover needs n >= 3, got " + std::to_string(spec.n));
      std::vector<std::string> names;
      for (int i = 0; i < spec.n; ++i) names.push_back("r" + std::to_string(i));
      c = make_cover(std::move(names));
      for (int i = 0; i < spec.n; ++i) add_overlap(c, i, (i + 1) % spec.n);
      add_disjoint_complement(c);
      break;
    }
    case BuiltinTopology::Annulus: {
      // Inner ring i0..i2 (ids 0..2) around the excised core, outer ring
      // o0..o2 (ids 3..5); o_k sits between i_k and i_{k+1}.
      c = make_cover({"i0", "i1", "i2", "o0", "o1", "o2"});
      auto in = [](int k) { return k % 3; };
      auto out = [](int k) { return 3 + k % 3; };
      for (int k = 0; k < 3; ++k) {
        add_overlap(c, in(k), in(k + 1));
        add_overlap(c, out(k), out(k + 1));
        add_overlap(c, in(k), out(k));
        add_overlap(c, in(k + 1), out(k));
      }
      for (int k = 0; k < 3; ++k) {
        c.triples.push_back({{in(k), out(k), in(k + 1)}, {0, 0, 0}});
        c.triples.push_back({{in(k + 1), out(k), out(k + 1)}, {0, 0, 0}});
      }
      add_disjoint_complement(c);
      break;
    }
    case BuiltinTopology::Disk: {
      c = make_cover({"d0", "d1", "d2"});
      add_overlap(c, 0, 1);
      add_overlap(c, 1, 2);
      add_overlap(c, 0, 2);
      c.triples.push_back({{0, 1, 2}, {0, 0, 0}});
      break;
    }
    case BuiltinTopology::FigureEight: {
      c = make_cover({"c", "a1", "a2", "b1", "b2"});
      add_overlap(c, 0, 1);
      add_overlap(c, 1, 2);
      add_overlap(c, 2, 0);
      add_overlap(c, 0, 3);
      add_overlap(c, 3, 4);
      add_overlap(c, 4, 0);
      add_disjoint_complement(c);
      c.labels = {{0, "crossing"}};
      break;
    }
    case BuiltinTopology::Torus: {
      std::vector<std::string> names;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) names.push_back("t" + std::to_string(i) + std::to_string(j));
      }
      c = make_cover(std::move(names));
      auto at = [](int i, int j) { return 3 * ((i + 3) % 3) + (j + 3) % 3; };
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          add_overlap(c, at(i, j), at(i + 1, j));
          add_overlap(c, at(i, j), at(i, j + 1));
          add_overlap(c, at(i, j), at(i + 1, j + 1));
        }
      }
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          c.triples.push_back({{at(i, j), at(i + 1, j), at(i + 1, j + 1)}, {0, 0, 0}});
          c.triples.push_back({{at(i, j), at(i + 1, j + 1), at(i, j + 1)}, {0, 0, 0}});
        }
      }
      add_disjoint_complement(c);
      break;
    }
  }
  c.base_region = 0;
  c.validate();
  return c;
}

Cover builtin_cover(std::string_view name, std::optional<int> n) { return builtin_cover(parse_builtin(name, n)); }

std::map<std::string, std::vector<RegionId>> builtin_loops(const BuiltinSpec& spec) {
  std::map<std::string, std::vector<RegionId>> loops;
  switch (spec.topology) {
    case BuiltinTopology::Circle: {
      std::vector<RegionId> w;
      for (int i = 0; i < spec.n; ++i) w.push_back(i);
      w.push_back(0);
      loops["winding"] = w;
      break;
    }
    case BuiltinTopology::Annulus:
      loops["winding"] = {0, 1, 2, 0};
      loops["outer"] = {0, 3, 4, 5, 3, 0};
      break;
    case BuiltinTopology::Disk:
      loops["around"] = {0, 1, 2, 0};
      break;
    case BuiltinTopology::FigureEight:
      loops["a"] = {0, 1, 2, 0};
      loops["b"] = {0, 3, 4, 0};
      // a·b·a⁻¹·b⁻¹, traversed right to left.
      loops["commutator"] = {0, 4, 3, 0, 2, 1, 0, 3, 4, 0, 1, 2, 0};
      break;
    case BuiltinTopology::Torus:
      loops["a"] = {0, 3, 6, 0};
      loops["b"] = {0, 1, 2, 0};
      loops["commutator"] = {0, 2, 1, 0, 6, 3, 0, 1, 2, 0, 3, 6, 0};
      break;
  }
  return loops;
}

}  // namespace holonet
