#include "holonet/path.hpp"

#include <optional>

namespace holonet {

PosetPath PosetPath::empty_at(RegionId r) { return PosetPath(r, {}); }

PosetPath::PosetPath(RegionId start, std::vector<EdgeStep> steps) : start_(start), end_(start), steps_(std::move(steps)) {
  for (const auto& s : steps_) {
    if (s.from != end_) {
      throw PathError("path steps do not chain: step leaves region #" + std::to_string(s.from) +
                      " but the path is at #" + std::to_string(end_));
    }
    end_ = s.to;
  }
}

PosetPath path_compose(const PosetPath& p, const PosetPath& q) {
  if (p.end() != q.start()) throw PathError("path_compose: end of the first path is not the start of the second");
  std::vector<EdgeStep> steps = p.steps();
  steps.insert(steps.end(), q.steps().begin(), q.steps().end());
  return PosetPath(p.start(), std::move(steps));
}

PosetPath path_reverse(const PosetPath& p) {
  std::vector<EdgeStep> steps;
  steps.reserve(p.steps().size());
  for (auto it = p.steps().rbegin(); it != p.steps().rend(); ++it) steps.push_back({it->from, it->to, it->component});
  return PosetPath(p.end(), std::move(steps));
}

PosetPath approximate_curve(const Cover& cover, std::span<const RegionId> visited) {
  if (visited.empty()) throw PathError("approximate_curve: no regions visited");
  for (RegionId r : visited) cover.name(r);  // range check
  std::vector<EdgeStep> steps;
  for (std::size_t i = 1; i < visited.size(); ++i) {
    const RegionId from = visited[i - 1];
    const RegionId to = visited[i];
    if (from == to) {
      steps.push_back({to, from, -1});
      continue;
    }
    const auto comps = cover.components(from, to);
    if (comps.empty()) {
      throw PathError("approximate_curve: regions '" + cover.name(from) + "' and '" + cover.name(to) +
                      "' do not overlap");
    }
    steps.push_back({to, from, comps.front()});
  }
  return PosetPath(visited.front(), std::move(steps));
}

PosetPath close_at_root(const NerveGraph& nerve, const PosetPath& p) {
  const PosetPath in(nerve.root, nerve.tree_steps(nerve.root, p.start()));
  const PosetPath out(p.end(), nerve.tree_steps(p.end(), nerve.root));
  return path_compose(path_compose(in, p), out);
}

Word path_word(const NerveGraph& nerve, const Pi1Presentation& pres, const PosetPath& p) {
  Word w;
  for (const auto& s : p.steps()) w = step_word(nerve, pres, s) * w;
  return w;
}

LoopClass loop_class(const NerveGraph& nerve, const Pi1Presentation& pres, const PosetPath& p) {
  if (!p.is_loop()) throw PathError("loop_class: path is not a loop");
  // Tree segments to the base contribute the empty word, so the raw word of
  // p already is the word of its closure at the base.
  return {pres.normalize(path_word(nerve, pres, p)), pres.normal_form != NormalForm::Unresolved};
}

PosetPath edge_loop(const NerveGraph& nerve, int edge_index) {
  const auto& e = nerve.edges.at(static_cast<std::size_t>(edge_index));
  const PosetPath cross(e.lo, {EdgeStep{e.hi, e.lo, e.component}});
  return close_at_root(nerve, cross);
}

}  // namespace holonet

namespace holonet {

namespace {

std::size_t pick(std::size_t n, std::mt19937_64& rng) {
  return static_cast<std::size_t>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
}

std::vector<EdgeStep> exits(const NerveGraph& nerve, RegionId r) {
  std::vector<EdgeStep> out;
  for (const auto& e : nerve.edges) {
    if (e.lo == r) out.push_back({e.hi, e.lo, e.component});
    if (e.hi == r) out.push_back({e.lo, e.hi, e.component});
  }
  return out;
}

// Two-step detour through the third corner of a triangle containing the step.
std::optional<std::pair<EdgeStep, EdgeStep>> detour(const NerveGraph& nerve, const EdgeStep& s, std::mt19937_64& rng) {
  std::vector<std::pair<EdgeStep, EdgeStep>> options;
  for (const auto& t : nerve.triangles) {
    for (int k = 0; k < 3; ++k) {
      const RegionId a = t.regions[static_cast<std::size_t>(k)];
      const RegionId b = t.regions[static_cast<std::size_t>((k + 1) % 3)];
      const RegionId c = t.regions[static_cast<std::size_t>((k + 2) % 3)];
      const int ab = t.components[static_cast<std::size_t>(k)];
      const int bc = t.components[static_cast<std::size_t>((k + 1) % 3)];
      const int ca = t.components[static_cast<std::size_t>((k + 2) % 3)];
      if (s.component != ab) continue;
      if (s.from == a && s.to == b) options.push_back({EdgeStep{c, a, ca}, EdgeStep{b, c, bc}});
      if (s.from == b && s.to == a) options.push_back({EdgeStep{c, b, bc}, EdgeStep{a, c, ca}});
    }
  }
  if (options.empty()) return std::nullopt;
  return options[pick(options.size(), rng)];
}

}  // namespace

PosetPath random_homotopic_variant(const NerveGraph& nerve, const PosetPath& p, int moves, std::mt19937_64& rng) {
  std::vector<EdgeStep> steps = p.steps();
  for (int m = 0; m < moves; ++m) {
    const std::size_t at = pick(steps.size() + 1, rng);
    const RegionId here = at == 0 ? p.start() : steps[at - 1].to;
    const auto kind = pick(3, rng);
    if (kind == 0) {
      const auto out = exits(nerve, here);
      if (out.empty()) continue;
      const EdgeStep s = out[pick(out.size(), rng)];
      steps.insert(steps.begin() + static_cast<std::ptrdiff_t>(at), {s, EdgeStep{s.from, s.to, s.component}});
    } else if (kind == 1) {
      steps.insert(steps.begin() + static_cast<std::ptrdiff_t>(at), EdgeStep{here, here, -1});
    } else {
      if (at == steps.size() || steps[at].to == steps[at].from) continue;
      if (const auto d = detour(nerve, steps[at], rng)) {
        steps[at] = d->second;
        steps.insert(steps.begin() + static_cast<std::ptrdiff_t>(at), d->first);
      }
    }
  }
  return PosetPath(p.start(), std::move(steps));
}

PosetPath random_walk(const NerveGraph& nerve, RegionId start, int length, std::mt19937_64& rng) {
  std::vector<EdgeStep> steps;
  RegionId here = start;
  for (int i = 0; i < length; ++i) {
    const auto out = exits(nerve, here);
    if (out.empty()) break;
    steps.push_back(out[pick(out.size(), rng)]);
    here = steps.back().to;
  }
  return PosetPath(start, std::move(steps));
}

}  // namespace holonet
