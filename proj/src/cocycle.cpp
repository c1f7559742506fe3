#include "holonet/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace holonet {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int find_edge(const std::vector<NerveEdge>& edges, RegionId a, RegionId b, int component) {
  const RegionId lo = std::min(a, b);
  const RegionId hi = std::max(a, b);
  auto it = std::lower_bound(edges.begin(), edges.end(), std::tuple{lo, hi, component},
                             [](const NerveEdge& e, const std::tuple<RegionId, RegionId, int>& key) {
                               return std::tuple{e.lo, e.hi, e.component} < key;
                             });
  if (it == edges.end() || it->lo != lo || it->hi != hi || it->component != component) {
    throw PathError("no overlap component #" + std::to_string(lo) + "-#" + std::to_string(hi) + "/" +
                    std::to_string(component));
  }
  return static_cast<int>(it - edges.begin());
}

}  // namespace

// ---------------------------------------------------------------- SigmaMorphism

SigmaMorphism::SigmaMorphism(const Pi1Presentation& pres, GroupDescriptor target,
                             std::map<std::string, GroupValue> values)
    : target_(target) {
  for (const auto& [sym, v] : values) {
    if (pres.generator_index(sym) < 0) throw MissingGenerator("'" + sym + "' is not a generator of the presentation");
    if (!(v.descriptor() == target_)) {
      throw VariantMismatch("value for '" + sym + "' is not in " + to_string(target_.kind) +
                            (target_.kind == GroupKind::MatrixUn ? "(" + std::to_string(target_.dimension) + ")" : ""));
    }
  }
  for (const auto& g : pres.free_generators) {
    if (!values.count(g)) throw MissingGenerator("no value for generator '" + g + "'");
  }
  assignment_ = std::move(values);
  for (const auto& [sym, w] : pres.eliminated) {
    if (!assignment_.count(sym)) assignment_.emplace(sym, evaluate(w));
  }
}

SigmaMorphism SigmaMorphism::trivial(const Pi1Presentation& pres, GroupDescriptor target) {
  std::map<std::string, GroupValue> values;
  for (const auto& g : pres.free_generators) values.emplace(g, GroupValue::identity(target));
  return SigmaMorphism(pres, target, std::move(values));
}

const GroupValue& SigmaMorphism::at(const std::string& generator) const {
  auto it = assignment_.find(generator);
  if (it == assignment_.end()) throw MissingGenerator("no value for generator '" + generator + "'");
  return it->second;
}

GroupValue SigmaMorphism::evaluate(const Word& w) const {
  GroupValue acc = GroupValue::identity(target_);
  for (const auto& l : w.letters()) {
    const GroupValue& v = at(l.symbol);
    acc = compose(acc, l.exponent > 0 ? v : inverse(v));
  }
  return acc;
}

std::vector<RelationViolation> validate_sigma(const Pi1Presentation& pres, const SigmaMorphism& sigma, double tol) {
  for (const auto& g : pres.generators) sigma.at(g);
  std::vector<RelationViolation> out;
  const GroupValue id = GroupValue::identity(sigma.target());
  for (std::size_t i = 0; i < pres.relations.size(); ++i) {
    const double r = distance(sigma.evaluate(pres.relations[i]), id);
    if (r > tol) out.push_back({i, pres.relations[i], r});
  }
  return out;
}

// ---------------------------------------------------------------- TransitionCocycle

TransitionCocycle::TransitionCocycle(const NerveGraph& nerve, std::vector<GroupValue> forward)
    : edges_(nerve.edges),
      group_(forward.empty() ? GroupDescriptor::u1() : forward.front().descriptor()),
      forward_(std::move(forward)),
      identity_(GroupValue::identity(group_)) {
  if (forward_.size() != edges_.size()) throw Error("cocycle needs one value per overlap component");
  backward_.reserve(forward_.size());
  for (const auto& v : forward_) {
    if (!(v.descriptor() == group_)) throw VariantMismatch("cocycle values live in different groups");
    backward_.push_back(inverse(v));
  }
}

const GroupValue& TransitionCocycle::value(RegionId to, RegionId from, int component) const {
  if (to == from) return identity_;
  const auto e = static_cast<std::size_t>(find_edge(edges_, to, from, component));
  return from == edges_[e].lo ? forward_[e] : backward_[e];
}

TransitionCocycle TransitionCocycle::with_edge(std::size_t edge, GroupValue forward_value) const {
  TransitionCocycle copy = *this;
  copy.backward_.at(edge) = inverse(forward_value);
  copy.forward_.at(edge) = std::move(forward_value);
  return copy;
}

TransitionCocycle transition_cocycle(const SigmaMorphism& sigma, const NerveGraph& nerve) {
  const Pi1Presentation pres = pi1_presentation(nerve);
  std::vector<GroupValue> forward;
  forward.reserve(nerve.edges.size());
  for (std::size_t e = 0; e < nerve.edges.size(); ++e) {
    const auto& edge = nerve.edges[e];
    // ℓ = tree(base->lo) · edge · tree(hi->base); tree segments carry no letters.
    const PosetPath loop = edge_loop(nerve, static_cast<int>(e));
    forward.push_back(edge.tree ? GroupValue::identity(sigma.target())
                                : sigma.evaluate(path_word(nerve, pres, loop)));
  }
  return TransitionCocycle(nerve, std::move(forward));
}

TransitionCocycle coboundary(const NerveGraph& nerve, const std::vector<GroupValue>& lambda) {
  if (static_cast<int>(lambda.size()) != nerve.vertex_count()) throw Error("coboundary needs one value per region");
  std::vector<GroupValue> forward;
  for (const auto& e : nerve.edges) {
    forward.push_back(compose(lambda[static_cast<std::size_t>(e.hi)], inverse(lambda[static_cast<std::size_t>(e.lo)])));
  }
  return TransitionCocycle(nerve, std::move(forward));
}

CocycleReport check_cocycle(const TransitionCocycle& g, const Cover& cover, double tol) {
  CocycleReport report;
  for (std::size_t t = 0; t < cover.triples.size(); ++t) {
    const auto& tri = cover.triples[t];
    const auto [r0, r1, r2] = tri.regions;
    const GroupValue lhs = compose(g.value(r0, r1, tri.components[0]), g.value(r1, r2, tri.components[1]));
    const double r = distance(lhs, g.value(r0, r2, tri.components[2]));
    report.residuals.push_back({t, r});
    report.max_residual = std::max(report.max_residual, r);
    if (!(r <= tol)) report.failing.push_back(t);
  }
  return report;
}

TrivializeResult trivialize(const TransitionCocycle& g, const NerveGraph& nerve, double tol) {
  const CocycleReport check = check_cocycle(g, nerve.cover, tol);
  if (!check.ok()) {
    throw InconsistentCocycle("trivialize: cocycle identity fails on " + std::to_string(check.failing.size()) +
                              " triple(s), max residual " + std::to_string(check.max_residual));
  }
  const GroupValue id = GroupValue::identity(g.group());
  std::vector<GroupValue> lambda(static_cast<std::size_t>(nerve.vertex_count()), id);
  for (RegionId v : nerve.bfs_order) {
    const RegionId p = nerve.parent[static_cast<std::size_t>(v)];
    if (p < 0) continue;
    const auto& e = nerve.edges[static_cast<std::size_t>(nerve.parent_edge[static_cast<std::size_t>(v)])];
    // g(p←v) = λ_p λ_v⁻¹  =>  λ_v = g(v←p) λ_p.
    lambda[static_cast<std::size_t>(v)] = compose(g.value(v, p, e.component), lambda[static_cast<std::size_t>(p)]);
  }

  double worst = 0.0;
  int offending = -1;
  int offending_length = 0;
  for (std::size_t ei = 0; ei < nerve.edges.size(); ++ei) {
    const auto& e = nerve.edges[ei];
    const GroupValue expected =
        compose(lambda[static_cast<std::size_t>(e.hi)], inverse(lambda[static_cast<std::size_t>(e.lo)]));
    const double r = distance(g.value(e.hi, e.lo, e.component), expected);
    worst = std::max(worst, r);
    if (r > tol) {
      const int length = nerve.depth[static_cast<std::size_t>(e.lo)] + nerve.depth[static_cast<std::size_t>(e.hi)] + 1;
      if (offending < 0 || length < offending_length) {
        offending = static_cast<int>(ei);
        offending_length = length;
      }
    }
  }
  if (offending >= 0) {
    PosetPath loop = edge_loop(nerve, offending);
    GroupValue h = holonomy(g, loop);
    return WitnessLoop{std::move(loop), offending, std::move(h)};
  }
  return Trivialization{std::move(lambda), worst};
}

// ---------------------------------------------------------------- FlatPotentialU1

double FlatPotentialU1::angle(RegionId to, RegionId from, int component) const {
  if (to == from) return 0.0;
  const auto e = static_cast<std::size_t>(find_edge(edges, to, from, component));
  return from == edges[e].lo ? forward[e] : -forward[e];
}

void compute_triangle_numbers(FlatPotentialU1& pot, const Cover& cover) {
  pot.triangle_numbers.clear();
  pot.triangle_defects.clear();
  for (const auto& tri : cover.triples) {
    const auto [r0, r1, r2] = tri.regions;
    const double sum = pot.angle(r0, r1, tri.components[0]) + pot.angle(r1, r2, tri.components[1]) +
                       pot.angle(r2, r0, tri.components[2]);
    const double n = std::round(sum / kTwoPi);
    pot.triangle_numbers.push_back(static_cast<long>(n));
    pot.triangle_defects.push_back(std::abs(sum - kTwoPi * n));
  }
}

FlatPotentialU1 FlatPotentialU1::from_primitives(const NerveGraph& nerve, std::vector<double> phi,
                                                 const std::vector<long>& shifts) {
  if (static_cast<int>(phi.size()) != nerve.vertex_count()) throw Error("one primitive per region required");
  FlatPotentialU1 pot;
  pot.edges = nerve.edges;
  for (std::size_t e = 0; e < nerve.edges.size(); ++e) {
    const long k = e < shifts.size() ? shifts[e] : 0;
    pot.forward.push_back(phi[static_cast<std::size_t>(nerve.edges[e].hi)] -
                          phi[static_cast<std::size_t>(nerve.edges[e].lo)] + kTwoPi * static_cast<double>(k));
  }
  pot.primitives = std::move(phi);
  compute_triangle_numbers(pot, nerve.cover);
  return pot;
}

FlatPotentialU1 FlatPotentialU1::shifted(const Cover& cover, std::size_t edge, long k) const {
  FlatPotentialU1 copy = *this;
  copy.forward.at(edge) += kTwoPi * static_cast<double>(k);
  compute_triangle_numbers(copy, cover);
  return copy;
}

FlatPotentialU1 lift_potential(const TransitionCocycle& g, const NerveGraph& nerve) {
  if (g.group().kind != GroupKind::PhaseU1) throw VariantMismatch("lift_potential needs a U(1) cocycle");
  FlatPotentialU1 pot;
  pot.edges = g.edges();
  for (std::size_t e = 0; e < g.edge_count(); ++e) pot.forward.push_back(g.forward(e).angle());
  compute_triangle_numbers(pot, nerve.cover);
  if (check_cocycle(g, nerve.cover).ok()) {
    const TrivializeResult result = trivialize(g, nerve);
    if (const auto* t = std::get_if<Trivialization>(&result)) {
      std::vector<double> phi;
      for (const auto& l : t->lambda) phi.push_back(l.angle());
      pot.primitives = std::move(phi);
    }
  }
  return pot;
}

GroupValue holonomy(const TransitionCocycle& g, const PosetPath& p) {
  GroupValue acc = GroupValue::identity(g.group());
  for (const auto& s : p.steps()) acc = compose(g.value(s), acc);
  return acc;
}

GroupValue holonomy(const FlatPotentialU1& pot, const PosetPath& p) {
  double total = 0.0;
  for (const auto& s : p.steps()) total += pot.angle(s);
  return GroupValue::phase(total);
}

}  // namespace holonet
