#include "holonet/nerve.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

namespace holonet {

int NerveGraph::edge_index(RegionId a, RegionId b, int component) const {
  const RegionId lo = std::min(a, b);
  const RegionId hi = std::max(a, b);
  auto it = std::lower_bound(edges.begin(), edges.end(), std::tuple{lo, hi, component},
                             [](const NerveEdge& e, const std::tuple<RegionId, RegionId, int>& key) {
                               return std::tuple{e.lo, e.hi, e.component} < key;
                             });
  if (it == edges.end() || it->lo != lo || it->hi != hi || it->component != component) return -1;
  return static_cast<int>(it - edges.begin());
}

const NerveEdge& NerveGraph::edge(RegionId a, RegionId b, int component) const {
  const int idx = edge_index(a, b, component);
  if (idx < 0) {
    throw PathError("no overlap component " + cover.name(a) + "-" + cover.name(b) + "#" + std::to_string(component));
  }
  return edges[static_cast<std::size_t>(idx)];
}

std::vector<EdgeStep> NerveGraph::tree_steps(RegionId from, RegionId to) const {
  // Climb both endpoints to their common ancestor.
  std::vector<EdgeStep> up;    // from -> ancestor
  std::vector<EdgeStep> down;  // ancestor -> to, collected backwards
  RegionId a = from;
  RegionId b = to;
  auto step_up = [&](RegionId r) {
    const auto& e = edges[static_cast<std::size_t>(parent_edge[static_cast<std::size_t>(r)])];
    return EdgeStep{parent[static_cast<std::size_t>(r)], r, e.component};
  };
  while (depth[static_cast<std::size_t>(a)] > depth[static_cast<std::size_t>(b)]) {
    up.push_back(step_up(a));
    a = parent[static_cast<std::size_t>(a)];
  }
  while (depth[static_cast<std::size_t>(b)] > depth[static_cast<std::size_t>(a)]) {
    const EdgeStep s = step_up(b);
    down.push_back({s.from, s.to, s.component});
    b = parent[static_cast<std::size_t>(b)];
  }
  while (a != b) {
    up.push_back(step_up(a));
    a = parent[static_cast<std::size_t>(a)];
    const EdgeStep s = step_up(b);
    down.push_back({s.from, s.to, s.component});
    b = parent[static_cast<std::size_t>(b)];
  }
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

NerveGraph build_nerve(const Cover& cover) { return build_nerve(cover, cover.base_region); }

NerveGraph build_nerve(const Cover& cover, RegionId root) {
  cover.validate();
  const int n = cover.region_count();
  if (root < 0 || root >= n) throw CoverError("spanning-tree root is not a region");

  NerveGraph g;
  g.cover = cover;
  g.root = root;
  for (const auto& o : cover.overlaps) {
    g.edges.push_back({std::min(o.first, o.second), std::max(o.first, o.second), o.component, false, -1});
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const NerveEdge& x, const NerveEdge& y) {
    return std::tuple{x.lo, x.hi, x.component} < std::tuple{y.lo, y.hi, y.component};
  });
  g.triangles = cover.triples;

  // Incidence lists ordered by (neighbour, component).
  std::vector<std::vector<std::pair<RegionId, int>>> incident(static_cast<std::size_t>(n));
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
    const auto& e = g.edges[static_cast<std::size_t>(i)];
    incident[static_cast<std::size_t>(e.lo)].emplace_back(e.hi, i);
    incident[static_cast<std::size_t>(e.hi)].emplace_back(e.lo, i);
  }
  for (auto& list : incident) {
    std::sort(list.begin(), list.end(), [&](const auto& x, const auto& y) {
      return std::pair{x.first, g.edges[static_cast<std::size_t>(x.second)].component} <
             std::pair{y.first, g.edges[static_cast<std::size_t>(y.second)].component};
    });
  }

  g.parent.assign(static_cast<std::size_t>(n), -1);
  g.parent_edge.assign(static_cast<std::size_t>(n), -1);
  g.depth.assign(static_cast<std::size_t>(n), -1);
  std::deque<RegionId> queue{root};
  g.depth[static_cast<std::size_t>(root)] = 0;
  while (!queue.empty()) {
    const RegionId u = queue.front();
    queue.pop_front();
    g.bfs_order.push_back(u);
    for (const auto& [v, ei] : incident[static_cast<std::size_t>(u)]) {
      if (g.depth[static_cast<std::size_t>(v)] >= 0) continue;
      g.depth[static_cast<std::size_t>(v)] = g.depth[static_cast<std::size_t>(u)] + 1;
      g.parent[static_cast<std::size_t>(v)] = u;
      g.parent_edge[static_cast<std::size_t>(v)] = ei;
      g.edges[static_cast<std::size_t>(ei)].tree = true;
      queue.push_back(v);
    }
  }
  if (static_cast<int>(g.bfs_order.size()) != n) throw CoverError("cover is disconnected");

  int next_generator = 0;
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
    if (!g.edges[static_cast<std::size_t>(i)].tree) {
      g.edges[static_cast<std::size_t>(i)].generator = next_generator++;
      g.non_tree_edges.push_back(i);
    }
  }
  return g;
}

std::string to_string(NormalForm nf) {
  switch (nf) {
    case NormalForm::Free: return "free";
    case NormalForm::FreeAbelian: return "free_abelian";
    case NormalForm::Unresolved: return "unresolved";
  }
  return "?";
}

Word step_word(const NerveGraph& nerve, const Pi1Presentation& pres, const EdgeStep& step) {
  if (step.to == step.from) return {};
  const auto& e = nerve.edge(step.to, step.from, step.component);
  if (e.tree) return {};
  return Word::generator(pres.generators[static_cast<std::size_t>(e.generator)], step.from == e.lo ? 1 : -1);
}

namespace {

Word substitute(const Word& w, const std::string& symbol, const Word& replacement) {
  Word out;
  for (const auto& l : w.letters()) {
    if (l.symbol == symbol) {
      out = out * (l.exponent > 0 ? replacement : replacement.inverse());
    } else {
      out = out * Word({l});
    }
  }
  return out;
}

// Rotation of a cyclic word so that position `pos` comes first.
Word rotate(const Word& w, std::size_t pos) {
  std::vector<Letter> letters(w.letters().begin() + static_cast<std::ptrdiff_t>(pos), w.letters().end());
  letters.insert(letters.end(), w.letters().begin(), w.letters().begin() + static_cast<std::ptrdiff_t>(pos));
  return Word(std::move(letters));
}

bool is_commutator(const Word& w, std::pair<std::string, std::string>& pair) {
  const auto& l = w.letters();
  if (l.size() != 4) return false;
  if (l[0].symbol == l[1].symbol) return false;
  if (l[2].symbol != l[0].symbol || l[2].exponent != -l[0].exponent) return false;
  if (l[3].symbol != l[1].symbol || l[3].exponent != -l[1].exponent) return false;
  pair = std::minmax(l[0].symbol, l[1].symbol);
  return true;
}

// Rank over ℚ of an integer matrix, by Euclidean row reduction.
int integer_rank(std::vector<std::vector<long>> m) {
  int rank = 0;
  const std::size_t cols = m.empty() ? 0 : m.front().size();
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(m.size()); ++c) {
    for (;;) {
      // Smallest nonzero pivot at or below `rank`.
      int pivot = -1;
      for (int r = rank; r < static_cast<int>(m.size()); ++r) {
        if (m[static_cast<std::size_t>(r)][c] != 0 &&
            (pivot < 0 || std::labs(m[static_cast<std::size_t>(r)][c]) <
                              std::labs(m[static_cast<std::size_t>(pivot)][c]))) {
          pivot = r;
        }
      }
      if (pivot < 0) break;
      std::swap(m[static_cast<std::size_t>(rank)], m[static_cast<std::size_t>(pivot)]);
      bool cleared = true;
      const auto& prow = m[static_cast<std::size_t>(rank)];
      for (int r = rank + 1; r < static_cast<int>(m.size()); ++r) {
        auto& row = m[static_cast<std::size_t>(r)];
        const long q = row[c] / prow[c];
        if (q != 0) {
          for (std::size_t k = 0; k < cols; ++k) row[k] -= q * prow[k];
        }
        if (row[c] != 0) cleared = false;
      }
      if (cleared) {
        ++rank;
        break;
      }
    }
  }
  return rank;
}

}  // namespace

int Pi1Presentation::generator_index(const std::string& symbol) const {
  auto it = std::find(generators.begin(), generators.end(), symbol);
  return it == generators.end() ? -1 : static_cast<int>(it - generators.begin());
}

int Pi1Presentation::abelian_rank() const {
  std::vector<std::vector<long>> m;
  for (const auto& r : relations) {
    std::vector<long> row(generators.size(), 0);
    for (std::size_t g = 0; g < generators.size(); ++g) row[g] = r.exponent_sum(generators[g]);
    m.push_back(std::move(row));
  }
  return static_cast<int>(generators.size()) - integer_rank(std::move(m));
}

Word Pi1Presentation::normalize(const Word& w) const {
  Word out;
  for (const auto& l : w.letters()) {
    auto it = eliminated.find(l.symbol);
    if (it == eliminated.end()) {
      out = out * Word({l});
    } else {
      out = out * (l.exponent > 0 ? it->second : it->second.inverse());
    }
  }
  if (normal_form != NormalForm::FreeAbelian) return out;
  std::vector<Letter> letters;
  for (const auto& g : free_generators) {
    const int k = out.exponent_sum(g);
    for (int i = 0; i < std::abs(k); ++i) letters.push_back({g, k > 0 ? 1 : -1});
  }
  return Word(std::move(letters));
}

Pi1Presentation pi1_presentation(const NerveGraph& nerve) {
  Pi1Presentation p;
  p.base = nerve.root;
  for (int ei : nerve.non_tree_edges) {
    const auto& e = nerve.edges[static_cast<std::size_t>(ei)];
    p.generators.push_back("g" + std::to_string(e.generator));
    p.generator_edges.push_back(ei);
  }
  for (std::size_t t = 0; t < nerve.triangles.size(); ++t) {
    const auto& tri = nerve.triangles[t];
    Word w;
    for (std::size_t k = 0; k < 3; ++k) {
      const EdgeStep s{tri.regions[(k + 1) % 3], tri.regions[k], tri.components[k]};
      w = step_word(nerve, p, s) * w;  // later steps on the left
    }
    if (!w.empty()) {
      p.relations.push_back(w);
      p.relation_triangles.push_back(static_cast<int>(t));
    }
  }

  // Eliminate generators that occur exactly once in some relation.
  std::vector<Word> rels;
  for (const auto& r : p.relations) {
    Word c = r.cyclically_reduced();
    if (!c.empty()) rels.push_back(std::move(c));
  }
  std::vector<std::pair<std::string, Word>> order;
  for (;;) {
    bool progressed = false;
    for (std::size_t ri = 0; ri < rels.size() && !progressed; ++ri) {
      const Word& r = rels[ri];
      int best = -1;
      std::size_t pos = 0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        const auto& sym = r.letters()[i].symbol;
        const int gi = p.generator_index(sym);
        if (r.occurrences(sym) == 1 && gi > best) {
          best = gi;
          pos = i;
        }
      }
      if (best < 0) continue;
      const Word rotated = rotate(r, pos);
      const Letter head = rotated.letters().front();
      const Word tail(std::vector<Letter>(rotated.letters().begin() + 1, rotated.letters().end()));
      // head·tail = 1  =>  head = tail⁻¹.
      const Word solution = head.exponent > 0 ? tail.inverse() : tail;
      std::vector<Word> next;
      for (std::size_t rj = 0; rj < rels.size(); ++rj) {
        if (rj == ri) continue;
        Word c = substitute(rels[rj], head.symbol, solution).cyclically_reduced();
        if (!c.empty()) next.push_back(std::move(c));
      }
      rels = std::move(next);
      for (auto& [sym, w] : order) w = substitute(w, head.symbol, solution);
      order.emplace_back(head.symbol, solution);
      progressed = true;
    }
    if (!progressed) break;
  }
  for (auto& [sym, w] : order) p.eliminated.emplace(sym, w);
  for (const auto& g : p.generators) {
    if (!p.eliminated.count(g)) p.free_generators.push_back(g);
  }
  p.residual_relations = rels;

  if (rels.empty()) {
    p.normal_form = NormalForm::Free;
  } else {
    std::set<std::pair<std::string, std::string>> pairs;
    bool all_commutators = true;
    for (const auto& r : rels) {
      std::pair<std::string, std::string> pr;
      if (!is_commutator(r, pr)) {
        all_commutators = false;
        break;
      }
      pairs.insert(pr);
    }
    const std::size_t k = p.free_generators.size();
    p.normal_form = (all_commutators && pairs.size() == k * (k - 1) / 2) ? NormalForm::FreeAbelian
                                                                        : NormalForm::Unresolved;
  }
  return p;
}

}  // namespace holonet
