#include "doctest.h"

#include "support.hpp"

using namespace holonet;
using namespace testing_support;

namespace {

struct Fixture {
  Cover cover;
  NerveGraph nerve;
  Pi1Presentation pres;

  explicit Fixture(const BuiltinSpec& spec)
      : cover(builtin_cover(spec)), nerve(build_nerve(cover)), pres(pi1_presentation(nerve)) {}
};

}  // namespace

TEST_CASE("sigma must cover the free generators in one group") {
  const Fixture f(parse_builtin("figure_eight"));
  CHECK_THROWS_AS(SigmaMorphism(f.pres, GroupDescriptor::u1(), {{"g0", GroupValue::phase(1.0)}}), MissingGenerator);
  CHECK_THROWS_AS(SigmaMorphism(f.pres, GroupDescriptor::u1(),
                                {{"g0", GroupValue::phase(1.0)}, {"g1", GroupValue::phase(1.0)},
                                 {"g9", GroupValue::phase(1.0)}}),
                  MissingGenerator);
  CHECK_THROWS_AS(SigmaMorphism(f.pres, GroupDescriptor::u1(),
                                {{"g0", GroupValue::phase(1.0)}, {"g1", GroupValue::identity(GroupDescriptor::un(2))}}),
                  VariantMismatch);
}

TEST_CASE("tree edges carry the identity, generator edges carry sigma") {
  std::mt19937_64 rng(5);
  for (const auto& spec : builtin_specs()) {
    CAPTURE(to_string(spec));
    const Fixture f(spec);
    const SigmaMorphism sigma = random_sigma(f.pres, GroupDescriptor::u1(), rng);
    const TransitionCocycle g = transition_cocycle(sigma, f.nerve);
    for (std::size_t e = 0; e < f.nerve.edges.size(); ++e) {
      const auto& edge = f.nerve.edges[e];
      if (edge.tree) {
        CHECK(g.forward(e).is_identity());
      } else {
        CHECK(approx_equal(g.forward(e), sigma.at(f.pres.generators[static_cast<std::size_t>(edge.generator)])));
      }
      // the reverse direction is the inverse
      CHECK(approx_equal(compose(g.value(edge.lo, edge.hi, edge.component), g.forward(e)),
                         GroupValue::identity(GroupDescriptor::u1())));
    }
  }
}

TEST_CASE("holonomy of a loop is sigma of its class") {
  std::mt19937_64 rng(9);
  for (const auto& spec : builtin_specs()) {
    const Fixture f(spec);
    for (const GroupDescriptor& gd : {GroupDescriptor::u1(), GroupDescriptor::un(2)}) {
      const SigmaMorphism sigma = random_sigma(f.pres, gd, rng);
      const TransitionCocycle g = transition_cocycle(sigma, f.nerve);
      for (const auto& [name, visited] : builtin_loops(spec)) {
        CAPTURE(name);
        const PosetPath loop = approximate_curve(f.cover, visited);
        const Word w = loop_class(f.nerve, f.pres, loop).word;
        CHECK(distance(holonomy(g, loop), evaluate_word(sigma.assignment(), w, gd)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("annulus winding loops pick up k times the phase") {
  const Fixture f(parse_builtin("annulus"));
  const PosetPath once = approximate_curve(f.cover, winding_sequence({0, 1, 2}, 1));
  const Word w = loop_class(f.nerve, f.pres, once).word;
  REQUIRE(w.size() == 1);
  for (double theta : {kPi / 7, kPi / 2, 1.0}) {
    // σ on the generator chosen so that the winding loop itself has phase θ
    const double gen = w.letters().front().exponent > 0 ? theta : -theta;
    const SigmaMorphism sigma(f.pres, GroupDescriptor::u1(), {{w.letters().front().symbol, GroupValue::phase(gen)}});
    const TransitionCocycle g = transition_cocycle(sigma, f.nerve);
    for (int k = -3; k <= 3; ++k) {
      const PosetPath loop = approximate_curve(f.cover, winding_sequence({0, 1, 2}, k));
      CHECK(distance(holonomy(g, loop), GroupValue::phase(k * theta)) <= 1e-10);
    }
  }
}

TEST_CASE("a broken cocycle is reported per triple and refused by trivialize") {
  const Fixture f(parse_builtin("disk"));
  const SigmaMorphism sigma = SigmaMorphism::trivial(f.pres, GroupDescriptor::u1());
  const TransitionCocycle g = transition_cocycle(sigma, f.nerve);
  CHECK(check_cocycle(g, f.cover).ok());
  const TransitionCocycle bad = g.with_edge(0, GroupValue::phase(0.3));
  const CocycleReport rep = check_cocycle(bad, f.cover);
  CHECK_FALSE(rep.ok());
  CHECK(rep.failing.size() == 1);
  CHECK(rep.max_residual == doctest::Approx(0.3));
  CHECK_THROWS_AS(trivialize(bad, f.nerve), InconsistentCocycle);
}

TEST_CASE("coboundaries are trivialized and reconstructed") {
  std::mt19937_64 rng(21);
  for (const auto& spec : builtin_specs()) {
    const Fixture f(spec);
    for (const GroupDescriptor& gd : {GroupDescriptor::u1(), GroupDescriptor::un(2)}) {
      std::vector<GroupValue> lambda;
      for (RegionId r = 0; r < f.nerve.vertex_count(); ++r) {
        lambda.push_back(gd.kind == GroupKind::PhaseU1 ? GroupValue::phase(uniform(rng, -kPi, kPi))
                                                        : GroupValue::matrix(random_su2(rng)));
      }
      const TransitionCocycle g = coboundary(f.nerve, lambda);
      CHECK(check_cocycle(g, f.cover).max_residual <= 1e-12);
      const TrivializeResult res = trivialize(g, f.nerve);
      const auto* t = std::get_if<Trivialization>(&res);
      REQUIRE(t != nullptr);
      CHECK(t->reconstruction_residual <= 1e-10);
      CHECK(t->lambda[static_cast<std::size_t>(f.nerve.root)].is_identity());
      // λ' = λ·λ_root⁻¹
      const GroupValue root_inv = inverse(lambda[static_cast<std::size_t>(f.nerve.root)]);
      for (RegionId r = 0; r < f.nerve.vertex_count(); ++r) {
        CHECK(distance(t->lambda[static_cast<std::size_t>(r)], compose(lambda[static_cast<std::size_t>(r)], root_inv)) <=
              1e-10);
      }
    }
  }
}

TEST_CASE("non-trivial sigma yields a witness loop with sigma's holonomy") {
  std::mt19937_64 rng(33);
  for (const auto& spec : builtin_specs()) {
    const Fixture f(spec);
    if (f.pres.free_generators.empty()) continue;
    const SigmaMorphism sigma = random_sigma(f.pres, GroupDescriptor::u1(), rng);
    const TransitionCocycle g = transition_cocycle(sigma, f.nerve);
    const TrivializeResult res = trivialize(g, f.nerve);
    const auto* w = std::get_if<WitnessLoop>(&res);
    REQUIRE(w != nullptr);
    CHECK(w->loop.is_loop());
    CHECK_FALSE(w->holonomy.is_identity());
    CHECK(distance(w->holonomy, sigma.evaluate(loop_class(f.nerve, f.pres, w->loop).word)) <= 1e-10);
    CHECK_FALSE(f.nerve.edges[static_cast<std::size_t>(w->edge)].tree);
  }
}

TEST_CASE("relation violations are detected") {
  const Fixture f(parse_builtin("torus"));
  std::mt19937_64 rng(2);
  std::map<std::string, GroupValue> values;
  for (const auto& gen : f.pres.free_generators) values.emplace(gen, GroupValue::matrix(random_su2(rng)));
  const SigmaMorphism sigma(f.pres, GroupDescriptor::un(2), values);
  CHECK_FALSE(validate_sigma(f.pres, sigma).empty());
  const SigmaMorphism commuting = random_sigma(f.pres, GroupDescriptor::un(2), rng);
  CHECK(validate_sigma(f.pres, commuting).empty());
  CHECK(check_cocycle(transition_cocycle(commuting, f.nerve), f.cover).max_residual <= 1e-10);
}

TEST_CASE("flat potentials: integer triangle sums and matching holonomy") {
  std::mt19937_64 rng(17);
  for (const auto& spec : builtin_specs()) {
    CAPTURE(to_string(spec));
    const Fixture f(spec);
    const SigmaMorphism sigma = random_sigma(f.pres, GroupDescriptor::u1(), rng);
    const TransitionCocycle g = transition_cocycle(sigma, f.nerve);
    const FlatPotentialU1 pot = lift_potential(g, f.nerve);
    CHECK(pot.triangle_numbers.size() == f.cover.triples.size());
    for (double d : pot.triangle_defects) CHECK(d <= 1e-12);
    for (const auto& [name, visited] : builtin_loops(spec)) {
      const PosetPath loop = approximate_curve(f.cover, visited);
      CHECK(distance(holonomy(pot, loop), holonomy(g, loop)) <= 1e-12);
    }
    CHECK(pot.primitives.has_value() == f.pres.free_generators.empty());
  }
}

TEST_CASE("primitives satisfy A_oa = phi_o - phi_a") {
  std::mt19937_64 rng(4);
  const Fixture f(parse_builtin("annulus"));
  std::vector<double> phi;
  for (int r = 0; r < f.nerve.vertex_count(); ++r) phi.push_back(uniform(rng, -3.0, 3.0));
  const FlatPotentialU1 pot = FlatPotentialU1::from_primitives(f.nerve, phi);
  for (const auto& e : f.nerve.edges) {
    CHECK(pot.angle(e.hi, e.lo, e.component) ==
          doctest::Approx(phi[static_cast<std::size_t>(e.hi)] - phi[static_cast<std::size_t>(e.lo)]));
  }
  for (long n : pot.triangle_numbers) CHECK(n == 0);

  // lifting the exponentiated potential recovers primitives up to constants and 2πℤ
  std::vector<GroupValue> fwd;
  for (double a : pot.forward) fwd.push_back(GroupValue::phase(a));
  const FlatPotentialU1 lifted = lift_potential(TransitionCocycle(f.nerve, fwd), f.nerve);
  REQUIRE(lifted.primitives);
  for (const auto& e : f.nerve.edges) {
    const double lhs = (*lifted.primitives)[static_cast<std::size_t>(e.hi)] - (*lifted.primitives)[static_cast<std::size_t>(e.lo)];
    CHECK(angular_distance(lhs, lifted.angle(e.hi, e.lo, e.component)) <= 1e-12);
  }
}

TEST_CASE("2 pi shifts move triangle numbers, not holonomy") {
  const Fixture f(parse_builtin("annulus"));
  const FlatPotentialU1 pot = FlatPotentialU1::from_primitives(f.nerve, std::vector<double>(6, 0.0));
  const FlatPotentialU1 moved = pot.shifted(f.cover, 0, 1);
  long total_before = 0;
  long total_after = 0;
  for (long n : pot.triangle_numbers) total_before += std::labs(n);
  for (long n : moved.triangle_numbers) total_after += std::labs(n);
  CHECK(total_before == 0);
  CHECK(total_after > 0);
  const PosetPath loop = approximate_curve(f.cover, winding_sequence({0, 1, 2}, 2));
  CHECK(distance(holonomy(pot, loop), holonomy(moved, loop)) <= 1e-12);
}

TEST_CASE("lift_potential refuses matrix cocycles") {
  const Fixture f(parse_builtin("disk"));
  const TransitionCocycle g = transition_cocycle(SigmaMorphism::trivial(f.pres, GroupDescriptor::un(2)), f.nerve);
  CHECK_THROWS_AS(lift_potential(g, f.nerve), VariantMismatch);
}
