#include "holonet/runner.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <memory>
#include <random>
#include <set>

#include "holonet/cocycle.hpp"
#include "holonet/nerve.hpp"
#include "holonet/path.hpp"
#include "holonet/sectors.hpp"

namespace holonet {

using nlohmann::json;

namespace {

class Deadline {
 public:
  explicit Deadline(double seconds)
      : active_(seconds > 0.0),
        end_(std::chrono::steady_clock::now() +
             std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(seconds))) {}

  void poll() const {
    if (active_ && std::chrono::steady_clock::now() > end_) throw TimeoutError("task exceeded its time limit");
  }

 private:
  bool active_;
  std::chrono::steady_clock::time_point end_;
};

std::string group_label(const GroupDescriptor& g) {
  if (g.kind == GroupKind::PhaseU1) return "U(1)";
  return "U(" + std::to_string(g.dimension) + ")";
}

std::vector<std::string> visited_names(const Cover& cover, const PosetPath& p) {
  std::vector<std::string> out{cover.name(p.start())};
  for (const auto& s : p.steps()) out.push_back(cover.name(s.to));
  return out;
}

std::string edge_label(const Cover& cover, const NerveEdge& e) {
  return cover.name(e.lo) + "-" + cover.name(e.hi) + "#" + std::to_string(e.component);
}

struct Pipeline {
  const ScenarioConfig& cfg;
  Tolerances tol;
  std::optional<std::uint64_t> seed;
  NerveGraph nerve;
  Pi1Presentation pres;
  std::optional<SigmaMorphism> sigma;
  std::optional<TransitionCocycle> g;
  std::shared_ptr<const SectorContext> ctx;
  std::optional<SectorTransporter> z;
  std::optional<RhoLayerTransporter> rho;

  Pipeline(const ScenarioConfig& c, Tolerances t, std::optional<std::uint64_t> s)
      : cfg(c), tol(t), seed(s), nerve(build_nerve(c.cover)), pres(pi1_presentation(nerve)) {}

  const SigmaMorphism& morphism() {
    if (!sigma) sigma.emplace(pres, cfg.group, cfg.sigma);
    return *sigma;
  }

  const TransitionCocycle& cocycle() {
    if (!g) g.emplace(transition_cocycle(morphism(), nerve));
    return *g;
  }

  bool abelian() const { return cfg.group.kind == GroupKind::PhaseU1; }

  const SectorTransporter& transporter() {
    if (!z) {
      ctx = std::make_shared<const SectorContext>(nerve, cfg.modes_per_region, cfg.charge);
      z.emplace(twisted_transporter(ctx, cocycle()));
    }
    return *z;
  }

  const RhoLayerTransporter& rho_layer() {
    if (!rho) rho.emplace(nerve, morphism());
    return *rho;
  }

  PosetPath path(const NamedPath& p) const { return approximate_curve(cfg.cover, p.visited); }

  std::mt19937_64 rng(Task t) const {
    std::seed_seq seq{static_cast<std::uint64_t>(seed.value_or(0)), static_cast<std::uint64_t>(t)};
    return std::mt19937_64(seq);
  }

  int random_checks() const { return seed ? cfg.random_checks : 0; }
};

void add_check(TaskSection& s, std::string name, double value, double tolerance) {
  const bool pass = value <= tolerance;
  s.checks.push_back({std::move(name), value, tolerance, pass});
}

void finish(TaskSection& s) {
  s.status = std::all_of(s.checks.begin(), s.checks.end(), [](const Check& c) { return c.pass; }) ? Status::Pass
                                                                                                     : Status::Fail;
}

void task_check(Pipeline& pl, TaskSection& s, const Deadline& dl) {
  const Cover& cover = pl.cfg.cover;
  json gens = json::object();
  for (std::size_t i = 0; i < pl.pres.generators.size(); ++i) {
    gens[pl.pres.generators[i]] = edge_label(cover, pl.nerve.edges[static_cast<std::size_t>(pl.pres.generator_edges[i])]);
  }
  json elim = json::object();
  for (const auto& [sym, w] : pl.pres.eliminated) elim[sym] = w.to_string();
  s.values["generators"] = std::move(gens);
  s.values["free_generators"] = pl.pres.free_generators;
  s.values["eliminated"] = std::move(elim);
  s.values["normal_form"] = to_string(pl.pres.normal_form);
  s.values["relations"] = pl.pres.relations.size();
  s.values["regions"] = cover.regions;

  const SigmaMorphism& sigma = pl.morphism();
  const GroupValue id = GroupValue::identity(sigma.target());
  double worst_relation = 0.0;
  for (const auto& rel : pl.pres.relations) {
    worst_relation = std::max(worst_relation, distance(sigma.evaluate(rel), id));
    dl.poll();
  }
  add_check(s, "sigma.relations", worst_relation, pl.tol.group);

  const CocycleReport rep = check_cocycle(pl.cocycle(), cover, pl.tol.group);
  for (const auto& r : rep.residuals) {
    const auto& t = cover.triples[r.triple];
    add_check(s, "cocycle." + cover.name(t.regions[0]) + "," + cover.name(t.regions[1]) + "," + cover.name(t.regions[2]),
              r.residual, pl.tol.group);
  }
  finish(s);
}

void task_trivialize(Pipeline& pl, TaskSection& s, const Deadline&) {
  const Cover& cover = pl.cfg.cover;
  const TrivializeResult res = trivialize(pl.cocycle(), pl.nerve, pl.tol.group);
  if (const auto* t = std::get_if<Trivialization>(&res)) {
    s.values["outcome"] = "coboundary";
    json lambda = json::object();
    for (RegionId r = 0; r < cover.region_count(); ++r) {
      lambda[cover.name(r)] = group_value_json(t->lambda[static_cast<std::size_t>(r)]);
    }
    s.values["lambda"] = std::move(lambda);
    add_check(s, "reconstruction", t->reconstruction_residual, pl.tol.group);
  } else {
    const auto& w = std::get<WitnessLoop>(res);
    s.values["outcome"] = "witness";
    s.values["witness"] = {{"loop", visited_names(cover, w.loop)},
                           {"edge", edge_label(cover, pl.nerve.edges[static_cast<std::size_t>(w.edge)])},
                           {"holonomy", group_value_json(w.holonomy)}};
    const Word word = loop_class(pl.nerve, pl.pres, w.loop).word;
    add_check(s, "witness.sigma", distance(w.holonomy, pl.morphism().evaluate(word)), pl.tol.group);
  }
  finish(s);
}

void task_holonomy(Pipeline& pl, TaskSection& s, const Deadline& dl) {
  const TransitionCocycle& g = pl.cocycle();
  std::optional<FlatPotentialU1> pot;
  if (pl.abelian()) pot = lift_potential(g, pl.nerve);
  auto rng = pl.rng(Task::Holonomy);
  json loops = json::object();
  for (const auto& named : pl.cfg.loops) {
    const PosetPath loop = pl.path(named);
    const LoopClass cls = loop_class(pl.nerve, pl.pres, loop);
    const GroupValue h = holonomy(g, loop);
    loops[named.name] = {{"class", cls.word.to_string()}, {"holonomy", group_value_json(h)}};
    add_check(s, named.name + ".sigma", distance(h, pl.morphism().evaluate(cls.word)), pl.tol.group);
    if (pot) {
      add_check(s, named.name + ".potential", distance(h, holonomy(*pot, loop)), pl.tol.group);
    } else {
      add_check(s, named.name + ".log", pl.rho_layer().log_crosscheck(loop), pl.tol.group);
    }
    if (pl.random_checks() > 0) {
      double worst = 0.0;
      double class_mismatch = 0.0;
      for (int k = 0; k < pl.random_checks(); ++k) {
        const PosetPath v = random_homotopic_variant(pl.nerve, loop, 4, rng);
        worst = std::max(worst, distance(holonomy(g, v), h));
        if (!(loop_class(pl.nerve, pl.pres, v) == cls)) class_mismatch += 1.0;
        dl.poll();
      }
      add_check(s, named.name + ".homotopy", worst, pl.tol.group);
      add_check(s, named.name + ".homotopy_class", class_mismatch, 0.0);
    }
    dl.poll();
  }
  s.values["loops"] = std::move(loops);
  finish(s);
}

void task_sector(Pipeline& pl, TaskSection& s, const Deadline& dl) {
  const Cover& cover = pl.cfg.cover;
  if (!pl.abelian()) {
    const RhoLayerTransporter& rho = pl.rho_layer();
    s.values["kind"] = to_string(TransporterKind::RhoLayer);
    s.values["dimension"] = rho.dimension();
    add_check(s, "rho.cocycle", rho.cocycle_law(pl.tol.group).max_residual, pl.tol.group);
    json comps = json::object();
    for (const auto& named : pl.cfg.loops) {
      const PosetPath loop = pl.path(named);
      const GroupValue h = rho.rho_holonomy(loop);
      comps[named.name] = group_value_json(h);
      const Word w = loop_class(pl.nerve, pl.pres, loop).word;
      add_check(s, named.name + ".word", distance(h, pl.morphism().evaluate(w)), pl.tol.group);
      add_check(s, named.name + ".log", rho.log_crosscheck(loop), pl.tol.group);
      dl.poll();
    }
    s.values["components"] = std::move(comps);
    finish(s);
    return;
  }

  const SectorTransporter& z = pl.transporter();
  s.values["kind"] = to_string(z.kind());
  s.values["modes"] = z.context().fock().modes();
  s.values["charge"] = z.context().charge();
  s.values["window_dimension"] = z.context().window().dimension();

  double worst = 0.0;
  for (const auto& t : cover.triples) {
    worst = std::max(worst, window_cocycle_residual(z, t));
    dl.poll();
  }
  for (const auto& ov : cover.overlaps) {
    worst = std::max(worst, window_degenerate_residual(z, ov));
    dl.poll();
  }
  add_check(s, "window.cocycle", worst, pl.tol.sector);

  double telescoping = 0.0;
  for (const auto* list : {&pl.cfg.loops, &pl.cfg.paths}) {
    for (const auto& named : *list) {
      telescoping = std::max(telescoping, window_telescoping_residual(z, pl.path(named)));
      dl.poll();
    }
  }
  auto rng = pl.rng(Task::Sector);
  for (int k = 0; k < pl.random_checks(); ++k) {
    const auto start = static_cast<RegionId>(std::uniform_int_distribution<int>(0, cover.region_count() - 1)(rng));
    telescoping = std::max(telescoping, window_telescoping_residual(z, random_walk(pl.nerve, start, 6, rng)));
    dl.poll();
  }
  add_check(s, "window.telescoping", telescoping, pl.tol.sector);

  json comps = json::object();
  for (const auto& named : pl.cfg.loops) {
    const PosetPath loop = pl.path(named);
    const TopologicalComponent c = topological_component(z, loop, pl.tol.sector);
    comps[named.name] = group_value_json(c.value);
    add_check(s, named.name + ".component", distance(c.value, holonomy(pl.cocycle(), loop)), pl.tol.sector);
    dl.poll();
  }
  s.values["components"] = std::move(comps);
  finish(s);
}

void task_amplitude(Pipeline& pl, TaskSection& s, const Deadline& dl) {
  if (!pl.abelian()) {
    s.status = Status::Skipped;
    s.message = "transition amplitudes need a U(1) sector; the U(n) layer has no Fock realization";
    return;
  }
  const SectorTransporter& z = pl.transporter();
  const FlatPotentialU1 pot = lift_potential(pl.cocycle(), pl.nerve);
  const auto expected = [&](const PosetPath& q, const PosetPath& p) {
    return holonomy(pot, path_compose(p, path_reverse(q))).to_complex();
  };
  json amps = json::object();
  for (const auto& spec : pl.cfg.amplitudes) {
    const PosetPath q = pl.path(*pl.cfg.find_path(spec.q));
    const PosetPath p = pl.path(*pl.cfg.find_path(spec.p));
    const Complex a = transition_amplitude(z, q, p);
    const Complex e = expected(q, p);
    amps[spec.name] = {{"amplitude", complex_json(a)}, {"angle", std::arg(a)}};
    add_check(s, spec.name + ".holonomy", std::abs(a - e), pl.tol.sector);
    dl.poll();
  }
  auto rng = pl.rng(Task::Amplitude);
  double worst = 0.0;
  for (int k = 0; k < pl.random_checks(); ++k) {
    const auto a = static_cast<RegionId>(std::uniform_int_distribution<int>(0, pl.cfg.cover.region_count() - 1)(rng));
    const PosetPath p = random_walk(pl.nerve, a, 7, rng);
    const PosetPath wander = random_walk(pl.nerve, a, 5, rng);
    const PosetPath q = path_compose(wander, PosetPath(wander.end(), pl.nerve.tree_steps(wander.end(), p.end())));
    worst = std::max(worst, std::abs(transition_amplitude(z, q, p) - expected(q, p)));
    dl.poll();
  }
  if (pl.random_checks() > 0) add_check(s, "random_pairs", worst, pl.tol.sector);
  s.values["amplitudes"] = std::move(amps);
  finish(s);
}

void task_classify(Pipeline& pl, TaskSection& s, const Deadline&) {
  const Classification c = pl.abelian() ? classify(pl.transporter(), pl.pres, pl.tol.sector)
                                        : pl.rho_layer().classify(pl.pres, pl.tol.group);
  s.values["class"] = c.dhr ? "DHR" : "topological";
  s.values["dimension"] = c.dimension;
  json comps = json::object();
  double worst = 0.0;
  for (const auto& [gen, v] : c.components) {
    comps[gen] = group_value_json(v);
    worst = std::max(worst, distance(v, pl.morphism().at(gen)));
  }
  s.values["components"] = std::move(comps);
  add_check(s, "components.sigma", worst, pl.tol.sector);
  const bool trivial = std::holds_alternative<Trivialization>(trivialize(pl.cocycle(), pl.nerve, pl.tol.group));
  add_check(s, "dhr_iff_coboundary", trivial == c.dhr ? 0.0 : 1.0, 0.0);
  finish(s);
}

const std::map<Task, std::vector<Task>>& prerequisites() {
  static const std::map<Task, std::vector<Task>> deps{
      {Task::Check, {}},
      {Task::Trivialize, {Task::Check}},
      {Task::Holonomy, {Task::Check}},
      {Task::Sector, {Task::Check}},
      {Task::Amplitude, {Task::Sector}},
      {Task::Classify, {Task::Sector}},
  };
  return deps;
}

}  // namespace

Report run(const ScenarioConfig& config, const RunOptions& options) {
  Tolerances tol = config.tolerances;
  if (options.tolerance) tol = {*options.tolerance, *options.tolerance};
  const std::optional<std::uint64_t> seed = options.seed ? options.seed : config.seed;

  Report report;
  report.schema_version = config.schema_version;
  report.scenario = config.name;
  report.topology = config.builtin ? to_string(*config.builtin)
                                   : "explicit(" + std::to_string(config.cover.region_count()) + " regions)";
  report.group = group_label(config.group);
  report.seed = seed;

  std::set<Task> requested;
  for (Task t : options.tasks ? *options.tasks : config.tasks) requested.insert(t);

  Pipeline pl(config, tol, seed);
  const std::map<Task, std::function<void(Pipeline&, TaskSection&, const Deadline&)>> impl{
      {Task::Check, task_check},         {Task::Trivialize, task_trivialize}, {Task::Holonomy, task_holonomy},
      {Task::Sector, task_sector},       {Task::Amplitude, task_amplitude},   {Task::Classify, task_classify},
  };

  for (Task t : all_tasks()) {
    if (!requested.count(t)) continue;
    TaskSection s;
    s.task = t;
    for (Task dep : prerequisites().at(t)) {
      const TaskSection* prior = report.section(dep);
      if (prior && prior->status != Status::Pass) {
        s.status = Status::Skipped;
        s.message = "prerequisite '" + to_string(dep) + "' did not pass";
      }
    }
    if (s.status != Status::Skipped) {
      try {
        const Deadline dl(config.timeout_seconds);
        impl.at(t)(pl, s, dl);
      } catch (const CapacityError& e) {
        s = TaskSection{t, Status::Error, e.what(), "capacity", {}, json::object()};
      } catch (const TimeoutError& e) {
        s = TaskSection{t, Status::Error, e.what(), "timeout", {}, json::object()};
      } catch (const Error& e) {
        s = TaskSection{t, Status::Error, e.what(), "error", {}, json::object()};
      }
    }
    report.tasks.push_back(std::move(s));
  }
  return report;
}

}  // namespace holonet
