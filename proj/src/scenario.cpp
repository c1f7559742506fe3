#include "holonet/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <Eigen/SVD>
#include <yaml-cpp/yaml.h>

#include "holonet/nerve.hpp"
#include "holonet/path.hpp"

namespace holonet {

const std::vector<Task>& all_tasks() {
  static const std::vector<Task> tasks{Task::Check,  Task::Trivialize, Task::Holonomy,
                                       Task::Sector, Task::Amplitude,  Task::Classify};
  return tasks;
}

std::string to_string(Task t) {
  switch (t) {
    case Task::Check: return "check";
    case Task::Trivialize: return "trivialize";
    case Task::Holonomy: return "holonomy";
    case Task::Sector: return "sector";
    case Task::Amplitude: return "amplitude";
    case Task::Classify: return "classify";
  }
  return "?";
}

std::optional<Task> parse_task(std::string_view name) {
  for (Task t : all_tasks()) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

const NamedPath* ScenarioConfig::find_path(std::string_view name) const {
  for (const auto* list : {&loops, &paths}) {
    for (const auto& p : *list) {
      if (p.name == name) return &p;
    }
  }
  return nullptr;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::optional<double> to_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::istringstream in{std::string(s)};
  in.imbue(std::locale::classic());
  double v = 0.0;
  in >> v;
  if (in.fail() || !in.eof()) return std::nullopt;
  return v;
}

}  // namespace

double parse_angle(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(static_cast<char>(std::tolower(c)));
  }
  const auto bad = [&] { return ParseError("malformed angle '" + std::string(text) + "'"); };
  const auto pi_at = s.find("pi");
  if (pi_at == std::string::npos) {
    if (const auto v = to_double(s)) return *v;
    throw bad();
  }
  std::string coeff = s.substr(0, pi_at);
  std::string rest = s.substr(pi_at + 2);
  if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
  double num = 1.0;
  if (coeff == "-") {
    num = -1.0;
  } else if (!coeff.empty() && coeff != "+") {
    const auto v = to_double(coeff);
    if (!v) throw bad();
    num = *v;
  }
  double den = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw bad();
    const auto v = to_double(rest.substr(1));
    if (!v || *v == 0.0) throw bad();
    den = *v;
  }
  return num * std::numbers::pi / den;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& msg) const {
    const auto mark = at.Mark();
    std::string where = source_;
    if (mark.line >= 0) where += ":" + std::to_string(mark.line + 1);
    throw ParseError(where + ": " + msg);
  }

  void only_keys(const YAML::Node& map, std::initializer_list<std::string_view> keys, const std::string& what) const {
    if (!map.IsMap()) fail(map, what + " must be a mapping");
    for (const auto& kv : map) {
      const auto k = kv.first.as<std::string>();
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) fail(kv.first, "unknown field '" + k + "' in " + what);
    }
  }

  std::string str(const YAML::Node& n, const std::string& field) const {
    if (!n.IsScalar()) fail(n, "field '" + field + "' must be a scalar");
    return n.as<std::string>();
  }

  double number(const YAML::Node& n, const std::string& field) const {
    const auto v = to_double(trim(str(n, field)));
    if (!v) fail(n, "field '" + field + "' must be a number");
    return *v;
  }

  long integer(const YAML::Node& n, const std::string& field) const {
    const std::string s = trim(str(n, field));
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail(n, "field '" + field + "' must be an integer");
    return v;
  }

  double angle(const YAML::Node& n, const std::string& field) const {
    try {
      return parse_angle(str(n, field));
    } catch (const ParseError& e) {
      fail(n, "field '" + field + "': " + e.what());
    }
  }

  RegionId region(const Cover& cover, const YAML::Node& n, const std::string& context) const {
    const std::string name = str(n, context);
    const auto r = cover.find(name);
    if (!r) fail(n, "undefined region '" + name + "' in " + context);
    return *r;
  }

  Cover explicit_cover(const YAML::Node& t) const {
    only_keys(t, {"regions", "overlaps", "triples", "disjoint", "base"}, "topology");
    Cover c;
    if (!t["regions"] || !t["regions"].IsSequence()) fail(t, "explicit topology needs a 'regions' list");
    for (const auto& r : t["regions"]) c.regions.push_back(str(r, "regions"));
    if (const auto ov = t["overlaps"]) {
      if (!ov.IsSequence()) fail(ov, "'overlaps' must be a list");
      for (const auto& o : ov) {
        if (!o.IsSequence() || o.size() < 2 || o.size() > 3) fail(o, "overlap must be [a, b] or [a, b, component]");
        c.overlaps.push_back({region(c, o[0], "overlaps"), region(c, o[1], "overlaps"),
                              o.size() == 3 ? static_cast<int>(integer(o[2], "overlaps")) : 0});
      }
    }
    if (const auto tr = t["triples"]) {
      if (!tr.IsSequence()) fail(tr, "'triples' must be a list");
      for (const auto& x : tr) {
        Triple triple;
        YAML::Node regions = x;
        if (x.IsMap()) {
          only_keys(x, {"regions", "components"}, "triple");
          regions = x["regions"];
          if (const auto comps = x["components"]) {
            if (!comps.IsSequence() || comps.size() != 3) fail(comps, "triple components must list three integers");
            for (std::size_t k = 0; k < 3; ++k) triple.components[k] = static_cast<int>(integer(comps[k], "components"));
          }
        }
        if (!regions || !regions.IsSequence() || regions.size() != 3) fail(x, "triple must name three regions");
        for (std::size_t k = 0; k < 3; ++k) triple.regions[k] = region(c, regions[k], "triples");
        c.triples.push_back(triple);
      }
    }
    if (const auto dj = t["disjoint"]) {
      if (!dj.IsSequence()) fail(dj, "'disjoint' must be a list");
      for (const auto& d : dj) {
        if (!d.IsSequence() || d.size() != 2) fail(d, "disjoint pair must be [a, b]");
        c.disjoint_pairs.push_back({region(c, d[0], "disjoint"), region(c, d[1], "disjoint")});
      }
    }
    if (const auto b = t["base"]) c.base_region = region(c, b, "base");
    try {
      c.validate();
    } catch (const CoverError& e) {
      fail(t, std::string("invalid cover: ") + e.what());
    }
    return c;
  }

  GroupDescriptor group(const YAML::Node& g) const {
    std::string kind;
    int n = 1;
    if (g.IsScalar()) {
      kind = str(g, "group");
    } else {
      only_keys(g, {"kind", "n"}, "group");
      if (!g["kind"]) fail(g, "group needs a 'kind'");
      kind = str(g["kind"], "kind");
      if (g["n"]) n = static_cast<int>(integer(g["n"], "n"));
    }
    std::transform(kind.begin(), kind.end(), kind.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (kind == "u1") return GroupDescriptor::u1();
    if (kind == "su2") return GroupDescriptor::un(2);
    if (kind == "un") {
      if (n < 1) fail(g, "group dimension must be positive");
      return GroupDescriptor::un(n);
    }
    fail(g, "unknown group kind '" + kind + "' (expected u1, un or su2)");
  }

  GroupValue sigma_value(const YAML::Node& v, const GroupDescriptor& g, const std::string& key) const {
    if (g.kind == GroupKind::PhaseU1) return GroupValue::phase(angle(v, "sigma." + key));
    const int n = g.dimension;
    Matrix m(n, n);
    if (v.IsMap()) {
      only_keys(v, {"axis", "angle"}, "sigma." + key);
      if (n != 2) fail(v, "axis/angle form is only available for 2x2 matrices");
      if (!v["axis"] || !v["axis"].IsSequence() || v["axis"].size() != 3) fail(v, "axis must list three numbers");
      Eigen::Vector3d axis;
      for (int k = 0; k < 3; ++k) axis(k) = number(v["axis"][static_cast<std::size_t>(k)], "axis");
      if (axis.norm() == 0.0) fail(v["axis"], "axis must be nonzero");
      axis.normalize();
      if (!v["angle"]) fail(v, "axis/angle form needs an 'angle'");
      const double a = angle(v["angle"], "angle");
      const Complex i(0.0, 1.0);
      const double c = std::cos(a / 2.0);
      const double s = std::sin(a / 2.0);
      // cos(a/2) I − i sin(a/2) (axis · Pauli)
      m(0, 0) = c - i * s * axis(2);
      m(0, 1) = -i * s * (axis(0) - i * axis(1));
      m(1, 0) = -i * s * (axis(0) + i * axis(1));
      m(1, 1) = c + i * s * axis(2);
      return GroupValue::matrix(m);
    }
    if (!v.IsSequence() || static_cast<int>(v.size()) != n) fail(v, "sigma." + key + " must have " + std::to_string(n) + " rows");
    for (int r = 0; r < n; ++r) {
      const auto row = v[static_cast<std::size_t>(r)];
      if (!row.IsSequence() || static_cast<int>(row.size()) != n) fail(row, "matrix row must have " + std::to_string(n) + " entries");
      for (int c = 0; c < n; ++c) {
        const auto e = row[static_cast<std::size_t>(c)];
        if (e.IsSequence() && e.size() == 2) {
          m(r, c) = Complex(number(e[0], "re"), number(e[1], "im"));
        } else {
          m(r, c) = number(e, "entry");
        }
      }
    }
    const double defect = max_norm(m.adjoint() * m - Matrix::Identity(n, n));
    if (defect > 1e-8) fail(v, "sigma." + key + " is not unitary (defect " + std::to_string(defect) + ")");
    // Nearest unitary, so entries rounded to a few digits stay usable.
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return GroupValue::matrix(svd.matrixU() * svd.matrixV().adjoint());
  }

  std::vector<NamedPath> named_paths(const YAML::Node& n, const Cover& cover, const std::string& what) const {
    std::vector<NamedPath> out;
    if (!n.IsMap()) fail(n, "'" + what + "' must map names to region lists");
    for (const auto& kv : n) {
      NamedPath p{kv.first.as<std::string>(), {}};
      if (!kv.second.IsSequence() || kv.second.size() == 0) fail(kv.second, what + " '" + p.name + "' must list regions");
      for (const auto& r : kv.second) p.visited.push_back(region(cover, r, what.substr(0, what.size() - 1) + " '" + p.name + "'"));
      try {
        approximate_curve(cover, p.visited);
      } catch (const PathError& e) {
        fail(kv.second, what + " '" + p.name + "': " + e.what());
      }
      out.push_back(std::move(p));
    }
    return out;
  }

 private:
  std::string source_;
};

void put_path(std::vector<NamedPath>& list, NamedPath p) {
  for (auto& q : list) {
    if (q.name == p.name) {
      q = std::move(p);
      return;
    }
  }
  list.push_back(std::move(p));
}

}  // namespace

ScenarioConfig parse_scenario_text(std::string_view text, std::string_view source) {
  const Parser ps{std::string(source)};
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string(source) + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw ParseError(std::string(source) + ": scenario must be a mapping");
  ps.only_keys(root,
               {"schema_version", "name", "topology", "group", "sigma", "modes_per_region", "charge", "loops", "paths",
                "amplitudes", "tasks", "tolerances", "seed", "random_checks", "timeout_seconds"},
               "scenario");

  ScenarioConfig cfg;
  if (!root["schema_version"]) ps.fail(root, "missing 'schema_version'");
  cfg.schema_version = static_cast<int>(ps.integer(root["schema_version"], "schema_version"));
  if (cfg.schema_version != kScenarioSchemaVersion) {
    ps.fail(root["schema_version"], "unsupported schema_version " + std::to_string(cfg.schema_version));
  }
  if (root["name"]) cfg.name = ps.str(root["name"], "name");

  const auto topo = root["topology"];
  if (!topo) ps.fail(root, "missing 'topology'");
  if (topo.IsScalar() || topo["builtin"]) {
    std::string name;
    std::optional<int> n;
    if (topo.IsScalar()) {
      name = ps.str(topo, "topology");
    } else {
      ps.only_keys(topo, {"builtin", "n"}, "topology");
      name = ps.str(topo["builtin"], "builtin");
      if (topo["n"]) n = static_cast<int>(ps.integer(topo["n"], "n"));
    }
    try {
      cfg.builtin = parse_builtin(name, n);
      cfg.cover = builtin_cover(*cfg.builtin);
    } catch (const Error& e) {
      ps.fail(topo, e.what());
    }
    for (auto& [lname, visited] : builtin_loops(*cfg.builtin)) cfg.loops.push_back({lname, visited});
  } else {
    cfg.cover = ps.explicit_cover(topo);
  }

  if (root["group"]) cfg.group = ps.group(root["group"]);
  if (root["modes_per_region"]) cfg.modes_per_region = static_cast<int>(ps.integer(root["modes_per_region"], "modes_per_region"));
  if (cfg.modes_per_region < 1) ps.fail(root["modes_per_region"], "modes_per_region must be at least 1");
  if (root["charge"]) cfg.charge = static_cast<int>(ps.integer(root["charge"], "charge"));
  if (cfg.charge < 1) ps.fail(root["charge"], "charge must be a positive integer");
  if (cfg.charge > cfg.modes_per_region) ps.fail(root["charge"], "charge exceeds modes_per_region");

  if (root["loops"]) {
    for (auto& p : ps.named_paths(root["loops"], cfg.cover, "loops")) {
      if (p.visited.front() != p.visited.back()) ps.fail(root["loops"][p.name], "loop '" + p.name + "' is not closed");
      put_path(cfg.loops, std::move(p));
    }
  }
  if (root["paths"]) {
    for (auto& p : ps.named_paths(root["paths"], cfg.cover, "paths")) put_path(cfg.paths, std::move(p));
  }

  if (const auto amps = root["amplitudes"]) {
    if (!amps.IsSequence()) ps.fail(amps, "'amplitudes' must be a list");
    for (const auto& a : amps) {
      ps.only_keys(a, {"name", "q", "p"}, "amplitude");
      if (!a["q"] || !a["p"]) ps.fail(a, "amplitude needs 'q' and 'p'");
      AmplitudeSpec spec{a["name"] ? ps.str(a["name"], "name") : "", ps.str(a["q"], "q"), ps.str(a["p"], "p")};
      const NamedPath* q = cfg.find_path(spec.q);
      const NamedPath* p = cfg.find_path(spec.p);
      if (!q) ps.fail(a["q"], "amplitude refers to unknown path '" + spec.q + "'");
      if (!p) ps.fail(a["p"], "amplitude refers to unknown path '" + spec.p + "'");
      if (q->visited.front() != p->visited.front() || q->visited.back() != p->visited.back()) {
        ps.fail(a, "amplitude paths '" + spec.q + "' and '" + spec.p + "' do not share endpoints");
      }
      if (spec.name.empty()) spec.name = spec.q + "~" + spec.p;
      cfg.amplitudes.push_back(std::move(spec));
    }
  }

  if (const auto tasks = root["tasks"]) {
    if (!tasks.IsSequence()) ps.fail(tasks, "'tasks' must be a list");
    std::set<Task> chosen;
    for (const auto& t : tasks) {
      const auto task = parse_task(ps.str(t, "tasks"));
      if (!task) ps.fail(t, "unknown task '" + t.as<std::string>() + "'");
      chosen.insert(*task);
    }
    for (Task t : all_tasks()) {
      if (chosen.count(t)) cfg.tasks.push_back(t);
    }
  } else {
    cfg.tasks = all_tasks();
  }

  if (const auto tol = root["tolerances"]) {
    ps.only_keys(tol, {"group", "sector"}, "tolerances");
    if (tol["group"]) cfg.tolerances.group = ps.number(tol["group"], "group");
    if (tol["sector"]) cfg.tolerances.sector = ps.number(tol["sector"], "sector");
  }
  if (root["seed"]) {
    const std::string s = trim(ps.str(root["seed"], "seed"));
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) ps.fail(root["seed"], "seed must be an unsigned integer");
    cfg.seed = v;
  }
  if (root["random_checks"]) cfg.random_checks = static_cast<int>(ps.integer(root["random_checks"], "random_checks"));
  if (cfg.random_checks < 0) ps.fail(root["random_checks"], "random_checks must be non-negative");
  if (cfg.random_checks > 0 && !cfg.seed) ps.fail(root["random_checks"], "randomized checks need a 'seed'");
  if (root["timeout_seconds"]) cfg.timeout_seconds = ps.number(root["timeout_seconds"], "timeout_seconds");

  // σ: keys are generator symbols, or loop names whose class is a single generator.
  const NerveGraph nerve = build_nerve(cfg.cover);
  const Pi1Presentation pres = pi1_presentation(nerve);
  if (const auto sig = root["sigma"]) {
    if (!sig.IsMap()) ps.fail(sig, "'sigma' must map generators or loops to values");
    for (const auto& kv : sig) {
      const std::string key = kv.first.as<std::string>();
      GroupValue v = ps.sigma_value(kv.second, cfg.group, key);
      std::string symbol = key;
      if (pres.generator_index(key) < 0) {
        const NamedPath* loop = cfg.find_path(key);
        if (!loop) ps.fail(kv.first, "sigma key '" + key + "' is neither a generator nor a named loop");
        const Word w = loop_class(nerve, pres, approximate_curve(cfg.cover, loop->visited)).word;
        if (w.size() != 1 || std::abs(w.letters().front().exponent) != 1) {
          ps.fail(kv.first, "loop '" + key + "' has class " + w.to_string() + ", not a single generator");
        }
        symbol = w.letters().front().symbol;
        if (w.letters().front().exponent < 0) v = inverse(v);
      }
      if (cfg.sigma.count(symbol)) ps.fail(kv.first, "sigma assigns generator '" + symbol + "' twice");
      cfg.sigma.emplace(symbol, std::move(v));
    }
  }
  for (const auto& g : pres.free_generators) {
    if (!cfg.sigma.count(g)) {
      if (root["sigma"]) ps.fail(root["sigma"], "sigma has no value for generator '" + g + "'");
      ps.fail(root, "sigma has no value for generator '" + g + "'");
    }
  }
  return cfg;
}

ScenarioConfig parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path.string());
}

}  // namespace holonet
