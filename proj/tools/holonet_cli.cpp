// holonet command line: run scenario tasks and print reports.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "holonet/report.hpp"
#include "holonet/runner.hpp"
#include "holonet/scenario.hpp"

namespace {

struct Args {
  std::string scenario;
  std::string format = "text";
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::string out;
};

void add_flags(CLI::App* cmd, Args& a) {
  cmd->add_option("--scenario", a.scenario, "scenario file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--format", a.format, "output format")->check(CLI::IsMember({"text", "structured"}));
  cmd->add_option("--seed", a.seed, "seed for randomized checks");
  cmd->add_option("--tolerance", a.tolerance, "override every tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--out", a.out, "write the report here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holonet: flat-connection holonomy and charge-sector checks on finite covers"};
  app.require_subcommand(1);
  Args args;
  std::optional<holonet::Task> only;
  const std::pair<const char*, std::optional<holonet::Task>> commands[] = {
      {"check", holonet::Task::Check},         {"trivialize", holonet::Task::Trivialize},
      {"holonomy", holonet::Task::Holonomy},   {"sector", holonet::Task::Sector},
      {"amplitude", holonet::Task::Amplitude}, {"classify", holonet::Task::Classify},
      {"report", std::nullopt},
  };
  for (const auto& [name, task] : commands) {
    CLI::App* cmd = app.add_subcommand(name, task ? "run the " + std::string(name) + " task" : "run every scenario task");
    add_flags(cmd, args);
    cmd->callback([&only, t = task] { only = t; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // usage errors, including a missing scenario file, count as parse errors
    const int rc = app.exit(e);
    return rc == 0 ? 0 : holonet::kExitParse;
  }

  holonet::ScenarioConfig cfg;
  try {
    cfg = holonet::parse_scenario(args.scenario);
  } catch (const holonet::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return holonet::kExitParse;
  }

  holonet::RunOptions opts;
  if (only) opts.tasks = std::vector<holonet::Task>{*only};
  opts.seed = args.seed;
  opts.tolerance = args.tolerance;
  if (cfg.random_checks > 0 && !cfg.seed && !args.seed) {
    std::cerr << "parse error: randomized checks need a seed\n";
    return holonet::kExitParse;
  }

  const holonet::Report report = holonet::run(cfg, opts);
  const auto format = args.format == "structured" ? holonet::Format::Structured : holonet::Format::Text;
  const std::string text = holonet::emit(report, format);
  if (args.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(args.out, std::ios::binary);
    if (!(f << text)) {
      std::cerr << "cannot write " << args.out << "\n";
      return holonet::kExitTaskFailure;
    }
  }
  for (const auto& s : report.tasks) {
    if (s.status == holonet::Status::Error) std::cerr << holonet::to_string(s.task) << ": " << s.message << "\n";
  }
  return holonet::exit_code(report);
}
