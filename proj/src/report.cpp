#include "holonet/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace holonet {

using nlohmann::json;

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skipped: return "skipped";
    case Status::Error: return "error";
  }
  return "?";
}

Status parse_status(std::string_view s) {
  for (Status st : {Status::Pass, Status::Fail, Status::Skipped, Status::Error}) {
    if (to_string(st) == s) return st;
  }
  throw ParseError("unknown task status '" + std::string(s) + "'");
}

const TaskSection* Report::section(Task t) const {
  for (const auto& s : tasks) {
    if (s.task == t) return &s;
  }
  return nullptr;
}

int exit_code(const Report& r) {
  bool failed = false;
  for (const auto& s : r.tasks) {
    if (s.status == Status::Error && s.error_kind == "capacity") return kExitCapacity;
    if (s.status != Status::Pass) failed = true;
  }
  return failed ? kExitTaskFailure : kExitOk;
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

json group_value_json(const GroupValue& g) {
  switch (g.kind()) {
    case GroupKind::PhaseU1:
      return {{"angle", g.angle()}, {"value", complex_json(g.to_complex())}};
    case GroupKind::MatrixUn: {
      json rows = json::array();
      const Matrix& m = g.matrix();
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
        rows.push_back(std::move(row));
      }
      return {{"matrix", std::move(rows)}};
    }
    case GroupKind::FreeWord:
      return {{"word", g.word().to_string()}};
    case GroupKind::CyclicZn:
      return {{"residue", g.residue()}, {"modulus", g.modulus()}};
  }
  return nullptr;
}

std::string emit(const Report& r, Format f) { return f == Format::Text ? emit_text(r) : emit_structured(r); }

std::string emit_structured(const Report& r) {
  json doc;
  doc["format"] = "holonet-report";
  doc["report_version"] = r.report_version;
  doc["schema_version"] = r.schema_version;
  doc["scenario"] = r.scenario;
  doc["topology"] = r.topology;
  doc["group"] = r.group;
  doc["seed"] = r.seed ? json(*r.seed) : json(nullptr);
  json tasks = json::array();
  for (const auto& s : r.tasks) {
    json checks = json::array();
    for (const auto& c : s.checks) {
      checks.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
    }
    tasks.push_back({{"task", to_string(s.task)},
                     {"status", to_string(s.status)},
                     {"message", s.message},
                     {"error_kind", s.error_kind},
                     {"checks", std::move(checks)},
                     {"values", s.values}});
  }
  doc["tasks"] = std::move(tasks);
  doc["exit_code"] = exit_code(r);
  return doc.dump(2) + "\n";
}

Report parse_report(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  try {
    if (doc.at("format") != "holonet-report") throw ParseError("report: not a holonet report");
    Report r;
    r.report_version = doc.at("report_version").get<int>();
    if (r.report_version != kReportVersion) throw ParseError("report: unsupported report_version");
    r.schema_version = doc.at("schema_version").get<int>();
    r.scenario = doc.at("scenario").get<std::string>();
    r.topology = doc.at("topology").get<std::string>();
    r.group = doc.at("group").get<std::string>();
    if (!doc.at("seed").is_null()) r.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& t : doc.at("tasks")) {
      TaskSection s;
      const auto task = parse_task(t.at("task").get<std::string>());
      if (!task) throw ParseError("report: unknown task");
      s.task = *task;
      s.status = parse_status(t.at("status").get<std::string>());
      s.message = t.at("message").get<std::string>();
      s.error_kind = t.at("error_kind").get<std::string>();
      for (const auto& c : t.at("checks")) {
        s.checks.push_back({c.at("name").get<std::string>(), c.at("value").get<double>(),
                            c.at("tolerance").get<double>(), c.at("pass").get<bool>()});
      }
      s.values = t.at("values");
      r.tasks.push_back(std::move(s));
    }
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
}

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string leaf(const json& v) {
  if (v.is_null()) return "-";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

}  // namespace

std::string emit_text(const Report& r) {
  std::ostringstream out;
  out << "scenario  " << r.scenario << "\n";
  out << "topology  " << r.topology << "\n";
  out << "group     " << r.group << "\n";
  out << "seed      " << (r.seed ? std::to_string(*r.seed) : std::string("-")) << "\n";
  for (const auto& s : r.tasks) {
    out << "\n[" << to_string(s.task) << "] " << to_string(s.status);
    if (!s.message.empty()) out << "  (" << (s.error_kind.empty() ? "" : s.error_kind + ": ") << s.message << ")";
    out << "\n";
    std::size_t w = 0;
    for (const auto& c : s.checks) w = std::max(w, c.name.size());
    for (const auto& c : s.checks) {
      out << "  " << pad(c.name, w) << "  residual " << sci(c.value) << "  tol " << sci(c.tolerance) << "  "
          << (c.pass ? "ok" : "FAIL") << "\n";
    }
    const json flat = s.values.flatten();
    w = 0;
    for (const auto& [k, v] : flat.items()) w = std::max(w, k.size());
    for (const auto& [k, v] : flat.items()) out << "  " << pad(k, w) << "  " << leaf(v) << "\n";
  }
  out << "\nexit " << exit_code(r) << "\n";
  return out.str();
}

}  // namespace holonet
