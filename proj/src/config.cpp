#include "lowvolt/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lowvolt/io.hpp"

namespace lowvolt {
namespace {

using json = nlohmann::json;

// Collects violations so a bad config reports all of them at once.
class Reader {
public:
  std::vector<std::string> violations;

  const json* object(const json& parent, const char* key, const std::string& path) {
    const auto it = parent.find(key);
    if (it == parent.end()) return nullptr;
    if (!it->is_object()) {
      violations.push_back(path + ": expected an object");
      return nullptr;
    }
    return &*it;
  }

  void known_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& path) {
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items())
      if (!allowed.count(k)) violations.push_back(path + k + ": unknown field");
  }

  bool number(const json* obj, const char* key, const std::string& path, double& out) {
    if (obj == nullptr) return false;
    const auto it = obj->find(key);
    if (it == obj->end()) return false;
    if (!it->is_number()) {
      violations.push_back(path + key + ": expected a number");
      return false;
    }
    out = it->get<double>();
    return true;
  }

  bool boolean(const json* obj, const char* key, const std::string& path, bool& out) {
    if (obj == nullptr) return false;
    const auto it = obj->find(key);
    if (it == obj->end()) return false;
    if (!it->is_boolean()) {
      violations.push_back(path + key + ": expected true or false");
      return false;
    }
    out = it->get<bool>();
    return true;
  }

  bool string(const json* obj, const char* key, const std::string& path, std::string& out) {
    if (obj == nullptr) return false;
    const auto it = obj->find(key);
    if (it == obj->end()) return false;
    if (!it->is_string()) {
      violations.push_back(path + key + ": expected a string");
      return false;
    }
    out = it->get<std::string>();
    return true;
  }

  bool numbers(const json& obj, const char* key, const std::string& path, std::vector<double>& out) {
    const auto it = obj.find(key);
    if (it == obj.end()) return false;
    if (!it->is_array() || it->empty()) {
      violations.push_back(path + key + ": expected a non-empty array of numbers");
      return false;
    }
    std::vector<double> values;
    for (const auto& v : *it) {
      if (!v.is_number()) {
        violations.push_back(path + key + ": expected a non-empty array of numbers");
        return false;
      }
      values.push_back(v.get<double>());
    }
    out = std::move(values);
    return true;
  }
};

void read_chip(Reader& rd, const json& root, RunConfig& cfg) {
  const json* chip = rd.object(root, "chip", "chip");
  if (chip) rd.known_keys(*chip, {"dyn_const", "i_leak", "k2", "v_th", "h", "v_max", "v_min"}, "chip.");
  auto& c = cfg.chip;
  rd.number(chip, "dyn_const", "chip.", c.dyn_const);
  rd.number(chip, "i_leak", "chip.", c.i_leak);
  rd.number(chip, "k2", "chip.", c.k2);
  rd.number(chip, "v_th", "chip.", c.v_th);
  rd.number(chip, "h", "chip.", c.h);
  if (!rd.number(chip, "v_max", "chip.", c.v_max)) c.v_max = cfg.reference.v_s;
  if (!rd.number(chip, "v_min", "chip.", c.v_min)) c.v_min = c.v_th + 0.01;
}

void read_reference(Reader& rd, const json& root, RunConfig& cfg) {
  const json* ref = rd.object(root, "reference", "reference");
  if (ref) rd.known_keys(*ref, {"f_s", "v_s", "t_s"}, "reference.");
  auto r = ReferencePoint<double>::reference();
  rd.number(ref, "f_s", "reference.", r.f_s);
  rd.number(ref, "v_s", "reference.", r.v_s);
  rd.number(ref, "t_s", "reference.", r.t_s);
  cfg.reference = ReferencePoint<double>::make(r.f_s, r.v_s, r.t_s);
}

void read_speedup(Reader& rd, const json& root, const std::filesystem::path& base_dir, RunConfig& cfg) {
  const json* sp = rd.object(root, "speedup", "speedup");
  if (sp == nullptr) return;
  rd.known_keys(*sp, {"amdahl", "table"}, "speedup.");
  const bool has_amdahl = sp->contains("amdahl");
  const bool has_table = sp->contains("table");
  if (has_amdahl == has_table) {
    rd.violations.push_back("speedup: give exactly one of 'amdahl' or 'table'");
    return;
  }
  if (has_amdahl) {
    double f = 0;
    if (rd.number(sp, "amdahl", "speedup.", f)) cfg.speedup = AmdahlSpeedup<double>{f};
    return;
  }
  std::string table;
  if (!rd.string(sp, "table", "speedup.", table)) return;
  auto path = std::filesystem::path(table);
  if (path.is_relative()) path = base_dir / path;
  path = std::filesystem::absolute(path).lexically_normal();
  if (!std::filesystem::exists(path)) {
    rd.violations.push_back("speedup.table: file not found: " + path.string());
    return;
  }
  try {
    cfg.speedup = read_speedup_table(path);
    cfg.speedup_table = path.string();
  } catch (const Error& e) {
    rd.violations.push_back(std::string("speedup.table: ") + e.what());
  }
}

}  // namespace

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("config: ") + e.what());
  }
  if (!root.is_object()) throw Error(ErrorKind::Parse, "config: top level must be an object");

  Reader rd;
  RunConfig cfg;
  rd.known_keys(root, {"chip", "reference", "speedup", "targets", "p_range", "output", "validate"}, "");

  read_reference(rd, root, cfg);
  read_chip(rd, root, cfg);
  read_speedup(rd, root, base_dir, cfg);

  std::vector<double> targets;
  if (rd.numbers(root, "targets", "", targets)) {
    cfg.targets.clear();
    for (double t : targets) cfg.targets.push_back({t});
  }

  std::vector<double> range;
  if (rd.numbers(root, "p_range", "", range)) {
    if (range.size() != 2 || range[0] != static_cast<int>(range[0]) || range[1] != static_cast<int>(range[1]))
      rd.violations.push_back("p_range: expected [first, last] integers");
    else
      cfg.p_range = {static_cast<int>(range[0]), static_cast<int>(range[1])};
  }

  if (const json* out = rd.object(root, "output", "output")) {
    rd.known_keys(*out, {"dir", "csv", "report", "svg"}, "output.");
    rd.string(out, "dir", "output.", cfg.output.dir);
    rd.boolean(out, "csv", "output.", cfg.output.csv);
    rd.boolean(out, "report", "output.", cfg.output.report);
    rd.boolean(out, "svg", "output.", cfg.output.svg);
  }

  if (const json* val = rd.object(root, "validate", "validate")) {
    rd.known_keys(*val, {"fractions", "targets", "tolerance"}, "validate.");
    rd.numbers(*val, "fractions", "validate.", cfg.validate.fractions);
    rd.numbers(*val, "targets", "validate.", cfg.validate.targets);
    rd.number(val, "tolerance", "validate.", cfg.validate.tolerance);
  }

  // Invariants on the assembled values.
  for (auto& v : cfg.chip.violations("chip.")) rd.violations.push_back(std::move(v));
  if (cfg.chip.valid())
    for (auto& v : cfg.reference.violations(cfg.chip, "reference.")) rd.violations.push_back(std::move(v));
  const auto report = validate_model(cfg.speedup);
  for (const auto& v : report.violations) rd.violations.push_back("speedup: " + v);
  for (std::size_t i = 0; i < cfg.targets.size(); ++i)
    if (!(cfg.targets[i].t_r > 0))
      rd.violations.push_back("targets[" + std::to_string(i) + "]: t_r must be > 0");
  if (cfg.p_range.first < 1 || cfg.p_range.last < cfg.p_range.first)
    rd.violations.push_back("p_range: need 1 <= first <= last");
  for (double f : cfg.validate.fractions)
    if (!(f >= 0 && f <= 1)) rd.violations.push_back("validate.fractions: values must lie in [0, 1]");
  for (double t : cfg.validate.targets)
    if (!(t > 0)) rd.violations.push_back("validate.targets: values must be > 0");
  if (!(cfg.validate.tolerance > 0)) rd.violations.push_back("validate.tolerance: must be > 0");

  // Measured tables are never extrapolated: clip the sweep range to them.
  if (report.ok() && std::holds_alternative<TableSpeedup<double>>(cfg.speedup)) {
    const int table_max = max_core_count(cfg.speedup);
    if (cfg.p_range.first > table_max)
      rd.violations.push_back("p_range: starts beyond the speedup table's last p=" + std::to_string(table_max));
    cfg.p_range.last = std::min(cfg.p_range.last, table_max);
  }

  if (!rd.violations.empty()) {
    std::ostringstream msg;
    msg << "config: " << rd.violations.size() << " violation(s)";
    for (const auto& v : rd.violations) msg << "\n  " << v;
    throw Error(ErrorKind::Validation, msg.str());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "config: cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path().empty() ? "." : path.parent_path());
}

std::string dump_config(const RunConfig& cfg) {
  json root;
  const auto& c = cfg.chip;
  root["chip"] = {{"dyn_const", c.dyn_const}, {"i_leak", c.i_leak}, {"k2", c.k2}, {"v_th", c.v_th},
                  {"h", c.h},                 {"v_max", c.v_max},   {"v_min", c.v_min}};
  root["reference"] = {{"f_s", cfg.reference.f_s}, {"v_s", cfg.reference.v_s}, {"t_s", cfg.reference.t_s}};
  if (const auto* a = std::get_if<AmdahlSpeedup<double>>(&cfg.speedup))
    root["speedup"] = {{"amdahl", a->parallel_fraction}};
  else
    root["speedup"] = {{"table", cfg.speedup_table}};
  root["targets"] = json::array();
  for (const auto& t : cfg.targets) root["targets"].push_back(t.t_r);
  root["p_range"] = {cfg.p_range.first, cfg.p_range.last};
  root["output"] = {{"dir", cfg.output.dir},
                    {"csv", cfg.output.csv},
                    {"report", cfg.output.report},
                    {"svg", cfg.output.svg}};
  root["validate"] = {{"fractions", cfg.validate.fractions},
                      {"targets", cfg.validate.targets},
                      {"tolerance", cfg.validate.tolerance}};
  return root.dump(2) + "\n";
}

}  // namespace lowvolt
