#include "bdls/run_config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "bdls/errors.hpp"

namespace bdls {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"rates", {"alpha", "beta", "a_bar", "b_bar", "r_a", "r_b", "eta"}},
      {"initial",
       {"kind", "u_in", "r", "amplitude", "center", "sigma", "file"}},
      {"bd",
       {"eps", "x_max", "i_max", "t_end", "rtol", "atol", "dt_init", "dt_min",
        "samples", "watch", "snapshot_times"}},
      {"ls",
       {"x_max", "cells", "cfl", "t_end", "dt_cap", "samples", "freeze_u",
        "zero_inflow"}},
      {"sweep",
       {"eps_list", "t_samples", "ls_cells", "workers", "window_skip",
        "u_trace_points", "z_list"}},
      {"output", {"dir"}},
  };
  return s;
}

void check_known(const std::string& section, const std::string& key) {
  auto it = schema().find(section);
  if (it == schema().end()) {
    throw validation_error("config: unknown section [" + section + "]");
  }
  if (!key.empty() && !it->second.count(key)) {
    throw validation_error("config: unknown key " + section + "." + key);
  }
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& section, const std::string& key,
                    const std::string& value) {
  const std::string v = trim(value);
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) {
    throw validation_error("config: key " + section + "." + key +
                           " is not a number: '" + value + "'");
  }
  return out;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) parts.push_back(t);
  }
  return parts;
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  Section* current = nullptr;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw validation_error("config: malformed section header at line " +
                               std::to_string(line_no));
      }
      const std::string name = trim(t.substr(1, t.size() - 2));
      check_known(name, "");
      for (const auto& s : cfg.sections_) {
        if (s.name == name) {
          throw validation_error("config: duplicate section [" + name + "]");
        }
      }
      cfg.sections_.push_back({name, {}});
      current = &cfg.sections_.back();
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw validation_error("config: expected 'key = value' at line " +
                             std::to_string(line_no));
    }
    if (!current) {
      throw validation_error("config: key outside any [section] at line " +
                             std::to_string(line_no));
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    check_known(current->name, key);
    for (const auto& e : current->entries) {
      if (e.key == key) {
        throw validation_error("config: duplicate key " + current->name + "." + key);
      }
    }
    current->entries.push_back({key, value});
  }
  return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("config: cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string RunConfig::echo() const {
  std::string out;
  for (const auto& section : sections_) {
    out += "[" + section.name + "]\n";
    for (const auto& e : section.entries) {
      out += e.key + " = " + e.value + "\n";
    }
    out += "\n";
  }
  return out;
}

bool RunConfig::operator==(const RunConfig& other) const {
  if (sections_.size() != other.sections_.size()) return false;
  for (std::size_t s = 0; s < sections_.size(); ++s) {
    if (sections_[s].name != other.sections_[s].name) return false;
    if (sections_[s].entries.size() != other.sections_[s].entries.size()) return false;
    for (std::size_t k = 0; k < sections_[s].entries.size(); ++k) {
      if (sections_[s].entries[k].key != other.sections_[s].entries[k].key ||
          sections_[s].entries[k].value != other.sections_[s].entries[k].value) {
        return false;
      }
    }
  }
  return true;
}

const RunConfig::Entry* RunConfig::find(const std::string& section,
                                        const std::string& key) const {
  for (const auto& s : sections_) {
    if (s.name != section) continue;
    for (const auto& e : s.entries) {
      if (e.key == key) return &e;
    }
  }
  return nullptr;
}

const RunConfig::Entry& RunConfig::require(const std::string& section,
                                           const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) {
    throw validation_error("config: missing key " + section + "." + key);
  }
  return *e;
}

bool RunConfig::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

void RunConfig::set(const std::string& section, const std::string& key,
                    const std::string& value) {
  check_known(section, key);
  for (auto& s : sections_) {
    if (s.name != section) continue;
    for (auto& e : s.entries) {
      if (e.key == key) {
        e.value = value;
        return;
      }
    }
    s.entries.push_back({key, value});
    return;
  }
  sections_.push_back({section, {{key, value}}});
}

void RunConfig::set_default(const std::string& section, const std::string& key,
                            const std::string& value) {
  if (!has(section, key)) set(section, key, value);
}

void RunConfig::set_from_spec(const std::string& spec) {
  const std::size_t eq = spec.find('=');
  const std::size_t dot = spec.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw validation_error("config: --set expects section.key=value, got '" +
                           spec + "'");
  }
  set(trim(spec.substr(0, dot)), trim(spec.substr(dot + 1, eq - dot - 1)),
      trim(spec.substr(eq + 1)));
}

std::string RunConfig::get_string(const std::string& section,
                                  const std::string& key) const {
  return require(section, key).value;
}

double RunConfig::get_double(const std::string& section,
                             const std::string& key) const {
  return parse_double(section, key, require(section, key).value);
}

long RunConfig::get_long(const std::string& section, const std::string& key) const {
  const double v = get_double(section, key);
  const long out = static_cast<long>(v);
  if (static_cast<double>(out) != v) {
    throw validation_error("config: key " + section + "." + key +
                           " must be an integer");
  }
  return out;
}

bool RunConfig::get_bool(const std::string& section, const std::string& key) const {
  const std::string v = require(section, key).value;
  if (v == "0" || v == "false") return false;
  if (v == "1" || v == "true") return true;
  throw validation_error("config: key " + section + "." + key +
                         " must be 0/1/true/false");
}

std::vector<double> RunConfig::get_double_list(const std::string& section,
                                               const std::string& key) const {
  std::vector<double> out;
  for (const auto& part : split_list(require(section, key).value)) {
    out.push_back(parse_double(section, key, part));
  }
  return out;
}

std::vector<long> RunConfig::get_long_list(const std::string& section,
                                           const std::string& key) const {
  std::vector<long> out;
  for (double v : get_double_list(section, key)) {
    const long l = static_cast<long>(v);
    if (static_cast<double>(l) != v) {
      throw validation_error("config: key " + section + "." + key +
                             " must list integers");
    }
    out.push_back(l);
  }
  return out;
}

std::string RunConfig::get_or(const std::string& section, const std::string& key,
                              const std::string& fallback) const {
  const Entry* e = find(section, key);
  return e ? e->value : fallback;
}

double RunConfig::get_or(const std::string& section, const std::string& key,
                         double fallback) const {
  const Entry* e = find(section, key);
  return e ? parse_double(section, key, e->value) : fallback;
}

long RunConfig::get_or(const std::string& section, const std::string& key,
                       long fallback) const {
  return has(section, key) ? get_long(section, key) : fallback;
}

RateFamily rate_family_from(const RunConfig& cfg) {
  return RateFamily::power_law(
      cfg.get_double("rates", "alpha"), cfg.get_double("rates", "beta"),
      cfg.get_double("rates", "a_bar"), cfg.get_double("rates", "b_bar"),
      cfg.get_double("rates", "r_a"), cfg.get_double("rates", "r_b"),
      cfg.get_double("rates", "eta"));
}

InitialData initial_data_from(const RunConfig& cfg) {
  const std::string kind = cfg.get_or("initial", "kind", std::string("bump"));
  const double u_in = cfg.get_double("initial", "u_in");
  if (kind == "powerlaw") {
    return InitialData::power_law(cfg.get_double("initial", "r"), u_in);
  }
  if (kind == "bump") {
    return InitialData::bump(cfg.get_double("initial", "amplitude"),
                             cfg.get_double("initial", "center"),
                             cfg.get_double("initial", "sigma"), u_in);
  }
  if (kind == "tabulated") {
    const std::string path = cfg.get_string("initial", "file");
    std::ifstream in(path);
    if (!in) throw validation_error("config: cannot open initial.file: " + path);
    std::vector<double> xs, fs;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (first) {  // header row
        first = false;
        continue;
      }
      const std::size_t comma = line.find(',');
      if (comma == std::string::npos) continue;
      xs.push_back(parse_double("initial", "file", line.substr(0, comma)));
      fs.push_back(parse_double("initial", "file", line.substr(comma + 1)));
    }
    return InitialData::tabulated(std::move(xs), std::move(fs), u_in);
  }
  throw validation_error(
      "config: initial.kind must be powerlaw, bump, or tabulated");
}

IntegratorConfig integrator_config_from(const RunConfig& cfg) {
  IntegratorConfig out;
  out.rtol = cfg.get_or("bd", "rtol", 1e-10);
  out.atol = cfg.get_or("bd", "atol", 1e-12);
  out.dt_init = cfg.get_or("bd", "dt_init", 1e-6);
  out.dt_min = cfg.get_or("bd", "dt_min", 1e-12);
  out.t_end = cfg.get_double("bd", "t_end");
  validate(out);
  return out;
}

LSConfig ls_config_from(const RunConfig& cfg) {
  LSConfig out;
  out.x_max = cfg.get_double("ls", "x_max");
  out.cells = cfg.get_long("ls", "cells");
  out.cfl = cfg.get_or("ls", "cfl", 0.9);
  out.t_end = cfg.get_double("ls", "t_end");
  out.dt_cap = cfg.get_or("ls", "dt_cap", 0.0);
  out.freeze_u = cfg.has("ls", "freeze_u") && cfg.get_bool("ls", "freeze_u");
  out.zero_inflow =
      cfg.has("ls", "zero_inflow") && cfg.get_bool("ls", "zero_inflow");
  validate(out);
  return out;
}

}  // namespace bdls
