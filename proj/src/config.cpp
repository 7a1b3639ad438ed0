#include "specbound/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace specbound::config {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& v, const std::string& key, int line) {
  try {
    size_t used;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "': expected a number, got '" + v + "'");
  }
}

long parse_int(const std::string& v, const std::string& key, int line) {
  try {
    size_t used;
    long i = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument("");
    return i;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "': expected an integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& v, const std::string& key, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                    "': expected a boolean, got '" + v + "'");
}

}  // namespace

double RunConfig::effective_radius() const {
  if (grid.radius > 0.0) return grid.radius;
  switch (problem.dim) {
    case 1: return 8.0;
    case 2: return 7.0;
    default: return 5.0;
  }
}

int RunConfig::effective_n() const {
  if (grid.n > 0) return grid.n;
  switch (problem.dim) {
    case 1: return 4001;
    case 2: return 161;
    default: return 41;
  }
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  bool saw_problem = false;

  while (std::getline(in, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "problem" && section != "weight" && section != "grid" &&
          section != "commands" && section != "output")
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unknown section '" + section + "'");
      continue;
    }

    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));

    if (section.empty()) {
      if (key == "schema_version") {
        cfg.schema_version = static_cast<int>(parse_int(value, key, line_no));
        if (cfg.schema_version != 1)
          throw ConfigError("line " + std::to_string(line_no) +
                            ": unsupported schema_version " + value);
      } else {
        throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" +
                          key + "' outside a section");
      }
    } else if (section == "problem") {
      saw_problem = true;
      if (key == "family") cfg.problem.family = value;
      else if (key == "d") cfg.problem.dim = static_cast<int>(parse_int(value, key, line_no));
      else if (key == "a") cfg.problem.a = parse_double(value, key, line_no);
      else if (key == "c") cfg.problem.c = parse_double(value, key, line_no);
      else if (key == "tau") cfg.problem.tau = parse_double(value, key, line_no);
      else if (key == "expr") cfg.problem.expr = value;
      else
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unknown key '" + key + "' in [problem]");
    } else if (section == "weight") {
      if (key == "family") cfg.weight.family = value;
      else if (key == "eps") {
        cfg.weight.eps.clear();
        for (const std::string& item : split_list(value))
          cfg.weight.eps.push_back(parse_double(item, key, line_no));
      } else
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unknown key '" + key + "' in [weight]");
    } else if (section == "grid") {
      if (key == "radius") cfg.grid.radius = parse_double(value, key, line_no);
      else if (key == "n") cfg.grid.n = static_cast<int>(parse_int(value, key, line_no));
      else
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unknown key '" + key + "' in [grid]");
    } else if (section == "commands") {
      if (key != "run")
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unknown key '" + key + "' in [commands]");
      cfg.commands.clear();
      for (const std::string& item : split_list(value)) {
        if (item == "bound") cfg.commands.push_back(Command::Bound);
        else if (item == "eigs") cfg.commands.push_back(Command::Eigs);
        else if (item == "verify") cfg.commands.push_back(Command::Verify);
        else if (item == "report") cfg.commands.push_back(Command::Report);
        else
          throw ConfigError("line " + std::to_string(line_no) +
                            ": unknown command '" + item + "'");
      }
    } else if (section == "output") {
      if (key == "dir") cfg.output_dir = value;
      else if (key == "csv") cfg.write_csv = parse_bool(value, key, line_no);
      else
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unknown key '" + key + "' in [output]");
    }
  }

  if (!saw_problem) throw ConfigError("missing [problem] section");
  if (cfg.problem.family != "gaussian" && cfg.problem.family != "power_product" &&
      cfg.problem.family != "custom")
    throw ConfigError("unknown problem family '" + cfg.problem.family + "'");
  if (cfg.problem.family == "custom" && cfg.problem.expr.empty())
    throw ConfigError("custom problem family requires expr");
  if (cfg.problem.dim < 1) throw ConfigError("dimension must be >= 1");
  if (cfg.weight.family != "identity" && cfg.weight.family != "exp_eps_u" &&
      cfg.weight.family != "optimize")
    throw ConfigError("unknown weight family '" + cfg.weight.family + "'");
  if (cfg.commands.empty())
    cfg.commands = {Command::Bound, Command::Eigs, Command::Report};
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace specbound::config
