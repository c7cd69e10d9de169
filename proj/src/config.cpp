#include "alcove/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace alcove {

namespace {

[[noreturn]] void fail(int lineno, const std::string& what) {
  throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + what);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Drop a trailing comment, honoring quoted strings.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

bool parse_bool(const std::string& v, int lineno) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail(lineno, "expected true or false, got '" + v + "'");
}

double parse_number(const std::string& v, int lineno) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    fail(lineno, "expected a number, got '" + v + "'");
  }
  if (used != v.size()) fail(lineno, "trailing characters after number: '" + v + "'");
  return x;
}

long parse_integer(const std::string& v, int lineno) {
  const double x = parse_number(v, lineno);
  const long i = static_cast<long>(std::llround(x));
  if (std::abs(x - static_cast<double>(i)) > 1e-9) {
    fail(lineno, "expected an integer, got '" + v + "'");
  }
  return i;
}

std::string parse_string(const std::string& v, int lineno) {
  if (v.size() < 2 || v.front() != '"' || v.back() != '"') {
    fail(lineno, "expected a quoted string, got '" + v + "'");
  }
  return v.substr(1, v.size() - 2);
}

std::vector<std::string> parse_array_items(const std::string& v, int lineno) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
    fail(lineno, "expected an array [...], got '" + v + "'");
  }
  std::vector<std::string> items;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const char c = v[i];
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      items.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) items.push_back(trim(cur));
  for (const auto& it : items) {
    if (it.empty()) fail(lineno, "empty array element");
  }
  return items;
}

void apply_root_key(RunConfig& cfg, const std::string& key, const std::string& val,
                    int lineno) {
  if (key == "model") {
    const std::string m = parse_string(val, lineno);
    if (m != "su2" && m != "su3") fail(lineno, "model must be \"su2\" or \"su3\"");
    cfg.model = m;
  } else if (key == "experiments") {
    cfg.experiments.clear();
    for (const auto& it : parse_array_items(val, lineno)) {
      cfg.experiments.push_back(parse_string(it, lineno));
    }
  } else if (key == "gamma") {
    cfg.gamma.clear();
    if (!val.empty() && val.front() == '[') {
      for (const auto& it : parse_array_items(val, lineno)) {
        cfg.gamma.push_back(parse_number(it, lineno));
      }
    } else {
      cfg.gamma.push_back(parse_number(val, lineno));
    }
  } else if (key == "n") {
    const long n = parse_integer(val, lineno);
    if (n < 0) fail(lineno, "n must be non-negative");
    cfg.n = n;
  } else if (key == "ds") {
    const double ds = parse_number(val, lineno);
    if (ds < 0.0) fail(lineno, "ds must be non-negative");
    cfg.ds = ds;
  } else if (key == "seed") {
    const long s = parse_integer(val, lineno);
    if (s < 0) fail(lineno, "seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(s);
  } else if (key == "threads") {
    const long t = parse_integer(val, lineno);
    if (t < 0) fail(lineno, "threads must be non-negative");
    cfg.threads = static_cast<int>(t);
  } else if (key == "out" || key == "out_dir") {
    cfg.out_dir = parse_string(val, lineno);
  } else if (key == "dump_samples") {
    cfg.dump_samples = parse_bool(val, lineno);
  } else {
    fail(lineno, "unknown key '" + key + "'");
  }
}

void apply_kernel_key(KernelConfig& k, const std::string& key, const std::string& val,
                      int lineno) {
  if (key == "lattice_radius") {
    k.lattice_radius = parse_number(val, lineno);
  } else if (key == "weight_energy_cutoff") {
    k.weight_energy_cutoff = parse_number(val, lineno);
  } else if (key == "quadrature_points") {
    k.quadrature_points = static_cast<int>(parse_integer(val, lineno));
  } else {
    fail(lineno, "unknown key 'kernel." + key + "'");
  }
}

}  // namespace

namespace {

// Unquoted bracket balance of one line; quotes toggle on '"'.
int bracket_balance(const std::string& s, bool& quoted) {
  int depth = 0;
  for (char c : s) {
    if (c == '"') quoted = !quoted;
    if (quoted) continue;
    if (c == '[') ++depth;
    if (c == ']') --depth;
  }
  return depth;
}

}  // namespace

void apply_config_text(RunConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string raw, section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    // Arrays may span lines: join until the brackets balance.
    if (line.find('=') != std::string::npos) {
      bool quoted = false;
      int depth = bracket_balance(line, quoted);
      const int first_line = lineno;
      while (depth > 0 && std::getline(in, raw)) {
        ++lineno;
        const std::string more = trim(strip_comment(raw));
        depth += bracket_balance(more, quoted);
        line += " " + more;
      }
      if (depth != 0) fail(first_line, "unterminated array");
    }
    if (line.front() == '[') {
      if (line.back() != ']') fail(lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "kernel") fail(lineno, "unknown section '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) fail(lineno, "missing key");
    if (val.empty()) fail(lineno, "missing value for '" + key + "'");
    if (section.empty()) {
      apply_root_key(cfg, key, val, lineno);
    } else {
      apply_kernel_key(cfg.kernel, key, val, lineno);
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str());
}

}  // namespace alcove
