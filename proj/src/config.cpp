#include "chstab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace chstab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& raw) {
  const std::string v = trim(raw);
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'')) {
    if (v.back() != v.front()) throw ConfigError("unterminated string: " + v);
    return v.substr(1, v.size() - 2);
  }
  return v;
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string v = unquote(raw);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  if (!std::isfinite(out)) throw ConfigError("key '" + key + "': value must be finite");
  return out;
}

long to_long(const std::string& key, const std::string& raw) {
  const std::string v = unquote(raw);
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& raw) {
  const std::string v = unquote(raw);
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& raw) {
  std::string v = trim(raw);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') throw ConfigError("key '" + key + "': unterminated array");
    v = v.substr(1, v.size() - 2);
  }
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(to_double(key, item));
  }
  return out;
}

std::string render(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

std::string render(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + render(v[i]);
  return s + "]";
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct KeySpec {
  std::string key;
  Setter set;
  Getter get;
};

const std::vector<KeySpec>& schema() {
  static const std::vector<KeySpec> keys = {
      {"domain.L", [](RunConfig& c, const std::string& k, const std::string& v) { c.L = to_double(k, v); },
       [](const RunConfig& c) { return render(c.L); }},
      {"grid.n",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const long n = to_long(k, v);
         if (n <= 0) throw ConfigError("grid.n must be positive");
         c.n = static_cast<std::size_t>(n);
       },
       [](const RunConfig& c) { return std::to_string(c.n); }},
      {"epsilon", [](RunConfig& c, const std::string& k, const std::string& v) { c.epsilon = to_double(k, v); },
       [](const RunConfig& c) { return render(c.epsilon); }},
      {"potential.coeffs", [](RunConfig& c, const std::string& k, const std::string& v) { c.coeffs = to_list(k, v); },
       [](const RunConfig& c) { return render(c.coeffs); }},
      {"schedule.kind",
       [](RunConfig& c, const std::string&, const std::string& v) {
         try {
           c.schedule.kind = schedule_kind_from_string(unquote(v));
         } catch (const std::invalid_argument& e) {
           throw ConfigError(e.what());
         }
       },
       [](const RunConfig& c) { return quoted(to_string(c.schedule.kind)); }},
      {"schedule.k", [](RunConfig& c, const std::string& k, const std::string& v) { c.schedule.k = to_double(k, v); },
       [](const RunConfig& c) { return render(c.schedule.k); }},
      {"schedule.values",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.schedule.values = to_list(k, v); },
       [](const RunConfig& c) { return render(c.schedule.values); }},
      {"schedule.k_lo",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.schedule.k_lo = to_double(k, v); },
       [](const RunConfig& c) { return render(c.schedule.k_lo); }},
      {"schedule.k_hi",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.schedule.k_hi = to_double(k, v); },
       [](const RunConfig& c) { return render(c.schedule.k_hi); }},
      {"T_end", [](RunConfig& c, const std::string& k, const std::string& v) { c.schedule.T_end = to_double(k, v); },
       [](const RunConfig& c) { return render(c.schedule.T_end); }},
      {"seed",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const long s = to_long(k, v);
         if (s < 0) throw ConfigError("seed must be nonnegative");
         c.seed = static_cast<std::uint64_t>(s);
         c.schedule.seed = c.seed;
       },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      {"solver.mode",
       [](RunConfig& c, const std::string&, const std::string& v) {
         try {
           c.solver.mode = solver_mode_from_string(unquote(v));
         } catch (const std::invalid_argument& e) {
           throw ConfigError(e.what());
         }
       },
       [](const RunConfig& c) { return quoted(to_string(c.solver.mode)); }},
      {"solver.tol", [](RunConfig& c, const std::string& k, const std::string& v) { c.solver.tol = to_double(k, v); },
       [](const RunConfig& c) { return render(c.solver.tol); }},
      {"solver.max_iter",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.solver.max_iter = static_cast<int>(to_long(k, v));
       },
       [](const RunConfig& c) { return std::to_string(c.solver.max_iter); }},
      {"solver.linear_tol",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.solver.linear_tol = to_double(k, v); },
       [](const RunConfig& c) { return render(c.solver.linear_tol); }},
      {"solver.linear_max_iter",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.solver.linear_max_iter = static_cast<int>(to_long(k, v));
       },
       [](const RunConfig& c) { return std::to_string(c.solver.linear_max_iter); }},
      {"solver.gmres_restart",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.solver.gmres_restart = static_cast<int>(to_long(k, v));
       },
       [](const RunConfig& c) { return std::to_string(c.solver.gmres_restart); }},
      {"solver.stabilization",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (unquote(v) == "auto")
           c.solver.stabilization.reset();
         else
           c.solver.stabilization = to_double(k, v);
       },
       [](const RunConfig& c) {
         return c.solver.stabilization ? render(*c.solver.stabilization) : quoted("auto");
       }},
      {"solver.predictor",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.solver.predictor = to_bool(k, v); },
       [](const RunConfig& c) { return std::string(c.solver.predictor ? "true" : "false"); }},
      {"solver.dealias",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.solver.dealias = to_bool(k, v); },
       [](const RunConfig& c) { return std::string(c.solver.dealias ? "true" : "false"); }},
      {"ic.preset", [](RunConfig& c, const std::string&, const std::string& v) { c.ic.preset = unquote(v); },
       [](const RunConfig& c) { return quoted(c.ic.preset); }},
      {"ic.file",
       [](RunConfig& c, const std::string&, const std::string& v) {
         c.ic.file = unquote(v);
         if (!c.ic.file.empty()) c.ic.preset = "file";
       },
       [](const RunConfig& c) { return quoted(c.ic.file.string()); }},
      {"ic.center",
       [](RunConfig& c, const std::string&, const std::string& v) {
         const std::string s = unquote(v);
         if (s == "origin")
           c.ic.center = DropCenter::origin;
         else if (s == "middle")
           c.ic.center = DropCenter::middle;
         else
           throw ConfigError("ic.center must be origin or middle, got '" + s + "'");
       },
       [](const RunConfig& c) { return quoted(c.ic.center == DropCenter::origin ? "origin" : "middle"); }},
      {"ic.scale", [](RunConfig& c, const std::string& k, const std::string& v) { c.ic.scale = to_double(k, v); },
       [](const RunConfig& c) { return render(c.ic.scale); }},
      {"ic.hm1",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (unquote(v) == "none")
           c.ic.hm1.reset();
         else
           c.ic.hm1 = to_double(k, v);
       },
       [](const RunConfig& c) { return c.ic.hm1 ? render(*c.ic.hm1) : quoted("none"); }},
      {"output.csv", [](RunConfig& c, const std::string&, const std::string& v) { c.output.csv = unquote(v); },
       [](const RunConfig& c) { return quoted(c.output.csv.string()); }},
      {"output.checkpoint_dir",
       [](RunConfig& c, const std::string&, const std::string& v) { c.output.checkpoint_dir = unquote(v); },
       [](const RunConfig& c) { return quoted(c.output.checkpoint_dir.string()); }},
      {"output.prefix", [](RunConfig& c, const std::string&, const std::string& v) { c.output.prefix = unquote(v); },
       [](const RunConfig& c) { return quoted(c.output.prefix); }},
      {"output.manifest",
       [](RunConfig& c, const std::string&, const std::string& v) { c.output.manifest = unquote(v); },
       [](const RunConfig& c) { return quoted(c.output.manifest.string()); }},
      {"snapshot_every",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.snapshot_every = to_long(k, v); },
       [](const RunConfig& c) { return std::to_string(c.snapshot_every); }},
      {"analysis.c0", [](RunConfig& c, const std::string& k, const std::string& v) { c.analysis.c0 = to_double(k, v); },
       [](const RunConfig& c) { return render(c.analysis.c0); }},
      {"analysis.eta",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (unquote(v) == "auto")
           c.analysis.eta.reset();
         else
           c.analysis.eta = to_double(k, v);
       },
       [](const RunConfig& c) { return c.analysis.eta ? render(*c.analysis.eta) : quoted("auto"); }},
      {"analysis.R",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (unquote(v) == "auto")
           c.analysis.R.reset();
         else
           c.analysis.R = to_double(k, v);
       },
       [](const RunConfig& c) { return c.analysis.R ? render(*c.analysis.R) : quoted("auto"); }},
  };
  return keys;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  for (const auto& spec : schema())
    if (spec.key == key) {
      spec.set(*this, key, value);
      return;
    }
  throw ConfigError("unknown configuration key '" + key + "'");
}

PolynomialPotential RunConfig::potential() const {
  try {
    return PolynomialPotential(coeffs);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("potential.coeffs: ") + e.what());
  }
}

void RunConfig::validate() const {
  if (!(L > 0.0)) throw ConfigError("domain.L must be positive");
  if (n < 8) throw ConfigError("grid.n must be at least 8");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  (void)potential();
  try {
    schedule.validate();
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  static const std::set<std::string> presets{"I", "II", "III", "file"};
  if (!presets.count(ic.preset)) throw ConfigError("ic.preset must be I, II, III or file, got '" + ic.preset + "'");
  if (ic.preset == "file" && ic.file.empty()) throw ConfigError("ic.preset = file requires ic.file");
  if (!(ic.scale > 0.0)) throw ConfigError("ic.scale must be positive");
  if (ic.hm1 && !(*ic.hm1 > 0.0)) throw ConfigError("ic.hm1 must be positive");
  if (snapshot_every < 0) throw ConfigError("snapshot_every must be nonnegative");
  if (output.prefix.empty()) throw ConfigError("output.prefix must not be empty");
  if (!(analysis.c0 > 0.0)) throw ConfigError("analysis.c0 must be positive");
  if (analysis.eta && !(*analysis.eta > 0.0)) throw ConfigError("analysis.eta must be positive");
  if (analysis.R && !(*analysis.R >= 0.0)) throw ConfigError("analysis.R must be nonnegative");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // strip comments outside quotes
    bool in_str = false;
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char ch = line[i];
      if (in_str) {
        if (ch == quote) in_str = false;
      } else if (ch == '"' || ch == '\'') {
        in_str = true;
        quote = ch;
      } else if (ch == '#') {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    try {
      cfg.set(key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override must look like key=value, got '" + assignment + "'");
  cfg.set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& spec : schema()) out.emplace_back(spec.key, spec.get(cfg));
  return out;
}

std::string to_toml(const RunConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : config_entries(cfg)) out += k + " = " + v + "\n";
  return out;
}

}  // namespace chstab
