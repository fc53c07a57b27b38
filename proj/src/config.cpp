#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>

#include "errors.hpp"

extern char** environ;

namespace sic {
namespace {

const std::vector<std::string> kKnownKeys = {
    // model rates
    "model.lambda", "model.theta", "model.alpha", "model.dim",
    // simulation box
    "box.halfwidth", "box.x_lo", "box.x_hi", "box.y_lo", "box.y_hi", "box.boundary",
    // run plumbing
    "run.variant", "run.horizon", "run.reps", "run.seed", "run.jobs", "run.samples",
    // initial condition
    "init.kind", "init.p1", "init.p0", "init.pm1", "init.theta", "init.sites",
    // percolation commands
    "perc.p", "perc.n", "perc.eta", "perc.adjacency", "perc.target", "perc.tol",
    "perc.size_cap", "perc.chi_budget",
    // contact-process toolkit commands
    "cp.t_max", "cp.halfwidth", "cp.a", "cp.b", "cp.times", "cp.sites", "cp.epsilon",
    "cp.n", "cp.l", "cp.delta", "cp.v",
    // block constructions
    "block.k", "block.t0", "block.beta", "block.alpha", "block.ct", "block.ck",
    // renormalized-site openness
    "ne.n", "ne.eta", "ne.eps0",
    // oriented percolation
    "op.p", "op.levels", "op.lattice", "op.init_halfwidth",
    // finite space-time condition
    "stc.n", "stc.l", "stc.t",
    // critical-value bisection
    "crit.target", "crit.tol", "crit.lambda_lo", "crit.lambda_hi", "crit.t_max",
    // closed-form bound evaluation
    "bound.k", "bound.t0", "bound.beta", "bound.chi", "bound.delta", "bound.ck",
    // duality checks
    "dual.t", "dual.a", "dual.c", "dual.d",
    // sweep orchestration
    "sweep.command", "sweep.param", "sweep.values", "sweep.budget",
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

} // namespace

bool RunConfig::is_known_key(const std::string& key) {
  return std::find(kKnownKeys.begin(), kKnownKeys.end(), key) != kKnownKeys.end();
}

const std::vector<std::string>& RunConfig::known_keys() { return kKnownKeys; }

void RunConfig::set(const std::string& key, const std::string& value) {
  if (!is_known_key(key)) throw UsageError("unknown config key: " + key);
  kv_[key] = value;
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file: " + path);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw UsageError(path + ":" + std::to_string(lineno) + ": malformed section");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    set(key, value);
  }
}

void RunConfig::load_env() {
  for (char** e = environ; e && *e; ++e) {
    std::string entry(*e);
    if (entry.rfind("SIC_", 0) != 0) continue;
    size_t eq = entry.find('=');
    if (eq == std::string::npos) continue;
    std::string name = entry.substr(4, eq - 4);
    std::string value = entry.substr(eq + 1);
    std::string key;
    for (size_t i = 0; i < name.size(); ++i) {
      if (name[i] == '_' && i + 1 < name.size() && name[i + 1] == '_') {
        key += '.';
        ++i;
      } else {
        key += (char)std::tolower((unsigned char)name[i]);
      }
    }
    set(key, value);
  }
}

bool RunConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string RunConfig::get_str(const std::string& key, const std::string& dflt) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? dflt : it->second;
}

double RunConfig::get_double(const std::string& key, double dflt) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  try {
    size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size())
      throw UsageError("config value for " + key + " is not a number: " + it->second);
    return v;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError("config value for " + key + " is not a number: " + it->second);
  }
}

int64_t RunConfig::get_int(const std::string& key, int64_t dflt) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  try {
    size_t pos = 0;
    long long v = std::stoll(it->second, &pos);
    if (pos != it->second.size())
      throw UsageError("config value for " + key + " is not an integer: " + it->second);
    return (int64_t)v;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError("config value for " + key + " is not an integer: " + it->second);
  }
}

uint64_t RunConfig::get_u64(const std::string& key, uint64_t dflt) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  try {
    size_t pos = 0;
    unsigned long long v = std::stoull(it->second, &pos);
    if (pos != it->second.size())
      throw UsageError("config value for " + key + " is not an integer: " + it->second);
    return (uint64_t)v;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError("config value for " + key + " is not an integer: " + it->second);
  }
}

std::string RunConfig::canonical() const {
  std::string out;
  for (const auto& [k, v] : kv_) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

uint64_t RunConfig::hash() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : canonical()) {
    h ^= (uint8_t)c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string RunConfig::hash_hex() const {
  static const char* digits = "0123456789abcdef";
  uint64_t h = hash();
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[(size_t)i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

} // namespace sic
