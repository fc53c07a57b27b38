// Command-line front end. Links only the public C API (sic.h).
//
// Precedence (lowest to highest): --config files in order, SIC_* environment
// overrides, --set key=value pairs, then the explicit --seed/--reps/--jobs
// flags. Results print to stdout as JSON; --out also persists result.json,
// data CSVs, and manifest.json into a directory. Errors print a one-object
// JSON document to stderr and set the exit code to the SIC_* status.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sic.h"

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if ((unsigned char)c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", (unsigned char)c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

int emit_error(int code, const std::string& message) {
  std::fprintf(stderr, "{\"error\":{\"code\":%d,\"message\":\"%s\"}}\n", code,
               json_escape(message).c_str());
  return code;
}

struct ConfigGuard {
  sic_config* cfg = sic_config_new();
  ~ConfigGuard() { sic_config_free(cfg); }
};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sterile-insect contact process simulator and analysis toolkit"};
  app.set_version_flag("--version", sic_version());

  std::string command;
  app.add_option("command", command,
                 std::string("one of: ") + sic_commands())
      ->required();

  std::vector<std::string> config_files;
  app.add_option("--config", config_files, "INI config file (repeatable)");

  std::vector<std::string> sets;
  app.add_option("--set", sets, "override one key, e.g. --set model.lambda=2");

  std::string out_dir;
  app.add_option("--out", out_dir, "directory for result.json / CSVs / manifest.json");

  bool no_env = false;
  app.add_flag("--no-env", no_env, "ignore SIC_* environment overrides");

  std::string seed_s, reps_s, jobs_s;
  app.add_option("--seed", seed_s, "shorthand for --set run.seed=...");
  app.add_option("--reps", reps_s, "shorthand for --set run.reps=...");
  app.add_option("--jobs", jobs_s, "shorthand for --set run.jobs=...");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) { // --help / --version
      return app.exit(e);
    }
    return emit_error(SIC_ERR_USAGE, e.what());
  }

  ConfigGuard guard;
  if (!guard.cfg) return emit_error(SIC_ERR_INTERNAL, "allocation failure");
  sic_config* cfg = guard.cfg;

  for (const std::string& f : config_files) {
    if (int rc = sic_config_load_file(cfg, f.c_str()); rc != SIC_OK)
      return emit_error(rc, sic_last_error());
  }
  if (!no_env) {
    if (int rc = sic_config_load_env(cfg); rc != SIC_OK)
      return emit_error(rc, sic_last_error());
  }
  for (const std::string& kv : sets) {
    size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      return emit_error(SIC_ERR_USAGE, "--set expects key=value, got: " + kv);
    if (int rc = sic_config_set(cfg, kv.substr(0, eq).c_str(),
                                kv.substr(eq + 1).c_str());
        rc != SIC_OK)
      return emit_error(rc, sic_last_error());
  }
  const std::pair<const char*, const std::string*> shorthands[] = {
      {"run.seed", &seed_s}, {"run.reps", &reps_s}, {"run.jobs", &jobs_s}};
  for (const auto& [key, val] : shorthands) {
    if (val->empty()) continue;
    if (int rc = sic_config_set(cfg, key, val->c_str()); rc != SIC_OK)
      return emit_error(rc, sic_last_error());
  }

  sic_result* result = nullptr;
  int rc = sic_run(command.c_str(), cfg, out_dir.empty() ? nullptr : out_dir.c_str(),
                   &result);
  if (rc != SIC_OK) return emit_error(rc, sic_last_error());

  std::fputs(sic_result_json(result), stdout);
  sic_result_free(result);
  return 0;
}
