#include "sic.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "config.hpp"
#include "errors.hpp"
#include "runner.hpp"

namespace {

thread_local std::string g_last_error;

void clear_error() { g_last_error.clear(); }

int fail(int code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

// Runs `fn`, translating exceptions into status codes + sic_last_error().
template <typename Fn>
int guarded(Fn&& fn) {
  clear_error();
  try {
    fn();
    return SIC_OK;
  } catch (const sic::UsageError& e) {
    return fail(SIC_ERR_USAGE, e.what());
  } catch (const sic::DomainError& e) {
    return fail(SIC_ERR_DOMAIN, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SIC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SIC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SIC_ERR_INTERNAL, "unknown error");
  }
}

} // namespace

struct sic_config {
  sic::RunConfig cfg;
  std::string canonical_buf;
  std::string hash_buf;
};

struct sic_result {
  sic::RunResult res;
  std::string json_buf;
};

extern "C" {

sic_config* sic_config_new(void) { return new (std::nothrow) sic_config(); }

void sic_config_free(sic_config* cfg) { delete cfg; }

int sic_config_set(sic_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return fail(SIC_ERR_USAGE, "null argument");
  return guarded([&] { cfg->cfg.set(key, value); });
}

int sic_config_load_file(sic_config* cfg, const char* path) {
  if (!cfg || !path) return fail(SIC_ERR_USAGE, "null argument");
  return guarded([&] { cfg->cfg.load_file(path); });
}

int sic_config_load_env(sic_config* cfg) {
  if (!cfg) return fail(SIC_ERR_USAGE, "null argument");
  return guarded([&] { cfg->cfg.load_env(); });
}

const char* sic_config_canonical(sic_config* cfg) {
  if (!cfg) return "";
  cfg->canonical_buf = cfg->cfg.canonical();
  return cfg->canonical_buf.c_str();
}

const char* sic_config_hash(sic_config* cfg) {
  if (!cfg) return "";
  cfg->hash_buf = cfg->cfg.hash_hex();
  return cfg->hash_buf.c_str();
}

int sic_run(const char* command, const sic_config* cfg, const char* out_dir,
            sic_result** result) {
  if (result) *result = nullptr;
  if (!command || !cfg || !result) return fail(SIC_ERR_USAGE, "null argument");
  return guarded([&] {
    std::string dir = out_dir ? out_dir : "";
    sic::RunResult r = sic::run_command(command, cfg->cfg, dir);
    auto* out = new sic_result();
    out->res = std::move(r);
    out->json_buf = out->res.json();
    *result = out;
  });
}

const char* sic_commands(void) {
  static const std::string joined = [] {
    std::string s;
    for (const std::string& c : sic::command_names()) {
      if (!s.empty()) s += ' ';
      s += c;
    }
    return s;
  }();
  return joined.c_str();
}

void sic_result_free(sic_result* res) { delete res; }

const char* sic_result_json(const sic_result* res) {
  return res ? res->json_buf.c_str() : "";
}

size_t sic_result_estimate_count(const sic_result* res) {
  return res ? res->res.estimates.size() : 0;
}

const char* sic_result_estimate_name(const sic_result* res, size_t i) {
  if (!res || i >= res->res.estimates.size()) return "";
  return res->res.estimates[i].name.c_str();
}

double sic_result_estimate_value(const sic_result* res, size_t i) {
  if (!res || i >= res->res.estimates.size()) return 0.0;
  return res->res.estimates[i].value;
}

double sic_result_estimate_stderr(const sic_result* res, size_t i) {
  if (!res || i >= res->res.estimates.size()) return 0.0;
  return res->res.estimates[i].stderr_val;
}

double sic_result_estimate_ci_lo(const sic_result* res, size_t i) {
  if (!res || i >= res->res.estimates.size()) return 0.0;
  return res->res.estimates[i].ci_lo;
}

double sic_result_estimate_ci_hi(const sic_result* res, size_t i) {
  if (!res || i >= res->res.estimates.size()) return 0.0;
  return res->res.estimates[i].ci_hi;
}

int64_t sic_result_estimate_reps(const sic_result* res, size_t i) {
  if (!res || i >= res->res.estimates.size()) return 0;
  return res->res.estimates[i].reps;
}

const char* sic_last_error(void) { return g_last_error.c_str(); }

const char* sic_version(void) {
  static const std::string v = sic::version_string();
  return v.c_str();
}

} // extern "C"
