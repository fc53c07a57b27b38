#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "sic.h"

namespace fs = std::filesystem;

namespace {

struct Cfg {
  sic_config* p = sic_config_new();
  ~Cfg() { sic_config_free(p); }
};

struct Res {
  sic_result* p = nullptr;
  ~Res() { sic_result_free(p); }
};

} // namespace

TEST_CASE("version and command list are exposed") {
  CHECK(std::strlen(sic_version()) > 0);
  std::string cmds = sic_commands();
  CHECK(cmds.find("simulate") != std::string::npos);
  CHECK(cmds.find("sweep") != std::string::npos);
  CHECK(cmds.find("pi") != std::string::npos);
}

TEST_CASE("a command runs end to end through the C interface") {
  Cfg cfg;
  REQUIRE(cfg.p != nullptr);
  CHECK(sic_config_set(cfg.p, "model.lambda", "1") == SIC_OK);
  CHECK(sic_config_set(cfg.p, "model.theta", "1") == SIC_OK);
  CHECK(sic_config_set(cfg.p, "model.dim", "2") == SIC_OK);

  Res res;
  CHECK(sic_run("pi", cfg.p, nullptr, &res.p) == SIC_OK);
  REQUIRE(res.p != nullptr);
  REQUIRE(sic_result_estimate_count(res.p) == 3);
  CHECK(std::string(sic_result_estimate_name(res.p, 0)) == "pi_plus");
  CHECK(sic_result_estimate_value(res.p, 0) == doctest::Approx(2.0 / 3.0));
  CHECK(sic_result_estimate_value(res.p, 1) == doctest::Approx(1.0 / 6.0));
  CHECK(sic_result_estimate_value(res.p, 2) == doctest::Approx(1.0 / 6.0));
  CHECK(sic_result_estimate_stderr(res.p, 0) == 0.0);
  CHECK(sic_result_estimate_ci_lo(res.p, 0) == sic_result_estimate_ci_hi(res.p, 0));

  std::string json = sic_result_json(res.p);
  CHECK(json.find("\"command\": \"pi\"") != std::string::npos);
  CHECK(json.find("pi_minus") != std::string::npos);
}

TEST_CASE("monte carlo estimates carry intervals and reps") {
  Cfg cfg;
  sic_config_set(cfg.p, "model.lambda", "0");
  sic_config_set(cfg.p, "model.alpha", "0");
  sic_config_set(cfg.p, "run.variant", "contact");
  sic_config_set(cfg.p, "init.kind", "single-one");
  sic_config_set(cfg.p, "run.horizon", "1");
  sic_config_set(cfg.p, "run.reps", "8000");
  sic_config_set(cfg.p, "box.halfwidth", "2");

  Res res;
  REQUIRE(sic_run("survival", cfg.p, nullptr, &res.p) == SIC_OK);
  REQUIRE(sic_result_estimate_count(res.p) == 1);
  double v = sic_result_estimate_value(res.p, 0);
  CHECK(std::abs(v - std::exp(-1.0)) < 0.02);
  CHECK(sic_result_estimate_ci_lo(res.p, 0) < v);
  CHECK(sic_result_estimate_ci_hi(res.p, 0) > v);
  CHECK(sic_result_estimate_reps(res.p, 0) == 8000);
}

TEST_CASE("failures set status codes and a readable message") {
  Cfg cfg;
  CHECK(sic_config_set(cfg.p, "model.lambada", "1") == SIC_ERR_USAGE);
  CHECK(std::strlen(sic_last_error()) > 0);

  Res r1;
  CHECK(sic_run("no-such-command", cfg.p, nullptr, &r1.p) == SIC_ERR_USAGE);
  CHECK(r1.p == nullptr);
  CHECK(std::string(sic_last_error()).find("no-such-command") != std::string::npos);

  sic_config_set(cfg.p, "model.lambda", "-1");
  Res r2;
  CHECK(sic_run("survival", cfg.p, nullptr, &r2.p) == SIC_ERR_DOMAIN);
  CHECK(r2.p == nullptr);

  CHECK(sic_run(nullptr, cfg.p, nullptr, &r2.p) == SIC_ERR_USAGE);
  CHECK(sic_config_set(nullptr, "model.lambda", "1") == SIC_ERR_USAGE);
  CHECK(sic_config_load_file(cfg.p, "/no/such/file.ini") == SIC_ERR_USAGE);

  // a successful call clears the sticky message
  Cfg good;
  sic_config_set(good.p, "model.lambda", "2");
  CHECK(std::strlen(sic_last_error()) == 0);
}

TEST_CASE("config files and environment flow through the C interface") {
  fs::path dir = fs::temp_directory_path() / "sic_capi_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  fs::path ini = dir / "cfg.ini";
  {
    std::ofstream out(ini);
    out << "[model]\nlambda = 2.5\n";
  }
  Cfg cfg;
  CHECK(sic_config_load_file(cfg.p, ini.string().c_str()) == SIC_OK);
  ::setenv("SIC_MODEL__THETA", "3", 1);
  CHECK(sic_config_load_env(cfg.p) == SIC_OK);
  ::unsetenv("SIC_MODEL__THETA");

  std::string canon = sic_config_canonical(cfg.p);
  CHECK(canon.find("model.lambda=2.5") != std::string::npos);
  CHECK(canon.find("model.theta=3") != std::string::npos);
  CHECK(std::strlen(sic_config_hash(cfg.p)) == 16);
}

TEST_CASE("output directories are written through the C interface") {
  fs::path dir = fs::temp_directory_path() / "sic_capi_out";
  fs::remove_all(dir);

  Cfg cfg;
  sic_config_set(cfg.p, "run.reps", "50");
  sic_config_set(cfg.p, "run.horizon", "2");
  sic_config_set(cfg.p, "box.halfwidth", "4");
  Res res;
  REQUIRE(sic_run("simulate", cfg.p, dir.string().c_str(), &res.p) == SIC_OK);
  CHECK(fs::exists(dir / "result.json"));
  CHECK(fs::exists(dir / "trajectory.csv"));
  CHECK(fs::exists(dir / "manifest.json"));
}
