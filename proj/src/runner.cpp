#include "runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "cptoolkit.hpp"
#include "duality.hpp"
#include "errors.hpp"
#include "estimators.hpp"
#include "parallel.hpp"
#include "percolation.hpp"
#include "process.hpp"
#include "renorm.hpp"
#include "rng.hpp"

namespace sic {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr uint64_t kCoupledSalt = 0x636f75706c65645fULL;

// ------------------------------------------------------------ config readers

ModelParams model_from(const RunConfig& c) {
  ModelParams m;
  m.lambda = c.get_double("model.lambda", 1.0);
  m.theta = c.get_double("model.theta", 1.0);
  m.alpha = c.get_double("model.alpha", 0.0);
  m.dim = (int)c.get_int("model.dim", 1);
  m.validate();
  return m;
}

Boundary boundary_from(const RunConfig& c) {
  std::string b = c.get_str("box.boundary", "vacant");
  if (b == "vacant" || b == "vacant-frozen") return Boundary::VacantFrozen;
  if (b == "periodic") return Boundary::Periodic;
  throw UsageError("box.boundary must be vacant or periodic, got: " + b);
}

Box box_from(const RunConfig& c, int dim) {
  Boundary b = boundary_from(c);
  if (c.has("box.x_lo") || c.has("box.x_hi")) {
    int32_t xlo = (int32_t)c.get_int("box.x_lo", -20);
    int32_t xhi = (int32_t)c.get_int("box.x_hi", 20);
    if (dim == 1) return make_box1(xlo, xhi, b);
    int32_t ylo = (int32_t)c.get_int("box.y_lo", xlo);
    int32_t yhi = (int32_t)c.get_int("box.y_hi", xhi);
    return make_box2(xlo, xhi, ylo, yhi, b);
  }
  int32_t h = (int32_t)c.get_int("box.halfwidth", 20);
  return make_centered_box(dim, h, b);
}

Variant variant_from(const RunConfig& c) {
  std::string v = c.get_str("run.variant", "sterile");
  if (v == "sterile") return Variant::Sterile;
  if (v == "remenik") return Variant::Remenik;
  if (v == "contact") return Variant::Contact;
  if (v == "twostate" || v == "two-state") return Variant::TwoStateEnv;
  throw UsageError("run.variant must be sterile, remenik, contact or twostate, got: " + v);
}

int32_t parse_coord(const std::string& tok) {
  size_t used = 0;
  long v = 0;
  try {
    v = std::stol(tok, &used);
  } catch (const std::exception&) {
    throw UsageError("malformed site coordinate: " + tok);
  }
  if (used != tok.size()) throw UsageError("malformed site coordinate: " + tok);
  return (int32_t)v;
}

// semicolon-separated sites, each "x" or "x:y"
std::vector<Site> parse_sites(const std::string& text) {
  std::vector<Site> out;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find(';', pos);
    if (end == std::string::npos) end = text.size();
    std::string tok = text.substr(pos, end - pos);
    pos = end + 1;
    if (tok.empty()) continue;
    size_t colon = tok.find(':');
    Site s{0, 0};
    if (colon == std::string::npos) {
      s.x = parse_coord(tok);
    } else {
      s.x = parse_coord(tok.substr(0, colon));
      s.y = parse_coord(tok.substr(colon + 1));
    }
    out.push_back(s);
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    std::string tok = text.substr(pos, end - pos);
    pos = end + 1;
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw UsageError("malformed number list entry: " + tok);
    }
  }
  return out;
}

InitialSpec init_from(const RunConfig& c) {
  InitialSpec spec;
  std::string kind = c.get_str("init.kind", "all-one");
  if (kind == "all-one") {
    spec.kind = InitialSpec::Kind::AllOne;
  } else if (kind == "single-one") {
    spec.kind = InitialSpec::Kind::SingleOneAtOrigin;
  } else if (kind == "product") {
    spec.kind = InitialSpec::Kind::Product;
    spec.p1 = c.get_double("init.p1", 0.0);
    spec.p0 = c.get_double("init.p0", 0.0);
    spec.pm1 = c.get_double("init.pm1", 0.0);
  } else if (kind == "nu-c") {
    spec.kind = InitialSpec::Kind::NuC;
    spec.theta = c.get_double("init.theta", 1.0);
    spec.C = parse_sites(c.get_str("init.sites", "0"));
  } else if (kind == "mu-rho") {
    spec.kind = InitialSpec::Kind::MuRho;
    spec.theta = c.get_double("init.theta", 1.0);
  } else {
    throw UsageError("init.kind must be all-one, single-one, product, nu-c or mu-rho, got: " +
                     kind);
  }
  return spec;
}

Adjacency adjacency_from(const RunConfig& c, Adjacency dflt) {
  std::string a = c.get_str("perc.adjacency", "");
  if (a.empty()) return dflt;
  if (a == "z" || a == "z-nearest") return Adjacency::ZNearest;
  if (a == "lstar" || a == "l-star") return Adjacency::LStar;
  throw UsageError("perc.adjacency must be z or lstar, got: " + a);
}

struct Common {
  int64_t reps;
  uint64_t seed;
  int jobs;
  double horizon;
};

Common common_from(const RunConfig& c) {
  Common k;
  k.reps = c.get_int("run.reps", 1000);
  k.seed = c.get_u64("run.seed", 1);
  k.jobs = (int)c.get_int("run.jobs", 1);
  k.horizon = c.get_double("run.horizon", 10.0);
  if (k.reps < 1) throw UsageError("run.reps must be >= 1");
  if (k.jobs < 1) throw UsageError("run.jobs must be >= 1");
  return k;
}

// ------------------------------------------------------------- row builders

EstimateRow row_ci(const std::string& name, const EstimateCI& e) {
  return EstimateRow{name, e.value, e.se, e.lo, e.hi, e.reps};
}

EstimateRow row_exact(const std::string& name, double v, int64_t reps = 0) {
  return EstimateRow{name, v, 0.0, v, v, reps};
}

int32_t auto_halfwidth(double lambda, double t_max) {
  return (int32_t)std::llround(2.2 * lambda * t_max + 8.0 * std::sqrt(t_max) + 50.0);
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw DomainError("cannot write output file: " + p.string());
  out << text;
}

// ------------------------------------------------------------ the commands

struct CommandOutput {
  std::vector<EstimateRow> rows;
  std::vector<std::pair<std::string, std::string>> csvs; // filename -> content
};

CommandOutput cmd_pi(const RunConfig& cfg) {
  ModelParams m = model_from(cfg);
  PiTriple pi = pi_equilibrium(m.lambda, m.theta, m.dim);
  CommandOutput out;
  out.rows = {row_exact("pi_plus", pi.plus), row_exact("pi_zero", pi.zero),
              row_exact("pi_minus", pi.minus)};
  return out;
}

CommandOutput cmd_simulate(const RunConfig& cfg) {
  ModelParams m = model_from(cfg);
  Common k = common_from(cfg);
  Box box = box_from(cfg, m.dim);
  Variant v = variant_from(cfg);
  InitialSpec init = init_from(cfg);

  EstimateCI surv = survival_prob(v, m, box, init, k.horizon, k.reps, k.seed, k.jobs);

  // one replica's trajectory for inspection
  int64_t n_samples = cfg.get_int("run.samples", 50);
  if (n_samples < 1) throw UsageError("run.samples must be >= 1");
  std::vector<double> times;
  for (int64_t i = 1; i <= n_samples; ++i)
    times.push_back(k.horizon * (double)i / (double)n_samples);
  LatticeConfig c0 = sample_initial(init, box, derive_seed(k.seed, 0));
  EventStream s = build_stream(m, box, k.horizon, derive_seed(k.seed ^ 0x73696d5f74726aULL, 0));
  Trajectory tr = evolve(v, c0, s, times);

  CommandOutput out;
  out.rows = {row_ci("survival", surv)};
  out.csvs.emplace_back("trajectory.csv", trajectory_csv(tr));
  return out;
}

CommandOutput cmd_coupled(const RunConfig& cfg) {
  ModelParams m = model_from(cfg);
  Common k = common_from(cfg);
  Box box = box_from(cfg, m.dim);
  InitialSpec init = init_from(cfg);
  int64_t n_samples = cfg.get_int("run.samples", 20);
  if (n_samples < 1) throw UsageError("run.samples must be >= 1");
  std::vector<double> times;
  for (int64_t i = 1; i <= n_samples; ++i)
    times.push_back(k.horizon * (double)i / (double)n_samples);

  std::vector<long long> viol((size_t)k.reps, 0);
  parallel_for(k.reps, k.jobs, [&](long long r) {
    LatticeConfig c0 = sample_initial(init, box, derive_seed(k.seed, (uint64_t)r));
    // the contact copy lives on {0,1}: project -1's up to 0 (preserves order)
    LatticeConfig zeta0 = c0;
    for (int8_t& s : zeta0.s)
      if (s < 0) s = 0;
    EventStream s =
        build_stream(m, box, k.horizon, derive_seed(k.seed ^ kCoupledSalt, (uint64_t)r));
    std::vector<std::pair<Variant, LatticeConfig>> runs = {
        {Variant::Remenik, c0}, {Variant::Sterile, c0}, {Variant::Contact, zeta0}};
    CoupledResult res = coupled_evolve(runs, s, times, {{0, 1}, {1, 2}});
    viol[(size_t)r] = res.violations;
  });
  long long total = 0;
  for (long long v : viol) total += v;

  CommandOutput out;
  out.rows = {row_exact("sandwich_violations", (double)total, k.reps),
              row_exact("sample_times", (double)n_samples)};
  return out;
}

CommandOutput cmd_duality_check(const RunConfig& cfg) {
  ModelParams m = model_from(cfg);
  Common k = common_from(cfg);
  Box box = box_from(cfg, m.dim);
  double t = cfg.get_double("dual.t", 2.0);
  std::vector<Site> A = parse_sites(cfg.get_str("dual.a", "0"));
  std::vector<Site> C = parse_sites(cfg.get_str("dual.c", "0"));
  std::vector<Site> D = parse_sites(cfg.get_str("dual.d", "1"));

  PathwiseCheck pw = pathwise_duality_check(A, C, D, t, m, box, k.reps, k.seed);
  DualityCheck dc = duality_check(A, C, D, t, m, box, k.reps, k.seed, k.jobs);

  CommandOutput out;
  out.rows = {row_exact("pathwise_failures", (double)pw.failures, k.reps),
              row_exact("env_mismatches", (double)pw.env_mismatches, k.reps),
              row_exact("pathwise_hits", (double)pw.hits, k.reps),
              row_ci("lhs", dc.lhs),
              row_ci("rhs", dc.rhs),
              row_exact("z_score", dc.z)};
  return out;
}

CommandOutput cmd_crossings(const RunConfig& cfg) {
  Common k = common_from(cfg);
  double p = cfg.get_double("perc.p", 0.7);
  int N = (int)cfg.get_int("perc.n", 99);
  double eta = cfg.get_double("perc.eta", 0.5);
  Adjacency adj = adjacency_from(cfg, Adjacency::LStar);
  EstimateCI r = four_crossings_prob(p, N, eta, k.reps, k.seed, adj, k.jobs);
  CommandOutput out;
  out.rows = {row_ci("p_four_crossings", r)};
  return out;
}

CommandOutput cmd_cluster_tail(const RunConfig& cfg) {
  Common k = common_from(cfg);
  double p = cfg.get_double("perc.p", 0.3);
  Adjacency adj = adjacency_from(cfg, Adjacency::ZNearest);
  int32_t h = (int32_t)cfg.get_int("box.halfwidth", 64);
  int64_t cap = cfg.get_int("perc.size_cap", 0);
  Box box = make_centered_box(2, h);
  ClusterStats st = cluster_stats(p, box, adj, k.reps, k.seed, cap, k.jobs);

  CommandOutput out;
  out.rows = {row_ci("chi", st.chi), row_exact("gamma_hat", st.gamma_hat),
              row_exact("r2", st.r2), row_exact("boundary_frac", st.boundary_frac),
              row_exact("boundary_warning", st.boundary_warning ? 1.0 : 0.0)};
  std::string csv = "n,log_p_geq_n\n";
  for (size_t i = 0; i < st.tail_n.size(); ++i) {
    csv += std::to_string(st.tail_n[i]) + "," + std::to_string(st.tail_logp[i]) + "\n";
  }
  out.csvs.emplace_back("cluster_tail.csv", csv);
  return out;
}

CommandOutput cmd_threshold(const RunConfig& cfg) {
  Common k = common_from(cfg);
  int N = (int)cfg.get_int("perc.n", 64);
  double target = cfg.get_double("perc.target", 0.5);
  double tol = cfg.get_double("perc.tol", 1e-3);
  Adjacency adj = adjacency_from(cfg, Adjacency::ZNearest);
  ThresholdResult r = threshold_bisect(adj, N, target, tol, k.reps, k.seed, k.jobs);
  CommandOutput out;
  out.rows = {EstimateRow{"p_hat", r.p_hat, 0.0, r.lo, r.hi, r.reps_per_eval},
              row_exact("evals", (double)r.evals)};
  return out;
}

CommandOutput cmd_solve_p0(const RunConfig& cfg) {
  ModelParams m = model_from(cfg);
  Common k = common_from(cfg);
  double tol = cfg.get_double("perc.tol", 1e-3);
  int64_t budget = cfg.get_int("perc.chi_budget", 4000);
  P0Result r = solve_p0(m.lambda, tol, budget, k.seed);
  CommandOutput out;
  out.rows = {row_exact("p0", r.p0), row_exact("chi_star", r.chi_star),
              row_exact("q_lambda", r.q_lambda), row_exact("chi_at_p0", r.chi_at_p0),
              row_exact("iterations", (double)r.iterations)};
  return out;
}

CommandOutput cmd_edge_speed(const RunConfig& cfg) {
  ModelParams m = model_from(cfg);
  Common k = common_from(cfg);
  double t_max = cfg.get_double("cp.t_max", 50.0);
  int32_t h = (int32_t)cfg.get_int("cp.halfwidth", 0);
  if (h <= 0) h = auto_halfwidth(m.lambda, t_max);
  EdgeSpeedResult r = edge_speed(m.lambda, t_max, h, k.reps, k.seed, k.jobs);
  CommandOutput out;
  out.rows = {row_ci("v_hat", r.v_hat), row_exact("surviving", (double)r.surviving),
              row_exact("extinct", (double)r.extinct),
              row_exact("wall_frac", r.wall_frac)};
  return out;
}

CommandOutput cmd_edge_tail(const RunConfig& cfg) {
  ModelParams m = model_from(cfg);
  Common k = common_from(cfg);
  double a = cfg.get_double("cp.a", 0.2);
  double b = cfg.get_double("cp.b", 3.0);
  std::vector<double> ts = parse_doubles(cfg.get_str("cp.times", "5,10,15,20"));
  double t_max = ts.empty() ? 0.0 : *std::max_element(ts.begin(), ts.end());
  int32_t h = (int32_t)cfg.get_int("cp.halfwidth", 0);
  if (h <= 0) h = auto_halfwidth(m.lambda, t_max);
  EdgeTailResult r = edge_tail(m.lambda, a, b, ts, h, k.reps, k.seed, k.jobs);

  CommandOutput out;
  out.rows = {row_exact("gamma0_hat", r.gamma0_hat), row_exact("gamma1_hat", r.gamma1_hat),
              row_exact("r2_low", r.r2_low), row_exact("r2_high", r.r2_high),
              row_exact("wall_hits", (double)r.wall_hits)};
  std::string csv = "t,p_low,p_low_lo,p_low_hi,p_high,p_high_lo,p_high_hi\n";
  for (size_t i = 0; i < r.ts.size(); ++i) {
    csv += std::to_string(r.ts[i]) + "," + std::to_string(r.p_low[i].value) + "," +
           std::to_string(r.p_low[i].lo) + "," + std::to_string(r.p_low[i].hi) + "," +
           std::to_string(r.p_high[i].value) + "," + std::to_string(r.p_high[i].lo) +
           "," + std::to_string(r.p_high[i].hi) + "\n";
  }
  out.csvs.emplace_back("edge_tail.csv", csv);
  return out;
}

CommandOutput cmd_finite_survival(const RunConfig& cfg) {
  ModelParams m = model_from(cfg);
  Common k = common_from(cfg);
  double t_max = cfg.get_double("cp.t_max", 20.0);
  std::vector<Site> sites = parse_sites(cfg.get_str("cp.sites", "0"));
  std::vector<int32_t> A;
  for (const Site& s : sites) A.push_back(s.x);
  EstimateCI r = finite_set_survival(m.lambda, A, t_max, k.reps, k.seed, k.jobs);
  CommandOutput out;
  out.rows = {row_ci("survival", r)};
  return out;
}

CommandOutput cmd_eps_good(const RunConfig& cfg) {
  ModelParams m = model_from(cfg);
  Common k = common_from(cfg);
  double eps = cfg.get_double("cp.epsilon", 0.1);
  int32_t N = (int32_t)cfg.get_int("cp.n", 10);
  int64_t l = cfg.get_int("cp.l", 2 * (int64_t)N);
  double t_max = cfg.get_double("cp.t_max", 0.0);
  if (l < 0) throw UsageError("cp.l must be >= 0");
  std::vector<int8_t> config((size_t)l + 1, 1); // dense reference configuration
  EpsGoodResult r = epsilon_good(config, eps, N, m.lambda, t_max, k.reps, k.seed, k.jobs);
  CommandOutput out;
  out.rows = {row_ci("survival", r.survival), row_exact("t_max_used", r.t_max_used),
              row_exact("kept_ones", (double)r.kept_ones)};
  return out;
}

CommandOutput cmd_gamma_path(const RunConfig& cfg) {
  ModelParams m = model_from(cfg);
  Common k = common_from(cfg);
  double L = cfg.get_double("cp.l", 20.0);
  double delta = cfg.get_double("cp.delta", 0.5);
  double v = cfg.get_double("cp.v", 0.5);
  ParallelogramResult r = parallelogram_open(m.lambda, L, delta, v, k.reps, k.seed, k.jobs);
  CommandOutput out;
  out.rows = {row_ci("p_open", r.prob), row_exact("t_l", r.t_L),
              row_exact("audit_checked", (double)r.audit_checked),
              row_exact("audit_failures", (double)r.audit_failures)};
  return out;
}

CommandOutput cmd_block_d1(const RunConfig& cfg) {
  ModelParams m = model_from(cfg);
  m.dim = 1; // implied by the command
  Common k = common_from(cfg);
  int64_t K = cfg.get_int("block.k", 4);
  double t0 = cfg.get_double("block.t0", 2.0);
  double beta = cfg.get_double("block.beta", 2.0);
  double alpha_T = cfg.get_double("block.alpha", m.alpha);
  BlockResult r = block_good_d1(K, t0, beta, alpha_T, m, k.reps, k.seed, k.jobs);
  CommandOutput out;
  out.rows = {row_ci("p_good", r.p_good), row_exact("T", r.T),
              row_exact("K", (double)r.K),
              row_exact("early_extinct", (double)r.early_extinct, k.reps)};
  return out;
}

CommandOutput cmd_block_d2(const RunConfig& cfg) {
  ModelParams m = model_from(cfg);
  m.dim = 2; // implied by the command
  Common k = common_from(cfg);
  int64_t K = cfg.get_int("block.k", 0);
  double cT = cfg.get_double("block.ct", 0.2);
  double cK = cfg.get_double("block.ck", 0.03);
  BlockResult r = block_good_d2(K, cT, cK, m, k.reps, k.seed, k.jobs);
  CommandOutput out;
  out.rows = {row_ci("p_good", r.p_good), row_exact("T", r.T),
              row_exact("K", (double)r.K),
              row_exact("early_extinct", (double)r.early_extinct, k.reps)};
  return out;
}

CommandOutput cmd_ne_open(const RunConfig& cfg) {
  ModelParams m = model_from(cfg);
  m.dim = 2; // implied by the command
  Common k = common_from(cfg);
  int64_t N = cfg.get_int("ne.n", 63);
  double eta = cfg.get_double("ne.eta", 0.5);
  double eps0 = cfg.get_double("ne.eps0", 0.05);
  InitialSpec init = init_from(cfg);
  NEOpenResult r = ne_site_open(N, eta, eps0, m, init, k.reps, k.seed, k.jobs);
  CommandOutput out;
  out.rows = {row_ci("p_open", r.p_open), row_ci("open_site_frac", r.open_site_frac),
              row_exact("p0_hat", r.p0_hat), row_exact("T", r.T),
              row_exact("margin_ok", r.margin_ok ? 1.0 : 0.0)};
  return out;
}

CommandOutput cmd_op_wet(const RunConfig& cfg) {
  Common k = common_from(cfg);
  double p = cfg.get_double("op.p", 0.9);
  int64_t levels = cfg.get_int("op.levels", 1000);
  int64_t init_h = cfg.get_int("op.init_halfwidth", 0);
  std::string lat = cfg.get_str("op.lattice", "diag");
  OPLattice lattice;
  if (lat == "diag" || lat == "diag1d") {
    lattice = OPLattice::Diag1D;
  } else if (lat == "ne3d" || lat == "ne") {
    lattice = OPLattice::NE3D;
  } else {
    throw UsageError("op.lattice must be diag or ne3d, got: " + lat);
  }

  OPSurvival surv = op_survival(p, levels, lattice, k.reps, k.seed, k.jobs);
  OPRun run = op_run(p, levels, lattice, derive_seed(k.seed, 0), init_h);

  CommandOutput out;
  out.rows = {row_ci("survival", surv.survival), row_exact("v_hat_mean", surv.v_hat_mean),
              row_exact("surviving", (double)surv.surviving, k.reps),
              row_exact("first_run_survived", run.survived ? 1.0 : 0.0)};
  std::string csv = "level,count,l,r\n";
  for (size_t j = 0; j < run.levels.size(); ++j) {
    csv += std::to_string(j) + "," + std::to_string(run.levels[j].count) + "," +
           std::to_string(run.levels[j].l) + "," + std::to_string(run.levels[j].r) + "\n";
  }
  out.csvs.emplace_back("op_levels.csv", csv);
  return out;
}

CommandOutput cmd_stc(const RunConfig& cfg) {
  ModelParams m = model_from(cfg);
  Common k = common_from(cfg);
  int64_t n = cfg.get_int("stc.n", 2);
  int64_t L = cfg.get_int("stc.l", 12);
  double T = cfg.get_double("stc.t", 80.0);
  STCResult r = space_time_condition(n, L, T, m, k.reps, k.seed, k.jobs);
  CommandOutput out;
  out.rows = {row_ci("p1", r.p1), row_ci("p2", r.p2),
              row_exact("box_halfwidth", (double)r.box_halfwidth)};
  return out;
}

CommandOutput cmd_survival(const RunConfig& cfg) {
  ModelParams m = model_from(cfg);
  Common k = common_from(cfg);
  Box box = box_from(cfg, m.dim);
  Variant v = variant_from(cfg);
  InitialSpec init = init_from(cfg);
  EstimateCI r = survival_prob(v, m, box, init, k.horizon, k.reps, k.seed, k.jobs);
  CommandOutput out;
  out.rows = {row_ci("survival", r)};
  return out;
}

CommandOutput cmd_critical(const RunConfig& cfg) {
  ModelParams m = model_from(cfg);
  Common k = common_from(cfg);
  Box box = box_from(cfg, m.dim);
  Variant v = variant_from(cfg);
  double t_max = cfg.get_double("crit.t_max", 25.0);
  double target = cfg.get_double("crit.target", 0.5);
  double tol = cfg.get_double("crit.tol", 0.1);
  double lo = cfg.get_double("crit.lambda_lo", 1.0);
  double hi = cfg.get_double("crit.lambda_hi", 3.0);
  CriticalResult r =
      critical_bisect(v, m.alpha, m.theta, box, t_max, target, tol, lo, hi, k.reps,
                      k.seed, k.jobs);
  CommandOutput out;
  out.rows = {EstimateRow{"lambda_hat", r.lambda_hat, 0.0, r.lo, r.hi, k.reps},
              row_exact("evals", (double)r.evals),
              row_exact("order_violations", (double)r.order_violations),
              row_exact("surv_lo", r.surv_lo), row_exact("surv_hi", r.surv_hi)};
  return out;
}

CommandOutput cmd_bounds(const RunConfig& cfg) {
  ModelParams m = model_from(cfg);
  double K = cfg.get_double("bound.k", 4.0);
  double t0 = cfg.get_double("bound.t0", 2.0);
  double beta = cfg.get_double("bound.beta", 2.0);
  double chi = cfg.get_double("bound.chi", 0.0);
  double delta = cfg.get_double("bound.delta", 0.1);
  double cK = cfg.get_double("bound.ck", 0.0);
  PhaseBounds b = phase_bounds(K, t0, beta, m.alpha, m.lambda, m.theta, m.dim, chi,
                               delta, cK);
  CommandOutput out;
  out.rows.push_back(row_exact("pi_minus", b.pi.minus));
  out.rows.push_back(row_exact("rho", b.rho));
  if (b.dim == 1) {
    out.rows.push_back(row_exact("nu", b.d1.nu));
    out.rows.push_back(row_exact("m_k", b.d1.M_K));
    out.rows.push_back(row_exact("gap_failure", b.d1.gap_failure));
    out.rows.push_back(row_exact("kill_m", b.d1.kill_M));
    out.rows.push_back(row_exact("fail_phase2", b.d1.fail_phase2));
    out.rows.push_back(row_exact("success3", b.d1.success3));
    out.rows.push_back(row_exact("closed_bound", b.d1.closed_bound));
    out.rows.push_back(row_exact("beta_ok", b.d1.beta_ok ? 1.0 : 0.0));
  } else {
    out.rows.push_back(row_exact("p_open", b.d2.p_open));
    out.rows.push_back(row_exact("q_lambda", b.d2.q_lambda));
    out.rows.push_back(row_exact("n_k", b.d2.n_K));
    out.rows.push_back(row_exact("r", b.d2.r));
    out.rows.push_back(row_exact("prob_ak", b.d2.prob_AK));
    out.rows.push_back(row_exact("csurv", b.d2.csurv));
    out.rows.push_back(row_exact("g2", b.d2.G2));
    out.rows.push_back(row_exact("c0", b.d2.c0));
    out.rows.push_back(row_exact("c_k", b.d2.c_K));
    out.rows.push_back(row_exact("erlang_2t", b.d2.erlang_2T));
    out.rows.push_back(row_exact("path_union_bound", b.d2.path_union_bound));
    out.rows.push_back(row_exact("g3", b.d2.G3));
    out.rows.push_back(row_exact("beta_ok", b.d2.beta_ok ? 1.0 : 0.0));
    out.rows.push_back(row_exact("r_ok", b.d2.r_ok ? 1.0 : 0.0));
    out.rows.push_back(row_exact("cond1_ok", b.d2.cond1_ok ? 1.0 : 0.0));
  }
  return out;
}

CommandOutput run_single(const std::string& command, const RunConfig& cfg);

CommandOutput cmd_sweep(const RunConfig& cfg) {
  std::string sub = cfg.get_str("sweep.command", "");
  std::string param = cfg.get_str("sweep.param", "");
  std::string values = cfg.get_str("sweep.values", "");
  if (sub.empty() || sub == "sweep")
    throw UsageError("sweep.command must name a non-sweep command");
  if (!RunConfig::is_known_key(param))
    throw UsageError("sweep.param is not a config key: " + param);
  if (values.empty()) throw UsageError("sweep.values must list at least one value");
  if (!cfg.has("sweep.budget"))
    throw UsageError("sweep.budget (total replica budget) must be declared");
  int64_t budget = cfg.get_int("sweep.budget", 0);

  std::vector<std::string> grid;
  size_t pos = 0;
  while (pos <= values.size()) {
    size_t end = values.find(',', pos);
    if (end == std::string::npos) end = values.size();
    std::string tok = values.substr(pos, end - pos);
    if (!tok.empty()) grid.push_back(tok);
    pos = end + 1;
  }
  if (grid.empty()) throw UsageError("sweep.values must list at least one value");

  int64_t reps = cfg.get_int("run.reps", 1000);
  int64_t cost = reps * (int64_t)grid.size();
  if (cost > budget) {
    throw UsageError("sweep refused: estimated cost " + std::to_string(cost) +
                     " replicas (" + std::to_string(grid.size()) + " grid points x " +
                     std::to_string(reps) + " reps) exceeds declared budget " +
                     std::to_string(budget));
  }

  uint64_t base_seed = cfg.get_u64("run.seed", 1);
  CommandOutput out;
  std::string csv = param + ",estimate,value,stderr,ci_lo,ci_hi,reps,seed\n";
  for (size_t i = 0; i < grid.size(); ++i) {
    RunConfig point = cfg;
    point.set(param, grid[i]);
    uint64_t row_seed = derive_seed(base_seed, (uint64_t)i);
    point.set("run.seed", std::to_string(row_seed));
    CommandOutput res = run_single(sub, point);
    for (const EstimateRow& row : res.rows) {
      csv += grid[i] + "," + row.name + "," + std::to_string(row.value) + "," +
             std::to_string(row.stderr_val) + "," + std::to_string(row.ci_lo) + "," +
             std::to_string(row.ci_hi) + "," + std::to_string(row.reps) + "," +
             std::to_string(row_seed) + "\n";
      EstimateRow labeled = row;
      labeled.name = row.name + "@" + param + "=" + grid[i];
      out.rows.push_back(labeled);
    }
  }
  out.csvs.emplace_back("sweep.csv", csv);
  return out;
}

const std::vector<std::string> kCommands = {
    "simulate",  "coupled",  "duality-check", "crossings", "cluster-tail",
    "threshold", "solve-p0", "edge-speed",    "edge-tail", "finite-survival",
    "eps-good",  "gamma-path", "block-d1",    "block-d2",  "ne-open",
    "op-wet",    "stc",      "survival",      "critical",  "bounds",
    "pi",        "sweep"};

CommandOutput run_single(const std::string& command, const RunConfig& cfg) {
  if (command == "pi") return cmd_pi(cfg);
  if (command == "simulate") return cmd_simulate(cfg);
  if (command == "coupled") return cmd_coupled(cfg);
  if (command == "duality-check") return cmd_duality_check(cfg);
  if (command == "crossings") return cmd_crossings(cfg);
  if (command == "cluster-tail") return cmd_cluster_tail(cfg);
  if (command == "threshold") return cmd_threshold(cfg);
  if (command == "solve-p0") return cmd_solve_p0(cfg);
  if (command == "edge-speed") return cmd_edge_speed(cfg);
  if (command == "edge-tail") return cmd_edge_tail(cfg);
  if (command == "finite-survival") return cmd_finite_survival(cfg);
  if (command == "eps-good") return cmd_eps_good(cfg);
  if (command == "gamma-path") return cmd_gamma_path(cfg);
  if (command == "block-d1") return cmd_block_d1(cfg);
  if (command == "block-d2") return cmd_block_d2(cfg);
  if (command == "ne-open") return cmd_ne_open(cfg);
  if (command == "op-wet") return cmd_op_wet(cfg);
  if (command == "stc") return cmd_stc(cfg);
  if (command == "survival") return cmd_survival(cfg);
  if (command == "critical") return cmd_critical(cfg);
  if (command == "bounds") return cmd_bounds(cfg);
  if (command == "sweep") return cmd_sweep(cfg);
  throw UsageError("unknown command: " + command);
}

ordered_json result_to_json(const RunResult& r) {
  ordered_json j;
  j["command"] = r.command;
  j["config_hash"] = r.config_hash;
  j["seed"] = r.seed;
  ordered_json rows = ordered_json::array();
  for (const EstimateRow& e : r.estimates) {
    ordered_json row;
    row["name"] = e.name;
    row["value"] = e.value;
    row["stderr"] = e.stderr_val;
    row["ci_lo"] = e.ci_lo;
    row["ci_hi"] = e.ci_hi;
    row["reps"] = e.reps;
    rows.push_back(row);
  }
  j["estimates"] = rows;
  j["runtime_s"] = r.runtime_s;
  return j;
}

} // namespace

const std::vector<std::string>& command_names() { return kCommands; }

std::string version_string() { return "0.1.0"; }

std::string RunResult::json() const { return result_to_json(*this).dump(2) + "\n"; }

RunResult run_command(const std::string& command, const RunConfig& cfg,
                      const std::string& out_dir) {
  auto t0 = std::chrono::steady_clock::now();
  CommandOutput res = run_single(command, cfg);

  RunResult r;
  r.command = command;
  r.config_hash = cfg.hash_hex();
  r.seed = cfg.get_u64("run.seed", 1);
  r.estimates = std::move(res.rows);
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!out_dir.empty()) {
    std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw DomainError("cannot create output directory: " + out_dir);

    r.files.push_back("result.json");
    for (const auto& [name, content] : res.csvs) {
      write_text(dir / name, content);
      r.files.push_back(name);
    }
    write_text(dir / "result.json", r.json());

    ordered_json manifest;
    manifest["config_hash"] = r.config_hash;
    manifest["seed"] = r.seed;
    manifest["version"] = version_string();
    manifest["files"] = r.files;
    manifest["runtime_s"] = r.runtime_s;
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  }
  return r;
}

} // namespace sic
