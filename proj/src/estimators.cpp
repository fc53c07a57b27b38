#include "estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace sic {

PiTriple pi_equilibrium(double lambda, double theta, int dim) {
  if (lambda < 0.0) throw DomainError("pi_equilibrium: lambda must be nonnegative");
  if (theta <= 0.0) throw DomainError("pi_equilibrium: theta must be positive");
  if (dim != 1 && dim != 2) throw DomainError("pi_equilibrium: dim must be 1 or 2");
  double b = 2.0 * dim * lambda;
  double denom = 1.0 + theta + b * theta;
  return {b * theta / denom, theta / denom, 1.0 / denom};
}

double kill_per_try(double lambda, double m, int dim) {
  if (lambda < 0.0) throw DomainError("kill_per_try: lambda must be nonnegative");
  if (m < 0.0) throw DomainError("kill_per_try: m must be nonnegative");
  if (dim != 1 && dim != 2) throw DomainError("kill_per_try: dim must be 1 or 2");
  double q = (1.0 - std::exp(-1.0)) * std::exp(-2.0 * dim * lambda);
  return std::pow(q, m);
}

double gap_scale_m(double nu, double K) {
  if (nu <= 0.0 || nu >= 1.0) throw DomainError("gap_scale_m: nu must lie in (0,1)");
  if (K < 1.0) throw DomainError("gap_scale_m: K must be at least 1");
  return -std::log(4.0 * K * K) / std::log(1.0 - nu);
}

namespace {

// P(Poisson(mu) >= k), stable for tiny tails via the leading term in log space
double poisson_tail_ge(double mu, int k) {
  if (k <= 0) return 1.0;
  if (mu <= 0.0) return 0.0;
  if (mu >= (double)k) {
    // complement: sum the k lighter terms below the mode
    double log_term = -mu; // j = 0
    double sum = std::exp(log_term);
    for (int j = 1; j < k; ++j) {
      log_term += std::log(mu / (double)j);
      sum += std::exp(log_term);
    }
    return std::max(0.0, 1.0 - sum);
  }
  // leading term j = k, then a rapidly converging geometric-like tail
  double log_term = -mu + (double)k * std::log(mu) - std::lgamma((double)k + 1.0);
  double factor = 1.0, term = 1.0;
  for (int j = k + 1; j <= k + 400; ++j) {
    term *= mu / (double)j;
    factor += term;
    if (term < 1e-18 * factor) break;
  }
  return std::exp(log_term) * factor;
}

} // namespace

double erlang_cdf(int k, double rate, double t) {
  if (k < 1) throw DomainError("erlang_cdf: k must be at least 1");
  if (rate <= 0.0) throw DomainError("erlang_cdf: rate must be positive");
  if (t <= 0.0) return 0.0;
  return poisson_tail_ge(rate * t, k);
}

double erlang_rate(double c) {
  if (c <= 0.0) throw DomainError("erlang_rate: c must be positive");
  return c - 1.0 - std::log(c);
}

double solve_c0() {
  const double target = std::log(5.0);
  double lo = 1e-12, hi = 1.0; // rate decreases from +inf to 0 on (0,1]
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (erlang_rate(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

PhaseBounds phase_bounds(double K, double t0, double beta, double alpha,
                         double lambda, double theta, int dim, double chi_hat,
                         double delta, double c_K) {
  if (K < 1.0) throw DomainError("phase_bounds: K must be at least 1");
  if (t0 <= 0.0 || beta <= 0.0) throw DomainError("phase_bounds: t0 and beta must be positive");
  if (alpha <= 0.0) throw DomainError("phase_bounds: alpha must be positive");
  if (lambda < 0.0) throw DomainError("phase_bounds: lambda must be nonnegative");
  if (theta <= 0.0) throw DomainError("phase_bounds: theta must be positive");
  if (dim != 1 && dim != 2) throw DomainError("phase_bounds: dim must be 1 or 2");

  PhaseBounds out;
  out.dim = dim;
  out.pi = pi_equilibrium(lambda, theta, dim);
  out.rho = 1.0 / (1.0 + theta);
  const double tries = beta / alpha;

  if (dim == 1) {
    PhaseBoundsD1& b = out.d1;
    b.nu = 3.0 * out.pi.minus / 8.0;
    b.beta_ok = std::exp(-theta * beta) > 0.75;
    b.M_K = gap_scale_m(b.nu, K);
    b.gap_failure = 2.0 * K * std::pow(1.0 - b.nu, b.M_K);
    b.kill_M = kill_per_try(lambda, b.M_K, 1);
    b.fail_phase2 = b.gap_failure + 2.0 * K * std::pow(1.0 - b.kill_M, tries);
    b.success3 = 1.0 - 2.0 * std::exp(-2.0 * K * b.nu * theta * (t0 + beta));
    b.closed_bound = b.fail_phase2 + (1.0 - b.success3);
    return out;
  }

  if (chi_hat <= 0.0) {
    throw DomainError("phase_bounds: dim 2 needs a positive measured mean cluster size");
  }
  if (delta <= 0.0 || delta >= 1.0) {
    throw DomainError("phase_bounds: delta must lie in (0,1)");
  }
  if (K < 2.0) throw DomainError("phase_bounds: dim 2 needs K >= 2 (log K enters the bounds)");

  PhaseBoundsD2& b = out.d2;
  b.p_open = 1.0 - (1.0 - delta) * (1.0 - delta) * out.pi.minus;
  b.beta_ok = std::exp(-theta * beta) > 1.0 - delta;
  b.q_lambda = kill_per_try(lambda, 1.0, 2);
  b.n_K = 4.0 * (1.0 + delta) * chi_hat * chi_hat * std::log(K);
  b.r = -4.0 * (1.0 + delta) * chi_hat * chi_hat * std::log(b.q_lambda);
  b.r_ok = b.r < 1.0;
  b.prob_AK = 16.0 * K * K * 2.0 * std::exp(-b.n_K / (2.0 * chi_hat * chi_hat));
  const double kill = std::pow(K, -b.r);
  b.csurv = b.prob_AK + 16.0 * K * K * std::pow(1.0 - kill, tries);
  const double T = (t0 + beta) / alpha;
  b.c_K = c_K > 0.0 ? c_K : T / K;
  b.G2 = b.prob_AK +
         16.0 * K * K * std::pow(1.0 - kill, b.c_K * beta * K / (t0 + beta));
  b.c0 = solve_c0();
  b.cond1_ok = 2.0 * b.c_K <= b.c0 / std::max(lambda, 1e-300);
  b.erlang_2T = erlang_cdf((int)K, lambda > 0.0 ? lambda : 1e-300, 2.0 * b.c_K * K);
  b.path_union_bound = 16.0 * K * std::pow(4.0, K) * b.erlang_2T;
  b.G3 = 16.0 * K * std::pow(0.8, K);
  return out;
}

namespace {

constexpr uint64_t kSurvInitSalt = 0x737572765f696e69ULL;
constexpr uint64_t kSurvStreamSalt = 0x737572765f737472ULL;

// runs until t_max or extinction (absorbing in every variant); true if alive
bool run_survives(Variant v, const LatticeConfig& init, const EventStream& stream,
                  double t_max) {
  Simulator sim(v, init);
  if (sim.count_plus() == 0) return false;
  for (const Event& e : stream.events) {
    if (e.t > t_max) break;
    sim.apply(e);
    if (sim.count_plus() == 0) return false;
  }
  return true;
}

} // namespace

EstimateCI survival_prob(Variant v, const ModelParams& p, const Box& box,
                         const InitialSpec& init, double t_max, int64_t reps,
                         uint64_t seed, int jobs) {
  p.validate();
  box.validate();
  if (t_max <= 0.0) throw DomainError("survival_prob: t_max must be positive");
  if (reps <= 0) throw DomainError("survival_prob: reps must be positive");

  std::vector<uint8_t> alive((size_t)reps, 0);
  parallel_for(reps, jobs, [&](long long rep) {
    uint64_t rs = derive_seed(seed, (uint64_t)rep);
    LatticeConfig cfg = sample_initial(init, box, derive_seed(rs, kSurvInitSalt));
    if (cfg.counts()[0] == 0) return; // no 1's can ever appear
    EventStream stream =
        build_stream(p, box, t_max + 1e-9, derive_seed(rs, kSurvStreamSalt));
    alive[(size_t)rep] = run_survives(v, cfg, stream, t_max);
  });
  long long hits = std::accumulate(alive.begin(), alive.end(), 0LL);
  return wilson_ci(hits, reps, seed);
}

namespace {

// survival at `lambda` on per-replica master streams built at lambda_hi and
// thinned down: shared deaths and nested arrow sets across lambdas
double survival_thinned(Variant v, const ModelParams& base, double lambda,
                        const Box& box, const InitialSpec& init, double t_max,
                        int64_t reps, uint64_t seed, int jobs) {
  std::vector<uint8_t> alive((size_t)reps, 0);
  parallel_for(reps, jobs, [&](long long rep) {
    uint64_t rs = derive_seed(seed, (uint64_t)rep);
    LatticeConfig cfg = sample_initial(init, box, derive_seed(rs, kSurvInitSalt));
    if (cfg.counts()[0] == 0) return;
    EventStream master =
        build_stream(base, box, t_max + 1e-9, derive_seed(rs, kSurvStreamSalt));
    EventStream stream = thinned_arrows(master, lambda / base.lambda);
    alive[(size_t)rep] = run_survives(v, cfg, stream, t_max);
  });
  return (double)std::accumulate(alive.begin(), alive.end(), 0LL) / (double)reps;
}

} // namespace

CriticalResult critical_bisect(Variant v, double alpha, double theta, const Box& box,
                               double t_max, double target, double tol,
                               double lambda_lo, double lambda_hi, int64_t reps,
                               uint64_t seed, int jobs) {
  if (target <= 0.0 || target >= 1.0) {
    throw DomainError("critical_bisect: target must lie in (0,1)");
  }
  if (tol <= 0.0) throw DomainError("critical_bisect: tol must be positive");
  if (!(lambda_lo >= 0.0) || !(lambda_hi > lambda_lo)) {
    throw DomainError("critical_bisect: need 0 <= lambda_lo < lambda_hi");
  }
  if (reps <= 0) throw DomainError("critical_bisect: reps must be positive");
  box.validate();

  ModelParams base;
  base.lambda = lambda_hi;
  base.theta = theta;
  base.alpha = alpha;
  base.dim = box.dim;
  base.validate();

  InitialSpec init;
  init.kind = InitialSpec::Kind::SingleOneAtOrigin;

  CriticalResult out;
  auto eval = [&](double lam) {
    ++out.evals;
    return survival_thinned(v, base, lam, box, init, t_max, reps, seed, jobs);
  };

  std::vector<std::pair<double, double>> seen; // (lambda, survival)
  auto record = [&](double lam, double s) {
    for (const auto& q : seen) {
      if ((q.first < lam && q.second > s) || (q.first > lam && q.second < s)) {
        ++out.order_violations;
      }
    }
    seen.emplace_back(lam, s);
  };

  out.surv_lo = eval(lambda_lo);
  out.surv_hi = eval(lambda_hi);
  record(lambda_lo, out.surv_lo);
  record(lambda_hi, out.surv_hi);
  if (!(out.surv_lo < target && out.surv_hi > target)) {
    throw DomainError("critical_bisect: the lambda bracket does not straddle the target "
                      "survival probability");
  }

  double lo = lambda_lo, hi = lambda_hi;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    double s = eval(mid);
    record(mid, s);
    if (s >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.lo = lo;
  out.hi = hi;
  out.lambda_hat = 0.5 * (lo + hi);
  return out;
}

} // namespace sic
