#pragma once
// Closed-form bound evaluators for the small-alpha extinction construction
// (single-site comparison equilibrium, wall/gap bounds, kill probabilities,
// Erlang reintroduction bounds) plus Monte Carlo survival estimation and a
// common-random-number bisection for the survival threshold in lambda.

#include <cstdint>

#include "events.hpp"
#include "process.hpp"
#include "stats.hpp"

namespace sic {

struct PiTriple {
  double plus = 0, zero = 0, minus = 0;
};

// Equilibrium of the independent-site comparison chain: 0 -> 1 at rate
// 2*dim*lambda, 1 -> 0 at rate 1, 0 -> -1 at rate alpha, -1 -> 0 at rate
// theta*alpha (the alphas cancel in equilibrium).
PiTriple pi_equilibrium(double lambda, double theta, int dim);

// probability that m tagged sites all die and stay empty for a unit of time:
// ((1 - 1/e) * exp(-2*dim*lambda))^m
double kill_per_try(double lambda, double m, int dim);

// gap length at which a run of non-wall sites has probability 1/(4K^2):
// -log(4K^2) / log(1-nu)
double gap_scale_m(double nu, double K);

// P(S_k <= t) for S_k a sum of k rate-`rate` exponentials (exact)
double erlang_cdf(int k, double rate, double t);
// large-deviation rate c - 1 - log c for P(S_K <= c K / lambda)
double erlang_rate(double c);
// the c in (0,1) with erlang_rate(c) = log 5
double solve_c0();

struct PhaseBoundsD1 {
  double nu = 0;             // persistent-wall density 3*pi(-1)/8
  double M_K = 0;            // gap scale
  double gap_failure = 0;    // 2K (1-nu)^M  (= 1/(2K) by construction)
  double kill_M = 0;         // kill_per_try at m = M_K
  double fail_phase2 = 0;    // gap_failure + 2K (1 - kill_M)^(beta/alpha)
  double success3 = 0;       // 1 - 2 exp(-2 K nu theta (t0 + beta))
  double closed_bound = 0;   // fail_phase2 + (1 - success3)
  bool beta_ok = false;      // exp(-theta*beta) > 3/4
};

struct PhaseBoundsD2 {
  double p_open = 0;       // 1 - (1-delta)^2 pi(-1): holes in the persistent -1 sea
  double q_lambda = 0;     // single-site kill probability per unit time
  double n_K = 0;          // hole-size scale 4 (1+delta) chi^2 log K
  double r = 0;            // q_lambda^{n(K)} = K^{-r}
  double prob_AK = 0;      // 32 K^2 exp(-n(K) / (2 chi^2))
  double csurv = 0;        // prob_AK + 16 K^2 (1 - K^{-r})^(beta/alpha)
  double G2 = 0;           // same with exponent c_K beta K/(t0+beta)
  double c0 = 0;           // erlang_rate(c0) = log 5
  double c_K = 0;          // block aspect ratio actually used
  double erlang_2T = 0;    // P(S_K <= 2T)
  double path_union_bound = 0; // 16 K 4^K P(S_K <= 2T): union over block paths
  double G3 = 0;           // 16 K (4/5)^K
  bool beta_ok = false;    // exp(-theta*beta) > 1 - delta
  bool r_ok = false;       // r < 1
  bool cond1_ok = false;   // 2 c_K <= c0 / lambda
};

struct PhaseBounds {
  int dim = 1;
  PiTriple pi;
  double rho = 0; // 1/(1+theta)
  PhaseBoundsD1 d1;
  PhaseBoundsD2 d2;
};

// Evaluates every closed-form display of the three-phase construction at the
// given parameters. chi_hat (measured mean cluster size at the hole density)
// is required when dim == 2. c_K <= 0 derives the aspect ratio from
// T = (t0+beta)/alpha and K. Throws DomainError when a log argument or
// parameter leaves the valid range.
PhaseBounds phase_bounds(double K, double t0, double beta, double alpha,
                         double lambda, double theta, int dim, double chi_hat = 0,
                         double delta = 0.1, double c_K = 0);

// Fraction of runs with at least one 1 at t_max (Wilson interval). Extinction
// is absorbing for every variant, so runs stop early at zero 1's.
EstimateCI survival_prob(Variant v, const ModelParams& p, const Box& box,
                         const InitialSpec& init, double t_max, int64_t reps,
                         uint64_t seed, int jobs = 1);

struct CriticalResult {
  double lambda_hat = 0;
  double lo = 0, hi = 0;          // final bracket
  int evals = 0;
  long long order_violations = 0; // survival inversions along the bisection
  double surv_lo = 0, surv_hi = 0; // survival at the initial bracket ends
};

// Bisects lambda until the survival probability from a single 1 at the origin
// crosses `target`. All evaluations share per-replica event streams built at
// lambda_hi and thinned down, so the estimated survival is exactly
// nondecreasing in lambda and the bracket stays consistent. Throws DomainError
// when the initial bracket does not straddle the target.
CriticalResult critical_bisect(Variant v, double alpha, double theta, const Box& box,
                               double t_max, double target, double tol,
                               double lambda_lo, double lambda_hi, int64_t reps,
                               uint64_t seed, int jobs = 1);

} // namespace sic
