#pragma once
// One-dimensional contact-process analysis tools: rightmost-particle tracking
// (speed and large-deviation tails), survival from finite seed sets, survival
// of trimmed interval configurations, and the moving-window ("parallelogram")
// crossing probability with an exact per-path audit.

#include <cstdint>
#include <vector>

#include "lattice.hpp"
#include "stats.hpp"

namespace sic {

// Rightmost 1 of a contact process on the given 1-d box at each sample time,
// started from 1's exactly on initial_ones (coordinates). Entries are -inf
// from the moment the process dies. wall_hit (optional) reports whether the
// rightmost particle ever reached the top end of the box.
std::vector<double> edge_trace(double lambda, const std::vector<int32_t>& initial_ones,
                               const Box& box, const std::vector<double>& sample_times,
                               uint64_t seed, bool* wall_hit = nullptr);

struct EdgeSpeedResult {
  EstimateCI v_hat;      // mean of r_{t_max} / t_max over surviving runs
  int64_t surviving = 0;
  int64_t extinct = 0;   // runs excluded from the mean
  int64_t wall_hits = 0;
  double wall_frac = 0;
};

// Front speed from the half-line start (all 1's on [-halfwidth, 0]).
// Throws DomainError when more than 1% of runs push the front into the box
// wall: the box is too small for this (lambda, t_max).
EdgeSpeedResult edge_speed(double lambda, double t_max, int32_t box_halfwidth,
                           int64_t reps, uint64_t seed, int jobs = 1);

struct EdgeTailResult {
  std::vector<double> ts;
  std::vector<EstimateCI> p_low;   // P(r_t <= a t); extinction counts as r = -inf
  std::vector<EstimateCI> p_high;  // P(r_t >= b t)
  double gamma0_hat = 0;           // decay rate fitted to log P(r_t <= a t)
  double gamma1_hat = 0;           // decay rate fitted to log P(r_t >= b t)
  double r2_low = 0, r2_high = 0;
  int64_t wall_hits = 0;
};

// Large-deviation tails of the front on a ladder of times (one run serves the
// whole ladder). Requires a < b; rates are fitted only over ladder points with
// a nonzero empirical probability.
EdgeTailResult edge_tail(double lambda, double a, double b, std::vector<double> ts,
                         int32_t box_halfwidth, int64_t reps, uint64_t seed,
                         int jobs = 1);

// Survival to t_max of the contact process started from 1's exactly on A
// (a horizon-truncated stand-in for survival forever). The box is sized
// automatically from A, lambda and t_max so the wall is out of reach.
EstimateCI finite_set_survival(double lambda, const std::vector<int32_t>& A,
                               double t_max, int64_t reps, uint64_t seed,
                               int jobs = 1);

struct EpsGoodResult {
  EstimateCI survival;
  double t_max_used = 0;  // defaulted to 2 * l when t_max <= 0
  int64_t kept_ones = 0;  // 1's surviving the trimming
};

// Survival probability of a {0,1} configuration on [0, l] after zeroing
// everything outside the central window [ceil(eps*N), l - ceil(eps*N)].
// Requires l >= 2N. Survival is truncated at t_max (default 2*l, reported).
EpsGoodResult epsilon_good(const std::vector<int8_t>& config, double epsilon,
                           int32_t N, double lambda, double t_max, int64_t reps,
                           uint64_t seed, int jobs = 1);

struct ParallelogramResult {
  EstimateCI prob;
  double t_L = 0;
  int32_t start_lo = 0, start_hi = 0; // seeded interval at time 0 (rounded outward)
  int32_t end_lo = 0, end_hi = 0;     // target interval at time t_L (rounded inward)
  int64_t audit_checked = 0;
  int64_t audit_failures = 0;
};

// Probability that a contact process confined to a moving window carries 1's
// from the start interval to the target interval. The window at time s is the
// real strip [-1.5*delta*L + v*s, -0.5*delta*L + v*s] (width delta*L, both
// edges moving at the input speed v); births land only inside the current
// window and sites are vacated as the trailing edge passes them. The run lasts
// t_L = (1 + 3*delta)*L / v. Every successful replica is audited by walking an
// explicit birth chain back to time 0 against the raw event stream.
ParallelogramResult parallelogram_open(double lambda, double L, double delta,
                                       double v_input, int64_t reps, uint64_t seed,
                                       int jobs = 1);

} // namespace sic
