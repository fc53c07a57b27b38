#pragma once
// Time-reversed set-valued companion process for the all-flip variant
// ("remenik"), built by replaying a realized event stream backward, plus
// Monte Carlo checks of the forward/backward hitting identities.
//
// The environment (the -1's) is autonomous: arrival marks put a site into
// state -1 no matter whether it held a 0 or a 1, and removal marks release
// it. Given the initial -1 set and the stream, each site's -1 occupancy is
// a deterministic union of half-open intervals [a,b). That timeline is what
// makes exact backward replay possible.

#include <cstdint>
#include <utility>
#include <vector>

#include "events.hpp"
#include "process.hpp"
#include "stats.hpp"

namespace sic {

// Per-site -1 occupancy intervals over [0, t], half-open [a,b), b may be +inf.
struct EnvTimeline {
  std::vector<std::vector<std::pair<double, double>>> iv;
  bool minus1_at(int32_t index, double t) const;
};

// Reconstructs the -1 occupancy of every site on [0, t] from an initial
// {0,-1} configuration and the stream's arrival/removal marks.
// env_init must contain no +1's and must live on the stream's box.
EnvTimeline build_env_timeline(const EventStream& s, const LatticeConfig& env_init,
                               double t);

struct DualResult {
  std::vector<int32_t> a_hat;   // backward-reachable set at dual time s = t
  std::vector<int32_t> b_hat0;  // forward -1 set at time t (= dual env at s = 0)
};

// Runs the backward process at horizon t: seeds C minus the time-t -1 set,
// then replays the stream in reverse. A death mark removes a site; a reversed
// arrow y->x recruits x when x is not -1 at that instant; crossing backward
// below the release time of a -1 interval removes the site.
// Throws DomainError if t exceeds the stream horizon, C leaves the box, or
// env_init is invalid.
DualResult dual_evolve(const EventStream& s, const LatticeConfig& env_init,
                       const std::vector<Site>& C, double t);

struct DualityCheck {
  EstimateCI lhs;  // forward runs seeded on A: {ones_t hits C and minus_t hits D}
  EstimateCI rhs;  // forward runs seeded on C: {ones_t hits A and minus_0 hits D}
  double z = 0.0;
};

// Distributional identity: both sides estimated from independent forward runs
// of the all-flip variant, initial law nu_X (equilibrium -1's, then 1's on X
// where not -1). D empty gives exact zeros.
DualityCheck duality_check(const std::vector<Site>& A, const std::vector<Site>& C,
                           const std::vector<Site>& D, double t, const ModelParams& p,
                           const Box& box, int64_t reps, uint64_t seed, int jobs = 1);

struct PathwiseCheck {
  int64_t failures = 0;        // streams where forward and backward events disagree
  int64_t env_mismatches = 0;  // streams where the reconstructed time-t -1 set is wrong
  int64_t hits = 0;            // streams where the (common) event occurred
};

// Pathwise identity: on every stream, the forward event
// {ones_t hits C and minus_t hits D} from nu_A must coincide with the backward
// event {a_hat hits A and minus_t hits D} computed on the same realization.
PathwiseCheck pathwise_duality_check(const std::vector<Site>& A,
                                     const std::vector<Site>& C,
                                     const std::vector<Site>& D, double t,
                                     const ModelParams& p, const Box& box,
                                     int64_t reps, uint64_t seed);

} // namespace sic
