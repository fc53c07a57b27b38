#pragma once
// Site percolation on the square lattice and on its matching lattice (the
// square lattice with both diagonals added): grid sampling, sponge crossings,
// cluster-size statistics, crossing-probability thresholds, and the solver for
// the initial-density threshold used by the d=2 phase construction.

#include <cstdint>
#include <vector>

#include "lattice.hpp"
#include "stats.hpp"

namespace sic {

struct PercGrid {
  Box box;
  Adjacency adj = Adjacency::ZNearest;
  std::vector<uint8_t> open; // one flag per box site (linear index order)
};

// i.i.d. open flags, deterministic in (seed, site). The per-site uniforms
// depend only on (seed, site index), so grids at p1 < p2 with the same seed
// are nested: every p1-open site is p2-open.
PercGrid sample_grid(double p, const Box& box, Adjacency adj, uint64_t seed);

enum class CrossDir { TopBottom, LeftRight };

// Open path across `rect` (confined to the rectangle) joining its two
// opposite sides under the grid's adjacency. rect must lie inside the box.
bool has_crossing(const PercGrid& g, const Rect& rect, CrossDir dir);

// Probability that all four crossing strips at scale N cross the long way
// (vertical strips top-bottom, horizontal strips left-right) simultaneously.
// The default adjacency is the matching lattice: the strips are narrow
// (width ~ N^eta), and square-lattice-only crossings of such strips need far
// larger N than is practical, so the matching lattice is the default and the
// square lattice remains available through `adj`.
EstimateCI four_crossings_prob(double p, int N, double eta, int64_t reps,
                               uint64_t seed, Adjacency adj = Adjacency::LStar,
                               int jobs = 1);

struct ClusterStats {
  EstimateCI chi;        // mean cluster size; |C| = 0 when the origin is closed
  double gamma_hat = 0;  // fitted tail rate: P(|C| >= n) ~ exp(-gamma_hat * n)
  double r2 = 0;         // quality of the tail fit
  std::vector<double> tail_n;     // n values entering the fit
  std::vector<double> tail_logp;  // log of the empirical P(|C| >= n)
  std::vector<int64_t> sizes;     // per-replica origin cluster sizes
  int64_t boundary_hits = 0;      // clusters that touched the box boundary
  double boundary_frac = 0;
  bool boundary_warning = false;  // true when more than 1% touched (chi biased low)
};

// Origin-cluster statistics at density p: lazy breadth-first growth with
// per-site uniforms keyed by (replica seed, site), so sizes are nondecreasing
// in p under a shared seed. size_cap > 0 truncates exploration (sizes are then
// floors); 0 means no cap beyond the box itself.
ClusterStats cluster_stats(double p, const Box& box, Adjacency adj, int64_t reps,
                           uint64_t seed, int64_t size_cap = 0, int jobs = 1);

struct ThresholdResult {
  double p_hat = 0;
  double lo = 0, hi = 0; // final bracket
  int evals = 0;
  int64_t reps_per_eval = 0;
};

// Density at which the left-right crossing probability of [0,N]^2 reaches
// target_prob. All densities are evaluated on common random numbers (one
// uniform per site per replica), making the estimated crossing probability
// exactly nondecreasing in p, so bisection is clean.
ThresholdResult threshold_bisect(Adjacency adj, int N, double target_prob, double tol,
                                 int64_t reps_per_eval, uint64_t seed, int jobs = 1);

struct P0Result {
  double p0 = 0;        // solved density
  double chi_star = 0;  // exact target: chi(p0) = 1 / (2 sqrt(-log q_lambda))
  double q_lambda = 0;  // single-site kill probability (1 - 1/e) e^{-4 lambda}
  double chi_at_p0 = 0; // estimated mean cluster size at the returned p0
  int iterations = 0;
};

// Solves -4 chi(p0)^2 log q_lambda = 1 for p0 by bisection over the density,
// estimating chi on a radius-64 square-lattice box with chi_budget replicas
// per evaluation (common random numbers across evaluations).
P0Result solve_p0(double lambda, double tol, int64_t chi_budget, uint64_t seed);

} // namespace sic
